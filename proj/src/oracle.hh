// oracle.hh -- brute-force ground truth for the abstraction pipelines.
//
// The oracle enumerates the (small) instances of a grammar, model-checks
// each one exhaustively with its own independent implementation of the
// query semantics, and compares the outcome against the counting
// abstraction and, where applicable, the exact pebble decision. It is
// deliberately slow and deliberately separate: nothing here reuses the
// abstraction's code paths, so an agreement actually means something.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "counting.hh"
#include "grammar.hh"
#include "specfile.hh"
#include "systems.hh"

namespace pcs {

/// A closed system from the grammar's language together with the ground
/// term that derived it.
struct Instance {
    HrTerm term;
    OpenSystem system;
};

/// All instances with at most max_vertices vertices, deduplicated up to
/// isomorphism (the first derivation of a graph wins), in derivation
/// order. An empty language yields an empty list.
std::vector<Instance> enumerate_instances(const TypeTable& tt, const HrGrammar& g,
                                          int max_vertices);

enum class ConcreteCover {
    Covered,       // a reachable marking satisfies every atom
    NotCovered,    // the full state space says no
    Inconclusive,  // truncated at state_cap before an answer
};

/// Exhaustive forward search over the instance's behavior, checking the
/// summed-count cover semantics directly on each reachable marking.
/// Covered is definitive the moment a covering marking appears, even if
/// the search would have been truncated later; NotCovered requires
/// exhausting the state space. A pinned source label missing from the
/// instance makes its atom unsatisfiable, so a positive demand on it is
/// NotCovered without any search.
ConcreteCover concrete_cover(const TypeTable& tt, const OpenSystem& s, const Query& q,
                             std::size_t state_cap);

struct OracleOptions {
    int max_vertices = 8;
    std::size_t state_cap = 1000000;
    unsigned threads = 0;  // 0: one per hardware thread
};

struct OracleReport {
    struct InstanceInfo {
        std::string term;
        int vertices = 0;
    };
    struct QueryResult {
        std::string id;
        bool skipped = false;  // reach queries: the oracle checks covers only
        bool abstraction_coverable = false;
        bool pebble_applicable = false;
        bool pebble_coverable = false;
        std::vector<ConcreteCover> per_instance;
    };
    struct Discrepancy {
        std::string lemma;  // "cover-soundness" or "pebble-exactness"
        std::string query;
        std::size_t instance = 0;
        std::string term;
    };

    std::vector<InstanceInfo> instances;
    std::vector<QueryResult> queries;
    std::vector<Discrepancy> discrepancies;

    bool clean() const { return discrepancies.empty(); }

    /// The full report as stable, line-oriented records: INSTANCE and
    /// ABSTRACT/RESULT lines, then DISCREPANCY lines, then a SUMMARY.
    /// Identical inputs produce byte-identical output.
    std::vector<std::string> lines() const;
};

/// Checks the two lemmas the pipelines rest on, at desk scale: a cover
/// found on some instance but declared uncoverable by the counting
/// abstraction breaks soundness ("cover-soundness"); one declared
/// uncoverable by the pebble decision breaks exactness
/// ("pebble-exactness"). Instances are checked in parallel and merged
/// back in order. `abstraction` substitutes a prebuilt -- possibly
/// deliberately damaged -- counting abstraction; the negative-control
/// tests use it to prove the oracle can actually catch a lie.
OracleReport check_soundness(const TypeTable& tt, const HrGrammar& g,
                             const std::vector<Query>& queries, const OracleOptions& opt,
                             const CountingAbstraction* abstraction = nullptr);

}  // namespace pcs
