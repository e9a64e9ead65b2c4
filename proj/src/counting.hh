/* counting.hh -- the counting abstraction: finitely many nets per grammar */

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "grammar.hh"
#include "petri.hh"
#include "specfile.hh"

namespace pcs {

/// One family of the abstraction: all derivations whose folded value is
/// `axiom_value`, compiled into a single marked net. The net has
///
///   - a start place `S` (one token initially),
///   - one place per derivable annotated nonterminal (`nt__...`),
///   - the folded state places (`q__<place>`, `src__<sigma>__<place>`),
///
/// derivation transitions (`init__...`) that consume a nonterminal
/// token, produce the right-hand side's nonterminal tokens and emit the
/// initial tokens of vertices whose label disappears (hidden labels at
/// restriction rules, still-visible ones at the axiom), and the folded
/// behavior transitions (`beh__...`). Token counts over the state
/// places overapproximate per-class process counts of every instance,
/// uniformly in the instance size.
struct CombinedNet {
    FoldedNet axiom_value;
    PetriNet pn;
    int start_place = -1;
    std::vector<int> nt_places;
    std::vector<int> state_places;           // class and pinned places
    std::vector<int> init_transitions;
    std::vector<int> behavior_transitions;
};

struct CountingAbstraction {
    HrGrammar normalized;
    std::vector<CombinedNet> nets;  // deterministic order
};

/// Filters the grammar through the folded-net algebra and builds one
/// combined net per folded axiom value.
CountingAbstraction build_counting(const TypeTable& tt, const HrGrammar& g);

/// The derivation part alone: the combined net with the behavior
/// transitions removed. Its reachable markings with no tokens left on
/// S or the nonterminal places are exactly the folded initial markings
/// of the family's instances, projected to the state places.
PetriNet derivation_only(const CombinedNet& net);

/// State places a query atom talks about in this net: the pinned place
/// for `Type*sigma.place`, otherwise the class place plus every pinned
/// place of a matching source label. May be empty (the family has no
/// such vertex).
std::vector<int> query_places(const TypeTable& tt, const CombinedNet& net, const QueryAtom& atom);

/// The upward-closed target set of a cover query as a finite basis:
/// every way of distributing each atom's count over its place group.
std::vector<PartialMarking> cover_targets(const TypeTable& tt, const CombinedNet& net,
                                          const Query& q);

struct CoverOutcome {
    bool coverable = false;               // in the abstraction
    int net_index = -1;                   // first family that covers
    std::vector<std::string> witness;     // derivation prefix, behavior suffix
};

/// Safe iff no family's combined net covers the query; a cover outcome
/// here never certifies the concrete system, only the abstraction.
CoverOutcome verify_cover(const TypeTable& tt, const CountingAbstraction& ca, const Query& q,
                          bool want_witness = false);

struct ReachOutcome {
    enum Kind {
        Unreachable,  // exhaustive within every family: certified negative
        Reachable,    // hit in some family's abstraction
        Truncated,    // state cap hit before an answer
    } kind = Truncated;
    int net_index = -1;
    std::vector<std::string> witness;
};

/// Explores each family's combined net breadth-first (up to state_cap
/// markings per family) for a marking with all derivation places empty
/// whose state-place projection matches the query exactly (unmentioned
/// state places must be zero).
ReachOutcome verify_reach(const TypeTable& tt, const CountingAbstraction& ca, const Query& q,
                          std::size_t state_cap);

}  // namespace pcs
