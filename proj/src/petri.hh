/* petri.hh -- Petri nets, markings, firing, quotients, coverability engines */

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace pcs {

using Weight = std::int64_t;

/// A marking assigns a token count to every place of the net it belongs
/// to; it is indexed by the net's place ids. Counts are 64-bit and all
/// arithmetic on them is overflow-checked (fire() throws on overflow).
using Marking = std::vector<Weight>;

/// An unmarked net: places, transitions, and sparse arc weights.
/// Place/transition ids are dense indices; names are kept for reporting
/// and for the deterministic tie-breaking rules (lexicographic on names).
struct Net {
    struct Stoich {
        // sorted by place id, weights > 0
        std::vector<std::pair<int, Weight>> pre;
        std::vector<std::pair<int, Weight>> post;
    };

    std::vector<std::string> places;
    std::vector<std::string> transitions;
    std::vector<Stoich> arcs;  // one entry per transition

    int add_place(std::string name);
    int add_transition(std::string name,
                       std::vector<std::pair<int, Weight>> pre,
                       std::vector<std::pair<int, Weight>> post);

    int place_id(const std::string& name) const;       // -1 if unknown
    int transition_id(const std::string& name) const;  // -1 if unknown

    Weight weight_in(int place, int trans) const;   // W(q,t)
    Weight weight_out(int trans, int place) const;  // W(t,q)
};

/// A net together with its initial marking.
struct PetriNet {
    Net net;
    Marking initial;
};

/// A partial marking: constraints on a subset of the places.
/// Entries are sorted by place id and unique.
struct PartialMarking {
    std::vector<std::pair<int, Weight>> entries;

    void set(int place, Weight w);
    Weight get(int place) const;  // 0 if absent
};

/// A total map from places to class ids (0..num_classes-1) with a
/// canonical name per class; quotient() output places follow the
/// lexicographic order of class names.
struct PlaceEquivalence {
    std::vector<int> class_of;             // indexed by place id
    std::vector<std::string> class_names;  // indexed by class id
};

/// True iff m(q) >= W(q,t) for all places q.
bool is_enabled(const Net& net, const Marking& m, int trans);

/// m'(q) = m(q) - W(q,t) + W(t,q). Requires is_enabled; throws
/// std::overflow_error if a count would exceed the 64-bit range.
Marking fire(const Net& net, const Marking& m, int trans);

/// True iff m(q) >= target(q) for every constrained place.
bool covers(const Marking& m, const PartialMarking& target);

struct ReachResult {
    std::vector<Marking> markings;  // BFS discovery order, initial first
    bool truncated = false;
};

/// Breadth-first closure of the initial marking under fire(), stopping
/// when state_cap distinct markings have been found (truncated=true).
/// The optional expand predicate prunes exploration: markings for which
/// it returns false are reported but their successors are not visited
/// (callers use it to bound otherwise-infinite state spaces).
ReachResult reachable_bounded(
    const PetriNet& pn, std::size_t state_cap,
    const std::function<bool(const Marking&)>& expand = nullptr);

struct CoverResult {
    bool coverable = false;
    std::vector<int> witness;  // transition ids, fireable from initial
};

/// Decides coverability of an upward-closed target set given by a finite
/// basis of partial markings, using the standard backward algorithm over
/// minimal bases of upward-closed sets:
///
///   pre_t(b)(q) = max(W(q,t), b(q) - W(t,q) + W(q,t))
///
/// with subsumption pruning. Terminates on every input (Dickson's
/// lemma). When coverable, the witness replays the backward chain
/// forward; ties between predecessors are broken towards the
/// lexicographically smallest transition name, so witnesses are
/// deterministic.
CoverResult backward_coverable_any(const PetriNet& pn,
                                   const std::vector<PartialMarking>& targets);

/// Single-target convenience form of backward_coverable_any.
CoverResult backward_coverable(const PetriNet& pn, const PartialMarking& target);

/// Quotient of a net by a place equivalence: class weights are the sums
/// of the member weights, the initial marking is summed per class, and
/// transitions whose class-level pre/post vectors coincide are merged
/// into one, named after the lexicographically smallest member.
/// Output places are sorted by class name, transitions by name.
PetriNet quotient(const PetriNet& pn, const PlaceEquivalence& eq);

}  // namespace pcs
