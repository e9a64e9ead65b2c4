/* behaviors.hh -- marked-net semantics of systems and the folded finite abstraction */

#pragma once

#include <compare>
#include <optional>

#include "petri.hh"
#include "systems.hh"

namespace pcs {

/// The marked net describing a system's behavior: one place per
/// (local place, vertex) pair, one transition per edge (firing both
/// endpoint transitions atomically) and per internal transition
/// occurrence. Keeps enough bookkeeping to map net objects back to the
/// system.
struct Behavior {
    PetriNet pn;
    OpenSystem system;
    /// net place -> (vertex, local place index of its type)
    std::vector<std::pair<int, int>> place_of;
    /// net transition -> edge index in system.edges, or -1 for internal
    std::vector<int> edge_of;
    /// for internal transitions: (vertex, local transition index)
    std::vector<std::pair<int, int>> internal_of;

    int place_id(int vertex, int local_place) const;
};

Behavior beta(const TypeTable& tt, const OpenSystem& s);

/// Identity of a place in a folded net: either the merged class of all
/// non-source vertices' copies of a place, or the still-distinguished
/// copy owned by a source-labeled vertex.
struct FKey {
    bool source = false;
    std::string sigma;  // empty for class places
    std::string place;  // globally unique place name
    auto operator<=>(const FKey&) const = default;

    static FKey cls(std::string place) { return {false, "", std::move(place)}; }
    static FKey src(std::string sigma, std::string place) {
        return {true, std::move(sigma), std::move(place)};
    }
};

/// A folded transition, as its sorted pre/post weight vectors. Folded
/// transitions with equal vectors are indistinguishable and collapse.
struct FTrans {
    std::vector<std::pair<FKey, Weight>> pre, post;
    auto operator<=>(const FTrans&) const = default;
};

/// Finite abstraction of an open system's behavior after merging all
/// same-typed non-source vertices per place. Values with `initial`
/// absent are the marking-free abstractions the fixed-point computation
/// ranges over; folding a concrete behavior keeps its initial marking.
struct FoldedNet {
    std::set<FKey> places;
    std::set<FTrans> transitions;
    std::set<std::string> visible;  // source labels still exposed
    std::optional<std::map<FKey, Weight>> initial;
    auto operator<=>(const FoldedNet&) const = default;
};

/// Folds a behavior: places of source vertices stay pinned to their
/// label, all other copies of a place merge into one class place;
/// transitions with identical folded vectors collapse; the initial
/// marking is summed accordingly.
FoldedNet fold(const TypeTable& tt, const Behavior& b);

FoldedNet drop_marking(FoldedNet f);

/// The folded-net composition algebra. Each operation equals folding
/// the corresponding operation on behaviors; computed directly on the
/// finite values.
FoldedNet folded_edge_const(const TypeTable& tt, const std::string& t1, const std::string& t2,
                            const std::string& s1, const std::string& s2);
FoldedNet folded_restrict(const TypeTable& tt, FoldedNet f, const std::set<std::string>& tau);
FoldedNet folded_rename(const TypeTable& tt, FoldedNet f,
                        const std::map<std::string, std::string>& alpha);
FoldedNet folded_compose(const TypeTable& tt, const FoldedNet& a, const FoldedNet& b);

/// Renders the folded net into an ordinary marked net (used to continue
/// with reachability/coverability machinery). Place names follow the
/// export convention: `q__<place>` for class places and
/// `src__<sigma>__<place>` for pinned ones.
PetriNet folded_to_petri(const FoldedNet& f);
std::string fkey_name(const FKey& k);

/// Throws std::logic_error when a structural invariant is broken
/// (weights outside a transition's 1..2 endpoint budget, a visible
/// label without places, ...). Cheap; used by tests and after parsing.
void check_folded_invariants(const FoldedNet& f);

std::string to_string(const FoldedNet& f);

}  // namespace pcs
