/* pebble.hh -- exact coverability for pebble-passing systems */

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "behaviors.hh"
#include "grammar.hh"
#include "specfile.hh"
#include "systems.hh"

namespace pcs {

/// Result of the structural check for the pebble-passing shape. A type
/// qualifies when it has exactly two places and exactly two observable
/// transitions, named `send` and `recv` and mutually inverse: a single
/// pebble either sits on the type's "top" place (send's preset) or is
/// absent, and every interaction passes it across an edge. A grammar
/// qualifies when all declared types do and every edge constant pairs a
/// send with a recv.
struct PpsCheck {
    bool ok = false;
    std::string offending;  // first violating construct when !ok

    struct TypeShape {
        int top = -1;   // local index of the pebble-holding place
        int send = -1;  // transition index: top -> bottom
        int recv = -1;  // transition index: bottom -> top
    };
    std::vector<TypeShape> shape;  // by type index; meaningful when ok
};

PpsCheck check_pps_types(const TypeTable& tt);
PpsCheck check_pps(const TypeTable& tt, const HrGrammar& g);

/// True when the exact decision procedure can answer `q` on a grammar
/// whose check_pps passed: a cover query with all atoms unpinned.
bool pps_applicable(const Query& q);

// --- footprints -------------------------------------------------------

/// Pebble count per vertex. Markings reachable from the initial one
/// carry 0 or 1 per vertex; sums of edge effects range over all of int.
using Footprint = std::vector<int>;

bool valid_footprint(const Footprint& fp);  // every entry 0 or 1

/// Pebble placement of the initial marking of beta(s).
Footprint initial_footprint(const TypeTable& tt, const PpsCheck& pps, const OpenSystem& s);

/// Pebble placement of an arbitrary marking m of b.pn.
Footprint marking_footprint(const PpsCheck& pps, const Behavior& b, const Marking& m);

/// The sending/receiving endpoints of an edge. Throws
/// std::invalid_argument when the edge does not pair a send with a recv.
struct DirectedEdge {
    int tail = -1;  // loses the pebble
    int head = -1;  // gains it
};
DirectedEdge edge_direction(const PpsCheck& pps, const OpenSystem& s, const OpenSystem::Edge& e);

/// Net effect of firing the given edges (indices into s.edges) in any
/// order: -1 per firing on the tail, +1 on the head. Throws
/// std::invalid_argument on an out-of-range index.
Footprint footprint_of_sequence(const PpsCheck& pps, const OpenSystem& s,
                                const std::vector<int>& seq);

/// Whether some subsequence of seq -- same multiset effect, each edge
/// fired at most as often -- can actually fire from the marking with
/// footprint `start`. Decided by the footprint test alone: the answer
/// is "start + footprint_of_sequence(seq) is a valid footprint".
bool fireable_subsequence_exists(const PpsCheck& pps, const OpenSystem& s, const Footprint& start,
                                 const std::vector<int>& seq);

/// Constructive companion to fireable_subsequence_exists: an ordered,
/// fireable edge sequence with the same summed footprint as seq and
/// pointwise no more firings per edge, or nullopt when none exists.
/// `start` must be a valid footprint.
std::optional<std::vector<int>> extract_fireable_subsequence(const PpsCheck& pps,
                                                             const OpenSystem& s,
                                                             const Footprint& start,
                                                             const std::vector<int>& seq);

// --- the flow abstraction ----------------------------------------------

/// Everything the flow operations need to know about one query: the
/// demanded token counts per (globally named) place and the resulting
/// per-vertex degree budget K, the total demand. Sequences of degree
/// larger than K are never needed to cover the target, so the
/// abstraction can cap all counters at K.
struct FlowContext {
    const TypeTable* tt = nullptr;
    const PpsCheck* pps = nullptr;
    std::map<std::string, Weight> target;  // place name -> demanded tokens (> 0)
    Weight K = 0;
};

/// Drops non-positive demands, validates place names, sums K. Throws
/// std::invalid_argument on an unknown place.
FlowContext make_flow_context(const TypeTable& tt, const PpsCheck& pps,
                              const std::map<std::string, Weight>& target);

/// One abstract firing multiset as seen from a partially built system:
/// per still-visible source its received (f_plus) and sent (f_minus)
/// pebble counts, both capped at K, plus per queried place how many
/// already-hidden vertices finish on it (capped by the demand, which
/// keeps the space finite).
struct FlowTuple {
    std::map<std::string, Weight> f_plus, f_minus;  // keyed by visible label
    std::map<std::string, Weight> n;                // keyed by queried place
    auto operator<=>(const FlowTuple&) const = default;
};

/// A nonterminal's worth of flow tuples; f_plus/f_minus domains always
/// equal `visible`.
struct FlowSet {
    std::set<std::string> visible;
    std::set<FlowTuple> tuples;
    auto operator<=>(const FlowSet&) const = default;
};

/// The flow image of `edge (t1,t2) (s1,s2)`: one tuple per firing count
/// k in 0..K, charging k received to the head label and k sent to the
/// tail label.
FlowSet flow_edge_const(const FlowContext& ctx, const std::string& t1, const std::string& t2,
                        const std::string& s1, const std::string& s2);

/// Hides every visible label outside tau. A hidden vertex's final
/// pebble count, received - sent + initial, must land on 0 or 1 --
/// tuples violating that are dropped -- and the vertex is then counted
/// toward the queried place it finishes on.
FlowSet flow_restrict(const FlowContext& ctx, const FlowSet& f, const std::set<std::string>& tau);

FlowSet flow_rename(const FlowContext& ctx, const FlowSet& f,
                    const std::map<std::string, std::string>& alpha);

/// Fused labels add their counts; tuples exceeding the budget K on any
/// label are dropped; finished-vertex counts add, capped by the demand.
FlowSet flow_compose(const FlowContext& ctx, const FlowSet& a, const FlowSet& b);

/// Exact parameterized coverability: can some system generated by the
/// grammar reach a marking with at least target(p) tokens on every
/// place p? Evaluates the grammar in the flow abstraction, hides all
/// remaining sources of each axiom value, and looks for a tuple whose
/// finished-vertex counts meet every demand. Throws
/// std::invalid_argument when the grammar is not pebble-passing or a
/// target place is unknown.
bool decide_cover_pps(const TypeTable& tt, const HrGrammar& g,
                      const std::map<std::string, Weight>& target);

/// Query front end; additionally rejects reach queries and pinned atoms.
bool decide_cover_pps(const TypeTable& tt, const HrGrammar& g, const Query& q);

}  // namespace pcs
