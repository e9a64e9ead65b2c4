/* counting.cc -- the counting abstraction: finitely many nets per grammar */

#include "counting.hh"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

namespace pcs {

namespace {

std::string sanitize(const std::string& s) {
    std::string out;
    for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    return out;
}

std::string hash8(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[16];
    std::snprintf(buf, sizeof buf, "%08llx",
                  static_cast<unsigned long long>((h & 0xffffffffull) ^ (h >> 32)));
    return buf;
}

using Annotated = std::pair<std::string, FoldedNet>;

/// The initially marked place of a source label's type, as a state key.
FKey initial_key(const TypeTable& tt, const std::string& sigma, bool pinned) {
    const ProcessType& ty = tt.types[tt.type_of_source(sigma)];
    const std::string& place = ty.places[ty.initial_place];
    return pinned ? FKey::src(sigma, place) : FKey::cls(place);
}

CombinedNet build_combined(const TypeTable& tt, const HrGrammar& norm,
                           const Filtered<FoldedAlgebra>& filt, const FoldedNet& value) {
    CombinedNet net;
    net.axiom_value = value;

    // Annotated nonterminals derivable from the annotated axiom.
    std::set<Annotated> reachable;
    reachable.insert({norm.axiom, value});
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& ar : filt.rules) {
            const HrRule& rule = norm.rules[ar.rule];
            if (!reachable.count({rule.lhs, ar.result})) continue;
            std::vector<std::string> occs = rhs_nonterminals(rule.rhs);
            for (std::size_t i = 0; i < occs.size(); ++i)
                if (reachable.insert({occs[i], ar.args[i]}).second) changed = true;
        }
    }

    PetriNet& pn = net.pn;
    net.start_place = pn.net.add_place("S");
    pn.initial.push_back(1);

    std::map<Annotated, int> nt_place;
    for (const auto& ant : reachable) {
        std::string name =
            "nt__" + sanitize(ant.first) + "__" + hash8(ant.first + "|" + to_string(ant.second));
        while (pn.net.place_id(name) >= 0) name += "x";  // paranoid hash-collision bump
        int id = pn.net.add_place(name);
        pn.initial.push_back(0);
        nt_place.emplace(ant, id);
        net.nt_places.push_back(id);
    }

    std::map<FKey, int> state_place;
    for (const FKey& k : value.places) {
        int id = pn.net.add_place(fkey_name(k));
        pn.initial.push_back(0);
        state_place.emplace(k, id);
        net.state_places.push_back(id);
    }
    auto state_id = [&](const FKey& k) {
        auto it = state_place.find(k);
        if (it == state_place.end())
            throw std::logic_error("emission outside the axiom value: " + fkey_name(k));
        return it->second;
    };

    // The derivation starter: materializes the axiom's nonterminal and
    // the initial tokens of the vertices that stay visible for good.
    {
        std::map<int, Weight> post;
        post[nt_place.at({norm.axiom, value})] += 1;
        for (const auto& sigma : value.visible) post[state_id(initial_key(tt, sigma, true))] += 1;
        int t = pn.net.add_transition("init__axiom", {{net.start_place, 1}},
                                      {post.begin(), post.end()});
        net.init_transitions.push_back(t);
    }

    // One transition per realizable annotated rule of this family.
    int k = 0;
    for (const auto& ar : filt.rules) {
        const HrRule& rule = norm.rules[ar.rule];
        if (!reachable.count({rule.lhs, ar.result})) continue;
        std::map<int, Weight> post;
        std::vector<std::string> occs = rhs_nonterminals(rule.rhs);
        for (std::size_t i = 0; i < occs.size(); ++i) post[nt_place.at({occs[i], ar.args[i]})] += 1;
        if (rule.rhs.kind == HrTerm::Restrict) {
            // Hidden labels: their vertices' initial tokens drop into
            // the merged classes here.
            for (const auto& sigma : ar.args.at(0).visible)
                if (!rule.rhs.tau.count(sigma)) post[state_id(initial_key(tt, sigma, false))] += 1;
        }
        int t = pn.net.add_transition("init__r" + std::to_string(k++),
                                      {{nt_place.at({rule.lhs, ar.result}), 1}},
                                      {post.begin(), post.end()});
        net.init_transitions.push_back(t);
    }

    int b = 0;
    for (const FTrans& ft : value.transitions) {
        std::vector<std::pair<int, Weight>> pre, post;
        for (const auto& [key, w] : ft.pre) pre.emplace_back(state_id(key), w);
        for (const auto& [key, w] : ft.post) post.emplace_back(state_id(key), w);
        int t = pn.net.add_transition("beh__t" + std::to_string(b++), pre, post);
        net.behavior_transitions.push_back(t);
    }
    return net;
}

}  // namespace

CountingAbstraction build_counting(const TypeTable& tt, const HrGrammar& g) {
    CountingAbstraction ca;
    ca.normalized = normalize(g);
    FoldedAlgebra alg{&tt};
    Filtered<FoldedAlgebra> filt = filter_grammar(alg, ca.normalized);
    for (const FoldedNet& value : filt.axiom_values)
        ca.nets.push_back(build_combined(tt, ca.normalized, filt, value));
    return ca;
}

PetriNet derivation_only(const CombinedNet& net) {
    PetriNet out;
    out.net.places = net.pn.net.places;
    out.initial = net.pn.initial;
    for (int t : net.init_transitions)
        out.net.add_transition(net.pn.net.transitions[t], net.pn.net.arcs[t].pre,
                               net.pn.net.arcs[t].post);
    return out;
}

std::vector<int> query_places(const TypeTable& tt, const CombinedNet& net, const QueryAtom& atom) {
    std::vector<int> group;
    auto add = [&](const FKey& k) {
        int id = net.pn.net.place_id(fkey_name(k));
        if (id >= 0) group.push_back(id);
    };
    if (!atom.sigma.empty()) {
        add(FKey::src(atom.sigma, atom.place));
        return group;
    }
    add(FKey::cls(atom.place));
    int ti = tt.type_idx(atom.type);
    for (const auto& sigma : net.axiom_value.visible)
        if (tt.type_of_source(sigma) == ti) add(FKey::src(sigma, atom.place));
    return group;
}

std::vector<PartialMarking> cover_targets(const TypeTable& tt, const CombinedNet& net,
                                          const Query& q) {
    // Token counts of one class are spread over the class place and the
    // pinned places, so an atom's bound becomes a disjunction over all
    // ways to split its count across the group.
    std::vector<std::pair<std::vector<int>, Weight>> groups;
    for (const auto& atom : q.atoms) {
        std::vector<int> g = query_places(tt, net, atom);
        if (g.empty() && atom.count > 0) return {};  // no such vertex in this family
        if (atom.count > 0) groups.emplace_back(std::move(g), atom.count);
    }

    std::vector<PartialMarking> out;
    std::map<int, Weight> acc;
    auto emit = [&]() {
        PartialMarking pm;
        for (const auto& [p, w] : acc)
            if (w > 0) pm.set(p, w);
        out.push_back(std::move(pm));
    };
    auto split = [&](auto&& self, std::size_t gi) -> void {
        if (gi == groups.size()) return emit();
        const auto& [places, count] = groups[gi];
        auto over = [&](auto&& me, std::size_t pi, Weight left) -> void {
            if (pi + 1 == places.size()) {
                acc[places[pi]] += left;
                self(self, gi + 1);
                acc[places[pi]] -= left;
                return;
            }
            for (Weight w = 0; w <= left; ++w) {
                acc[places[pi]] += w;
                me(me, pi + 1, left - w);
                acc[places[pi]] -= w;
            }
        };
        over(over, 0, count);
    };
    split(split, 0);
    return out;
}

namespace {

/// Derivation steps commute ahead of behavior steps (they touch
/// disjoint places except for one-way emissions), so witnesses are
/// presented with the whole derivation first. Falls back to the found
/// order if the replay check fails.
std::vector<std::string> present_witness(const CombinedNet& net, const std::vector<int>& trans) {
    std::set<int> init(net.init_transitions.begin(), net.init_transitions.end());
    std::vector<int> ordered = trans;
    std::stable_partition(ordered.begin(), ordered.end(), [&](int t) { return init.count(t); });

    Marking m = net.pn.initial;
    bool ok = true;
    for (int t : ordered) {
        if (!is_enabled(net.pn.net, m, t)) {
            ok = false;
            break;
        }
        m = fire(net.pn.net, m, t);
    }
    if (!ok) ordered = trans;

    std::vector<std::string> names;
    for (int t : ordered) names.push_back(net.pn.net.transitions[t]);
    return names;
}

}  // namespace

CoverOutcome verify_cover(const TypeTable& tt, const CountingAbstraction& ca, const Query& q,
                          bool want_witness) {
    CoverOutcome out;
    for (std::size_t i = 0; i < ca.nets.size(); ++i) {
        const CombinedNet& net = ca.nets[i];
        std::vector<PartialMarking> targets = cover_targets(tt, net, q);
        if (targets.empty()) continue;
        CoverResult r = backward_coverable_any(net.pn, targets);
        if (r.coverable) {
            out.coverable = true;
            out.net_index = static_cast<int>(i);
            if (want_witness) out.witness = present_witness(net, r.witness);
            return out;
        }
    }
    return out;
}

ReachOutcome verify_reach(const TypeTable& tt, const CountingAbstraction& ca, const Query& q,
                          std::size_t state_cap) {
    bool any_truncated = false;
    for (std::size_t i = 0; i < ca.nets.size(); ++i) {
        const CombinedNet& net = ca.nets[i];

        std::vector<std::pair<std::vector<int>, Weight>> groups;
        bool impossible = false;
        for (const auto& atom : q.atoms) {
            std::vector<int> g = query_places(tt, net, atom);
            if (g.empty() && atom.count > 0) {
                impossible = true;
                break;
            }
            groups.emplace_back(std::move(g), atom.count);
        }
        if (impossible) continue;

        std::set<int> mentioned;
        for (const auto& [g, w] : groups) mentioned.insert(g.begin(), g.end());

        auto matches = [&](const Marking& m) {
            if (m[net.start_place] != 0) return false;
            for (int p : net.nt_places)
                if (m[p] != 0) return false;
            for (const auto& [g, w] : groups) {
                Weight sum = 0;
                for (int p : g) sum += m[p];
                if (sum != w) return false;
            }
            for (int p : net.state_places)
                if (!mentioned.count(p) && m[p] != 0) return false;
            return true;
        };

        // Plain breadth-first search with predecessor links so a hit
        // can be replayed as a firing sequence.
        struct Node {
            Marking m;
            int parent, via;
        };
        std::vector<Node> nodes{{net.pn.initial, -1, -1}};
        std::map<Marking, int> seen{{net.pn.initial, 0}};
        std::deque<int> todo{0};
        bool truncated = false;
        int hit = matches(net.pn.initial) ? 0 : -1;

        while (hit < 0 && !todo.empty()) {
            int cur = todo.front();
            todo.pop_front();
            for (int t = 0; t < static_cast<int>(net.pn.net.transitions.size()) && hit < 0; ++t) {
                Marking m = nodes[cur].m;  // copy: fire() needs the source intact
                if (!is_enabled(net.pn.net, m, t)) continue;
                Marking next = fire(net.pn.net, m, t);
                if (seen.count(next)) continue;
                if (nodes.size() >= state_cap) {
                    truncated = true;
                    continue;
                }
                seen.emplace(next, static_cast<int>(nodes.size()));
                nodes.push_back({std::move(next), cur, t});
                todo.push_back(static_cast<int>(nodes.size()) - 1);
                if (matches(nodes.back().m)) hit = static_cast<int>(nodes.size()) - 1;
            }
        }

        if (hit >= 0) {
            ReachOutcome out;
            out.kind = ReachOutcome::Reachable;
            out.net_index = static_cast<int>(i);
            std::vector<int> path;
            for (int n = hit; nodes[n].parent >= 0; n = nodes[n].parent) path.push_back(nodes[n].via);
            std::reverse(path.begin(), path.end());
            for (int t : path) out.witness.push_back(net.pn.net.transitions[t]);
            return out;
        }
        any_truncated = any_truncated || truncated;
    }
    ReachOutcome out;
    out.kind = any_truncated ? ReachOutcome::Truncated : ReachOutcome::Unreachable;
    return out;
}

}  // namespace pcs
