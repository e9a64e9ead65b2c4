/* pebble.cc -- exact coverability for pebble-passing systems */

#include "pebble.hh"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace pcs {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

/// 1 when the type starts with its pebble present, 0 otherwise.
Weight initial_pebble(const FlowContext& ctx, int type) {
    return ctx.tt->types[type].initial_place == ctx.pps->shape[type].top ? 1 : 0;
}

/// Scans a rule body for edge constants that do not pass a pebble.
void scan_term(const TypeTable& tt, const HrTerm& t, std::string& offending) {
    if (!offending.empty()) return;
    if (t.kind == HrTerm::Edge) {
        bool ordered = t.t1 == "send" && t.t2 == "recv";
        bool flipped = t.t1 == "recv" && t.t2 == "send";
        if (!ordered && !flipped)
            offending = "edge (" + t.t1 + "," + t.t2 + ") (" + t.s1 + "," + t.s2 +
                        ") does not pass a pebble";
        return;
    }
    for (const auto& c : t.children) scan_term(tt, c, offending);
}

// --- tuple-level cores shared by the set operations and the algebra ---

FlowTuple zero_tuple(const FlowContext& ctx, const std::set<std::string>& visible) {
    FlowTuple t;
    for (const auto& s : visible) {
        t.f_plus[s] = 0;
        t.f_minus[s] = 0;
    }
    for (const auto& [p, c] : ctx.target) {
        (void)c;
        t.n[p] = 0;
    }
    return t;
}

/// Hides every label of t outside tau; nullopt when a hidden vertex
/// cannot end on 0 or 1 pebbles.
std::optional<FlowTuple> hide_outside(const FlowContext& ctx, FlowTuple t,
                                      const std::set<std::string>& tau) {
    std::vector<std::string> hidden;
    for (const auto& [sigma, in] : t.f_plus)
        if (!tau.count(sigma)) hidden.push_back(sigma);
    for (const auto& sigma : hidden) {
        int type = ctx.tt->type_of_source(sigma);
        Weight final_count = t.f_plus.at(sigma) - t.f_minus.at(sigma) + initial_pebble(ctx, type);
        if (final_count != 0 && final_count != 1) return std::nullopt;
        const ProcessType& pt = ctx.tt->types[type];
        int top = ctx.pps->shape[type].top;
        const std::string& place = pt.places[final_count == 1 ? top : 1 - top];
        if (auto it = t.n.find(place); it != t.n.end())
            it->second = std::min(ctx.target.at(place), it->second + 1);
        t.f_plus.erase(sigma);
        t.f_minus.erase(sigma);
    }
    return t;
}

std::optional<FlowTuple> compose_tuples(const FlowContext& ctx, const FlowTuple& a,
                                        const FlowTuple& b) {
    FlowTuple r = a;
    for (const auto& [sigma, in] : b.f_plus)
        if ((r.f_plus[sigma] += in) > ctx.K) return std::nullopt;
    for (const auto& [sigma, out] : b.f_minus)
        if ((r.f_minus[sigma] += out) > ctx.K) return std::nullopt;
    for (const auto& [p, c] : b.n) r.n[p] = std::min(ctx.target.at(p), r.n.at(p) + c);
    return r;
}

FlowTuple rename_tuple(const FlowContext& ctx, const FlowTuple& t,
                       const std::map<std::string, std::string>& alpha) {
    auto rekey = [&](const std::map<std::string, Weight>& m) {
        std::map<std::string, Weight> out;
        for (const auto& [sigma, w] : m) {
            auto it = alpha.find(sigma);
            const std::string& fresh = it == alpha.end() ? sigma : it->second;
            if (it != alpha.end() &&
                ctx.tt->type_of_source(fresh) != ctx.tt->type_of_source(sigma))
                fail("rename " + sigma + "->" + fresh + " does not preserve the source type");
            if (!out.emplace(fresh, w).second) fail("rename is not injective at " + fresh);
        }
        return out;
    };
    FlowTuple r;
    r.f_plus = rekey(t.f_plus);
    r.f_minus = rekey(t.f_minus);
    r.n = t.n;
    return r;
}

/// Adapter feeding the tuple operations to the generic grammar
/// filtering: one value per (visible set, tuple) pair, so nonterminal
/// languages are plain tuple sets.
struct TupleAlgebra {
    const FlowContext* ctx;
    using Value = std::pair<std::set<std::string>, FlowTuple>;

    std::vector<Value> edge(const std::string& t1, const std::string& t2, const std::string& s1,
                            const std::string& s2) const {
        FlowSet fs = flow_edge_const(*ctx, t1, t2, s1, s2);
        std::vector<Value> out;
        for (const auto& t : fs.tuples) out.push_back({fs.visible, t});
        return out;
    }
    std::vector<Value> restrict_(const std::set<std::string>& tau, const Value& v) const {
        auto r = hide_outside(*ctx, v.second, tau);
        if (!r) return {};
        std::set<std::string> vis;
        for (const auto& s : v.first)
            if (tau.count(s)) vis.insert(s);
        return {{std::move(vis), std::move(*r)}};
    }
    std::vector<Value> rename(const std::map<std::string, std::string>& alpha,
                              const Value& v) const {
        std::set<std::string> vis;
        for (const auto& s : v.first) {
            auto it = alpha.find(s);
            vis.insert(it == alpha.end() ? s : it->second);
        }
        return {{std::move(vis), rename_tuple(*ctx, v.second, alpha)}};
    }
    std::vector<Value> compose(const Value& a, const Value& b) const {
        auto r = compose_tuples(*ctx, a.second, b.second);
        if (!r) return {};
        std::set<std::string> vis = a.first;
        vis.insert(b.first.begin(), b.first.end());
        return {{std::move(vis), std::move(*r)}};
    }
};

}  // namespace

PpsCheck check_pps_types(const TypeTable& tt) {
    PpsCheck out;
    out.shape.resize(tt.types.size());
    for (std::size_t ti = 0; ti < tt.types.size(); ++ti) {
        const ProcessType& t = tt.types[ti];
        if (t.places.size() != 2) {
            out.offending = "type " + t.name + " needs exactly two places";
            return out;
        }
        int si = t.trans_idx("send"), ri = t.trans_idx("recv");
        if (t.transitions.size() != 2 || si < 0 || ri < 0) {
            out.offending =
                "type " + t.name + " needs exactly the observable transitions send and recv";
            return out;
        }
        const auto& snd = t.transitions[si];
        const auto& rcv = t.transitions[ri];
        if (!snd.observable || !rcv.observable) {
            out.offending = "type " + t.name + ": send and recv must be observable";
            return out;
        }
        if (snd.pre == snd.post || rcv.pre != snd.post || rcv.post != snd.pre) {
            out.offending = "type " + t.name + ": recv must undo send";
            return out;
        }
        out.shape[ti] = {snd.pre, si, ri};
    }
    out.ok = true;
    return out;
}

PpsCheck check_pps(const TypeTable& tt, const HrGrammar& g) {
    PpsCheck out = check_pps_types(tt);
    if (!out.ok) return out;
    std::string offending;
    for (const auto& r : g.rules) scan_term(tt, r.rhs, offending);
    if (!offending.empty()) {
        out.ok = false;
        out.offending = std::move(offending);
        out.shape.clear();
    }
    return out;
}

bool pps_applicable(const Query& q) {
    if (!q.cover) return false;
    return std::all_of(q.atoms.begin(), q.atoms.end(),
                       [](const QueryAtom& a) { return a.sigma.empty(); });
}

bool valid_footprint(const Footprint& fp) {
    return std::all_of(fp.begin(), fp.end(), [](int c) { return c == 0 || c == 1; });
}

Footprint initial_footprint(const TypeTable& tt, const PpsCheck& pps, const OpenSystem& s) {
    Footprint fp(s.vertex_count(), 0);
    for (std::size_t v = 0; v < s.vertex_count(); ++v)
        fp[v] = tt.types[s.vtype[v]].initial_place == pps.shape[s.vtype[v]].top ? 1 : 0;
    return fp;
}

Footprint marking_footprint(const PpsCheck& pps, const Behavior& b, const Marking& m) {
    Footprint fp(b.system.vertex_count(), 0);
    for (std::size_t i = 0; i < b.place_of.size(); ++i) {
        auto [v, lp] = b.place_of[i];
        if (lp == pps.shape[b.system.vtype[v]].top) fp[v] += static_cast<int>(m[i]);
    }
    return fp;
}

DirectedEdge edge_direction(const PpsCheck& pps, const OpenSystem& s, const OpenSystem::Edge& e) {
    bool first_sends = e.t1 == pps.shape[s.vtype[e.v1]].send;
    bool second_sends = e.t2 == pps.shape[s.vtype[e.v2]].send;
    if (first_sends == second_sends) fail("edge does not pair a send with a recv");
    return first_sends ? DirectedEdge{e.v1, e.v2} : DirectedEdge{e.v2, e.v1};
}

Footprint footprint_of_sequence(const PpsCheck& pps, const OpenSystem& s,
                                const std::vector<int>& seq) {
    Footprint fp(s.vertex_count(), 0);
    for (int ei : seq) {
        if (ei < 0 || ei >= static_cast<int>(s.edges.size()))
            fail("unknown edge index " + std::to_string(ei));
        DirectedEdge d = edge_direction(pps, s, s.edges[ei]);
        --fp[d.tail];
        ++fp[d.head];
    }
    return fp;
}

bool fireable_subsequence_exists(const PpsCheck& pps, const OpenSystem& s, const Footprint& start,
                                 const std::vector<int>& seq) {
    Footprint fp = footprint_of_sequence(pps, s, seq);
    for (std::size_t v = 0; v < fp.size(); ++v) fp[v] += start.at(v);
    return valid_footprint(fp);
}

std::optional<std::vector<int>> extract_fireable_subsequence(const PpsCheck& pps,
                                                             const OpenSystem& s,
                                                             const Footprint& start,
                                                             const std::vector<int>& seq) {
    if (!valid_footprint(start)) fail("start footprint must be 0 or 1 per vertex");
    Footprint goal = footprint_of_sequence(pps, s, seq);
    for (std::size_t v = 0; v < goal.size(); ++v) goal[v] += start.at(v);

    std::map<int, int> left;
    for (int ei : seq) ++left[ei];
    std::map<int, DirectedEdge> dir;
    for (const auto& [ei, cnt] : left) {
        (void)cnt;
        dir.emplace(ei, edge_direction(pps, s, s.edges[ei]));
    }

    Footprint fp = start;
    std::vector<int> order;
    std::set<std::map<int, int>> seen;  // remaining allowances determine fp
    auto dfs = [&](auto&& self) -> bool {
        if (fp == goal) return true;
        if (!seen.insert(left).second) return false;
        for (auto& [ei, cnt] : left) {
            if (cnt == 0) continue;
            const DirectedEdge& d = dir.at(ei);
            if (fp[d.tail] != 1 || fp[d.head] != 0) continue;
            --cnt, --fp[d.tail], ++fp[d.head];
            order.push_back(ei);
            if (self(self)) return true;
            ++cnt, ++fp[d.tail], --fp[d.head];
            order.pop_back();
        }
        return false;
    };
    if (dfs(dfs)) return order;
    return std::nullopt;
}

FlowContext make_flow_context(const TypeTable& tt, const PpsCheck& pps,
                              const std::map<std::string, Weight>& target) {
    FlowContext ctx;
    ctx.tt = &tt;
    ctx.pps = &pps;
    for (const auto& [place, count] : target) {
        if (tt.find_place(place).first < 0) fail("unknown place in target: " + place);
        if (count <= 0) continue;
        ctx.target[place] = count;
        ctx.K += count;
    }
    return ctx;
}

FlowSet flow_edge_const(const FlowContext& ctx, const std::string& t1, const std::string& t2,
                        const std::string& s1, const std::string& s2) {
    if (s1 == s2) fail("edge constant needs two distinct source labels, got " + s1);
    (void)ctx.tt->type_of_source(s1);
    (void)ctx.tt->type_of_source(s2);
    bool ordered = t1 == "send" && t2 == "recv";
    bool flipped = t1 == "recv" && t2 == "send";
    if (!ordered && !flipped)
        fail("edge (" + t1 + "," + t2 + ") (" + s1 + "," + s2 + ") does not pass a pebble");
    const std::string& tail = ordered ? s1 : s2;
    const std::string& head = ordered ? s2 : s1;

    FlowSet out;
    out.visible = {s1, s2};
    for (Weight k = 0; k <= ctx.K; ++k) {
        FlowTuple t = zero_tuple(ctx, out.visible);
        t.f_plus[head] = k;   // k pebbles received
        t.f_minus[tail] = k;  // k pebbles sent
        out.tuples.insert(std::move(t));
    }
    return out;
}

FlowSet flow_restrict(const FlowContext& ctx, const FlowSet& f, const std::set<std::string>& tau) {
    FlowSet out;
    for (const auto& s : f.visible)
        if (tau.count(s)) out.visible.insert(s);
    for (const auto& t : f.tuples)
        if (auto r = hide_outside(ctx, t, tau)) out.tuples.insert(std::move(*r));
    return out;
}

FlowSet flow_rename(const FlowContext& ctx, const FlowSet& f,
                    const std::map<std::string, std::string>& alpha) {
    FlowSet out;
    for (const auto& s : f.visible) {
        auto it = alpha.find(s);
        out.visible.insert(it == alpha.end() ? s : it->second);
    }
    if (out.visible.size() != f.visible.size()) fail("rename is not injective on the visible set");
    for (const auto& t : f.tuples) out.tuples.insert(rename_tuple(ctx, t, alpha));
    return out;
}

FlowSet flow_compose(const FlowContext& ctx, const FlowSet& a, const FlowSet& b) {
    FlowSet out;
    out.visible = a.visible;
    out.visible.insert(b.visible.begin(), b.visible.end());
    for (const auto& ta : a.tuples)
        for (const auto& tb : b.tuples)
            if (auto r = compose_tuples(ctx, ta, tb)) out.tuples.insert(std::move(*r));
    return out;
}

bool decide_cover_pps(const TypeTable& tt, const HrGrammar& g,
                      const std::map<std::string, Weight>& target) {
    PpsCheck pps = check_pps(tt, g);
    if (!pps.ok) fail("grammar is not pebble-passing: " + pps.offending);
    FlowContext ctx = make_flow_context(tt, pps, target);

    TupleAlgebra alg{&ctx};
    auto filtered = filter_grammar(alg, normalize(g));
    for (const auto& [visible, tuple] : filtered.axiom_values) {
        (void)visible;
        auto done = hide_outside(ctx, tuple, {});
        if (!done) continue;
        bool hit = true;
        for (const auto& [place, count] : ctx.target)
            if (done->n.at(place) != count) {
                hit = false;
                break;
            }
        if (hit) return true;
    }
    return false;
}

bool decide_cover_pps(const TypeTable& tt, const HrGrammar& g, const Query& q) {
    if (!q.cover) fail("query " + q.id + " is a reach query; the exact decision covers only");
    std::map<std::string, Weight> target;
    for (const auto& a : q.atoms) {
        if (!a.sigma.empty())
            fail("query " + q.id + " pins source " + a.sigma +
                 "; the exact decision handles unpinned atoms only");
        if (a.count > 0) target[a.place] = std::max(target[a.place], a.count);
    }
    return decide_cover_pps(tt, g, target);
}

}  // namespace pcs
