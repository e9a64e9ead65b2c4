/* behaviors.cc -- marked-net semantics of systems and the folded finite abstraction */

#include "behaviors.hh"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace pcs {

namespace {

std::vector<std::pair<FKey, Weight>> tidy(std::map<FKey, Weight> acc) {
    std::vector<std::pair<FKey, Weight>> out;
    for (auto& [k, w] : acc)
        if (w != 0) out.emplace_back(k, w);
    return out;  // map iteration is already sorted
}

}  // namespace

int Behavior::place_id(int vertex, int local_place) const {
    auto it = std::lower_bound(place_of.begin(), place_of.end(),
                               std::pair{vertex, local_place});
    if (it == place_of.end() || *it != std::pair{vertex, local_place})
        throw std::logic_error("behavior place lookup out of range");
    return static_cast<int>(it - place_of.begin());
}

Behavior beta(const TypeTable& tt, const OpenSystem& s) {
    Behavior b;
    b.system = s;

    for (int v = 0; v < static_cast<int>(s.vtype.size()); ++v) {
        const ProcessType& ty = tt.types[s.vtype[v]];
        for (int p = 0; p < static_cast<int>(ty.places.size()); ++p) {
            b.pn.net.add_place(ty.places[p] + "@v" + std::to_string(v));
            b.place_of.emplace_back(v, p);
            b.pn.initial.push_back(p == ty.initial_place ? 1 : 0);
        }
    }

    for (int k = 0; k < static_cast<int>(s.edges.size()); ++k) {
        const auto& e = s.edges[k];
        if (e.v1 == e.v2) throw std::logic_error("self-loop edge in system");
        const ProcessType& ty1 = tt.types[s.vtype[e.v1]];
        const ProcessType& ty2 = tt.types[s.vtype[e.v2]];
        const auto& tr1 = ty1.transitions[e.t1];
        const auto& tr2 = ty2.transitions[e.t2];
        std::string name = tr1.name + "@v" + std::to_string(e.v1) + "~" + tr2.name + "@v" +
                           std::to_string(e.v2);
        b.pn.net.add_transition(name,
                                {{b.place_id(e.v1, tr1.pre), 1}, {b.place_id(e.v2, tr2.pre), 1}},
                                {{b.place_id(e.v1, tr1.post), 1}, {b.place_id(e.v2, tr2.post), 1}});
        b.edge_of.push_back(k);
        b.internal_of.emplace_back(-1, -1);
    }

    for (int v = 0; v < static_cast<int>(s.vtype.size()); ++v) {
        const ProcessType& ty = tt.types[s.vtype[v]];
        for (int t = 0; t < static_cast<int>(ty.transitions.size()); ++t) {
            const auto& tr = ty.transitions[t];
            if (tr.observable) continue;
            b.pn.net.add_transition(tr.name + "@v" + std::to_string(v),
                                    {{b.place_id(v, tr.pre), 1}}, {{b.place_id(v, tr.post), 1}});
            b.edge_of.push_back(-1);
            b.internal_of.emplace_back(v, t);
        }
    }
    return b;
}

FoldedNet fold(const TypeTable& tt, const Behavior& b) {
    const OpenSystem& s = b.system;
    std::vector<std::string> label_of(s.vtype.size());  // empty when unlabeled
    for (const auto& [sigma, v] : s.sources) label_of[v] = sigma;

    auto key_of = [&](int net_place) {
        auto [v, lp] = b.place_of[net_place];
        const std::string& place = tt.types[s.vtype[v]].places[lp];
        if (!label_of[v].empty()) return FKey::src(label_of[v], place);
        return FKey::cls(place);
    };

    FoldedNet f;
    f.initial.emplace();  // zero entries are never stored
    for (int p = 0; p < static_cast<int>(b.pn.net.places.size()); ++p) {
        FKey k = key_of(p);
        if (b.pn.initial[p] != 0) (*f.initial)[k] += b.pn.initial[p];
        f.places.insert(std::move(k));
    }
    for (std::size_t t = 0; t < b.pn.net.transitions.size(); ++t) {
        std::map<FKey, Weight> pre, post;
        for (const auto& [p, w] : b.pn.net.arcs[t].pre) pre[key_of(p)] += w;
        for (const auto& [p, w] : b.pn.net.arcs[t].post) post[key_of(p)] += w;
        f.transitions.insert({tidy(std::move(pre)), tidy(std::move(post))});
    }
    for (const auto& [sigma, v] : s.sources) f.visible.insert(sigma);
    return f;
}

FoldedNet drop_marking(FoldedNet f) {
    f.initial.reset();
    return f;
}

namespace {

/// Rewrites every key of the folded net by `re`, merging collisions.
FoldedNet rekey(const FoldedNet& f, const std::function<FKey(const FKey&)>& re) {
    FoldedNet out;
    out.visible = f.visible;  // caller adjusts
    for (const auto& k : f.places) out.places.insert(re(k));
    for (const auto& t : f.transitions) {
        std::map<FKey, Weight> pre, post;
        for (const auto& [k, w] : t.pre) pre[re(k)] += w;
        for (const auto& [k, w] : t.post) post[re(k)] += w;
        out.transitions.insert({tidy(std::move(pre)), tidy(std::move(post))});
    }
    if (f.initial) {
        out.initial.emplace();
        for (const auto& [k, w] : *f.initial) (*out.initial)[re(k)] += w;
    }
    return out;
}

}  // namespace

FoldedNet folded_edge_const(const TypeTable& tt, const std::string& t1, const std::string& t2,
                            const std::string& s1, const std::string& s2) {
    return drop_marking(fold(tt, beta(tt, edge_const(tt, t1, t2, s1, s2))));
}

FoldedNet folded_restrict(const TypeTable& tt, FoldedNet f, const std::set<std::string>& tau) {
    (void)tt;
    FoldedNet out = rekey(f, [&](const FKey& k) {
        if (k.source && !tau.count(k.sigma)) return FKey::cls(k.place);
        return k;
    });
    out.visible.clear();
    for (const auto& sigma : f.visible)
        if (tau.count(sigma)) out.visible.insert(sigma);
    return out;
}

FoldedNet folded_rename(const TypeTable& tt, FoldedNet f,
                        const std::map<std::string, std::string>& alpha) {
    std::set<std::string> fresh;
    for (const auto& sigma : f.visible) {
        auto it = alpha.find(sigma);
        const std::string& nn = it == alpha.end() ? sigma : it->second;
        if (it != alpha.end() && tt.type_of_source(nn) != tt.type_of_source(sigma))
            throw std::invalid_argument("rename " + sigma + "->" + nn +
                                        " does not preserve the source type");
        if (!fresh.insert(nn).second)
            throw std::invalid_argument("rename is not injective at " + nn);
    }
    FoldedNet out = rekey(f, [&](const FKey& k) {
        auto it = alpha.find(k.sigma);
        if (k.source && it != alpha.end()) return FKey::src(it->second, k.place);
        return k;
    });
    out.visible = std::move(fresh);
    return out;
}

FoldedNet folded_compose(const TypeTable& tt, const FoldedNet& a, const FoldedNet& b) {
    (void)tt;
    if (a.initial.has_value() != b.initial.has_value())
        throw std::logic_error("composing a marked with a marking-free folded net");
    FoldedNet out;
    out.places = a.places;
    out.places.insert(b.places.begin(), b.places.end());
    out.transitions = a.transitions;
    out.transitions.insert(b.transitions.begin(), b.transitions.end());
    out.visible = a.visible;
    out.visible.insert(b.visible.begin(), b.visible.end());
    if (a.initial) {
        out.initial = a.initial;
        for (const auto& [k, w] : *b.initial) (*out.initial)[k] += w;
    }
    return out;
}

std::string fkey_name(const FKey& k) {
    if (k.source) return "src__" + k.sigma + "__" + k.place;
    return "q__" + k.place;
}

PetriNet folded_to_petri(const FoldedNet& f) {
    PetriNet pn;
    std::map<FKey, int> pid;
    for (const auto& k : f.places) {
        pid[k] = pn.net.add_place(fkey_name(k));
        Weight w = 0;
        if (f.initial) {
            auto it = f.initial->find(k);
            if (it != f.initial->end()) w = it->second;
        }
        pn.initial.push_back(w);
    }
    int idx = 0;
    for (const auto& t : f.transitions) {
        std::vector<std::pair<int, Weight>> pre, post;
        for (const auto& [k, w] : t.pre) pre.emplace_back(pid.at(k), w);
        for (const auto& [k, w] : t.post) post.emplace_back(pid.at(k), w);
        pn.net.add_transition("t" + std::to_string(idx++), pre, post);
    }
    return pn;
}

void check_folded_invariants(const FoldedNet& f) {
    auto fail = [](const std::string& m) { throw std::logic_error("folded net: " + m); };
    for (const auto& t : f.transitions) {
        Weight spre = 0, spost = 0;
        for (const auto& [k, w] : t.pre) {
            if (w < 1) fail("non-positive arc weight");
            if (!f.places.count(k)) fail("transition reads unknown place " + fkey_name(k));
            spre += w;
        }
        for (const auto& [k, w] : t.post) {
            if (w < 1) fail("non-positive arc weight");
            if (!f.places.count(k)) fail("transition writes unknown place " + fkey_name(k));
            spost += w;
        }
        if (spre != spost || spre < 1 || spre > 2)
            fail("transition endpoint budget violated");
    }
    std::set<std::string> seen;
    for (const auto& k : f.places) {
        if (k.source) {
            if (!f.visible.count(k.sigma)) fail("pinned place for hidden label " + k.sigma);
            seen.insert(k.sigma);
        }
    }
    for (const auto& sigma : f.visible)
        if (!seen.count(sigma)) fail("visible label without places: " + sigma);
    if (f.initial)
        for (const auto& [k, w] : *f.initial) {
            if (w < 0) fail("negative initial marking");
            if (!f.places.count(k)) fail("marked unknown place " + fkey_name(k));
        }
}

std::string to_string(const FoldedNet& f) {
    std::ostringstream os;
    os << "places:";
    for (const auto& k : f.places) {
        os << " " << fkey_name(k);
        if (f.initial) {
            auto it = f.initial->find(k);
            if (it != f.initial->end() && it->second != 0) os << "=" << it->second;
        }
    }
    os << "\nvisible:";
    for (const auto& s : f.visible) os << " " << s;
    os << "\n";
    for (const auto& t : f.transitions) {
        os << "  [";
        for (const auto& [k, w] : t.pre) os << " " << w << "*" << fkey_name(k);
        os << " ] -> [";
        for (const auto& [k, w] : t.post) os << " " << w << "*" << fkey_name(k);
        os << " ]\n";
    }
    return os.str();
}

}  // namespace pcs
