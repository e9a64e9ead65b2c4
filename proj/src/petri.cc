/* petri.cc -- Petri nets, markings, firing, quotients, coverability engines */

#include "petri.hh"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

namespace pcs {

int Net::add_place(std::string name) {
    places.push_back(std::move(name));
    return static_cast<int>(places.size()) - 1;
}

int Net::add_transition(std::string name,
                        std::vector<std::pair<int, Weight>> pre,
                        std::vector<std::pair<int, Weight>> post) {
    auto tidy = [](std::vector<std::pair<int, Weight>>& v) {
        std::sort(v.begin(), v.end());
        // merge duplicate places, drop zero weights
        std::vector<std::pair<int, Weight>> out;
        for (auto& [p, w] : v) {
            if (!out.empty() && out.back().first == p)
                out.back().second += w;
            else
                out.emplace_back(p, w);
        }
        std::erase_if(out, [](auto& e) { return e.second == 0; });
        v = std::move(out);
    };
    tidy(pre);
    tidy(post);
    transitions.push_back(std::move(name));
    arcs.push_back(Stoich{std::move(pre), std::move(post)});
    return static_cast<int>(transitions.size()) - 1;
}

int Net::place_id(const std::string& name) const {
    for (std::size_t i = 0; i < places.size(); ++i)
        if (places[i] == name) return static_cast<int>(i);
    return -1;
}

int Net::transition_id(const std::string& name) const {
    for (std::size_t i = 0; i < transitions.size(); ++i)
        if (transitions[i] == name) return static_cast<int>(i);
    return -1;
}

static Weight lookup(const std::vector<std::pair<int, Weight>>& v, int place) {
    auto it = std::lower_bound(v.begin(), v.end(),
                               std::make_pair(place, std::numeric_limits<Weight>::min()));
    if (it != v.end() && it->first == place) return it->second;
    return 0;
}

Weight Net::weight_in(int place, int trans) const { return lookup(arcs.at(trans).pre, place); }
Weight Net::weight_out(int trans, int place) const { return lookup(arcs.at(trans).post, place); }

void PartialMarking::set(int place, Weight w) {
    auto it = std::lower_bound(entries.begin(), entries.end(),
                               std::make_pair(place, std::numeric_limits<Weight>::min()));
    if (it != entries.end() && it->first == place)
        it->second = w;
    else
        entries.insert(it, {place, w});
}

Weight PartialMarking::get(int place) const { return lookup(entries, place); }

bool is_enabled(const Net& net, const Marking& m, int trans) {
    for (auto& [p, w] : net.arcs.at(trans).pre)
        if (m.at(p) < w) return false;
    return true;
}

Marking fire(const Net& net, const Marking& m, int trans) {
    assert(is_enabled(net, m, trans));
    Marking out = m;
    for (auto& [p, w] : net.arcs.at(trans).pre) out[p] -= w;
    for (auto& [p, w] : net.arcs.at(trans).post) {
        if (__builtin_add_overflow(out[p], w, &out[p]))
            throw std::overflow_error("marking overflow on place " + net.places[p]);
    }
    return out;
}

bool covers(const Marking& m, const PartialMarking& target) {
    for (auto& [p, w] : target.entries)
        if (m.at(p) < w) return false;
    return true;
}

ReachResult reachable_bounded(const PetriNet& pn, std::size_t state_cap,
                              const std::function<bool(const Marking&)>& expand) {
    ReachResult res;
    std::set<Marking> seen;
    std::deque<const Marking*> queue;
    seen.insert(pn.initial);
    res.markings.push_back(pn.initial);
    queue.push_back(&*seen.begin());
    while (!queue.empty()) {
        const Marking m = *queue.front();
        queue.pop_front();
        if (expand && !expand(m)) continue;
        for (std::size_t t = 0; t < pn.net.transitions.size(); ++t) {
            if (!is_enabled(pn.net, m, static_cast<int>(t))) continue;
            Marking next = fire(pn.net, m, static_cast<int>(t));
            if (seen.count(next)) continue;
            if (seen.size() >= state_cap) {
                res.truncated = true;
                return res;
            }
            auto [it, fresh] = seen.insert(std::move(next));
            assert(fresh);
            res.markings.push_back(*it);
            queue.push_back(&*it);
        }
    }
    return res;
}

namespace {

// b <= a pointwise
bool dominated(const Marking& b, const Marking& a) {
    for (std::size_t i = 0; i < b.size(); ++i)
        if (b[i] > a[i]) return false;
    return true;
}

struct BasisElem {
    Marking m;
    int via_trans = -1;   // transition fired to go from here towards the target
    int parent = -1;      // element reached after firing via_trans
    bool active = true;   // false once subsumed by a smaller element
};

}  // namespace

CoverResult backward_coverable_any(const PetriNet& pn,
                                   const std::vector<PartialMarking>& targets) {
    const Net& net = pn.net;
    const std::size_t nplaces = net.places.size();

    // transitions in lexicographic name order, for deterministic witnesses
    std::vector<int> torder(net.transitions.size());
    for (std::size_t i = 0; i < torder.size(); ++i) torder[i] = static_cast<int>(i);
    std::sort(torder.begin(), torder.end(), [&](int a, int b) {
        return net.transitions[a] < net.transitions[b];
    });

    std::vector<BasisElem> arena;  // append-only; parents index into it
    auto subsumed = [&](const Marking& m) {
        for (auto& e : arena)
            if (e.active && dominated(e.m, m)) return true;
        return false;
    };
    auto insert = [&](Marking m, int via, int parent) -> int {
        if (subsumed(m)) return -1;
        for (auto& e : arena)
            if (e.active && dominated(m, e.m)) e.active = false;
        arena.push_back(BasisElem{std::move(m), via, parent});
        return static_cast<int>(arena.size()) - 1;
    };

    auto finish = [&](int idx) {
        CoverResult res;
        res.coverable = true;
        Marking m = pn.initial;
        for (int i = idx; arena[i].via_trans >= 0; i = arena[i].parent) {
            int t = arena[i].via_trans;
            assert(is_enabled(net, m, t));
            m = fire(net, m, t);
            res.witness.push_back(t);
        }
        return res;
    };

    std::deque<int> frontier;
    for (const PartialMarking& tgt : targets) {
        Marking m(nplaces, 0);
        for (auto& [p, w] : tgt.entries) m.at(p) = w;
        int idx = insert(std::move(m), -1, -1);
        if (idx >= 0) {
            if (dominated(arena[idx].m, pn.initial)) return finish(idx);
            frontier.push_back(idx);
        }
    }

    while (!frontier.empty()) {
        int cur = frontier.front();
        frontier.pop_front();
        if (!arena[cur].active) continue;
        const Marking base = arena[cur].m;  // copy: arena may grow
        for (int t : torder) {
            Marking pred(nplaces);
            for (std::size_t q = 0; q < nplaces; ++q) {
                Weight in = net.weight_in(static_cast<int>(q), t);
                Weight out = net.weight_out(t, static_cast<int>(q));
                pred[q] = std::max(in, base[q] - out + in);
            }
            int idx = insert(std::move(pred), t, cur);
            if (idx < 0) continue;
            if (dominated(arena[idx].m, pn.initial)) return finish(idx);
            frontier.push_back(idx);
        }
    }
    return CoverResult{};
}

CoverResult backward_coverable(const PetriNet& pn, const PartialMarking& target) {
    return backward_coverable_any(pn, {target});
}

PetriNet quotient(const PetriNet& pn, const PlaceEquivalence& eq) {
    const Net& net = pn.net;
    assert(eq.class_of.size() == net.places.size());
    const int nclasses = static_cast<int>(eq.class_names.size());

    // classes sorted by canonical name
    std::vector<int> corder(nclasses);
    for (int i = 0; i < nclasses; ++i) corder[i] = i;
    std::sort(corder.begin(), corder.end(),
              [&](int a, int b) { return eq.class_names[a] < eq.class_names[b]; });
    std::vector<int> cpos(nclasses);  // class id -> output place id
    for (int i = 0; i < nclasses; ++i) cpos[corder[i]] = i;

    PetriNet out;
    for (int i = 0; i < nclasses; ++i) out.net.places.push_back(eq.class_names[corder[i]]);
    out.initial.assign(nclasses, 0);
    for (std::size_t q = 0; q < net.places.size(); ++q)
        out.initial[cpos[eq.class_of[q]]] += pn.initial[q];

    // fold each transition's arcs to class level; merge equal-footprint ones
    using Vec = std::vector<std::pair<int, Weight>>;
    std::map<std::pair<Vec, Vec>, std::string> merged;
    for (std::size_t t = 0; t < net.transitions.size(); ++t) {
        std::map<int, Weight> pre, post;
        for (auto& [p, w] : net.arcs[t].pre) pre[cpos[eq.class_of[p]]] += w;
        for (auto& [p, w] : net.arcs[t].post) post[cpos[eq.class_of[p]]] += w;
        auto key = std::make_pair(Vec(pre.begin(), pre.end()), Vec(post.begin(), post.end()));
        auto [it, fresh] = merged.emplace(std::move(key), net.transitions[t]);
        if (!fresh && net.transitions[t] < it->second) it->second = net.transitions[t];
    }
    std::vector<std::pair<std::string, std::pair<Vec, Vec>>> ordered;
    for (auto& [key, name] : merged) ordered.emplace_back(name, key);
    std::sort(ordered.begin(), ordered.end());
    for (auto& [name, key] : ordered)
        out.net.add_transition(name, key.first, key.second);
    return out;
}

}  // namespace pcs
