/* systems.cc -- process types and the composition algebra of open systems */

#include "systems.hh"

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>

namespace pcs {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

OpenSystem::Edge make_edge(int v1, int t1, int v2, int t2) {
    if (std::pair{v1, t1} <= std::pair{v2, t2}) return {v1, t1, v2, t2};
    return {v2, t2, v1, t1};
}

void insert_edge(std::vector<OpenSystem::Edge>& edges, OpenSystem::Edge e) {
    auto it = std::lower_bound(edges.begin(), edges.end(), e);
    if (it == edges.end() || *it != e) edges.insert(it, e);
}

}  // namespace

int ProcessType::place_idx(const std::string& n) const {
    for (std::size_t i = 0; i < places.size(); ++i)
        if (places[i] == n) return static_cast<int>(i);
    return -1;
}

int ProcessType::trans_idx(const std::string& n) const {
    for (std::size_t i = 0; i < transitions.size(); ++i)
        if (transitions[i].name == n) return static_cast<int>(i);
    return -1;
}

int TypeTable::type_idx(const std::string& n) const {
    for (std::size_t i = 0; i < types.size(); ++i)
        if (types[i].name == n) return static_cast<int>(i);
    return -1;
}

int TypeTable::type_of_source(const std::string& sigma) const {
    auto it = source_type.find(sigma);
    if (it == source_type.end()) fail("unknown source label: " + sigma);
    return it->second;
}

std::pair<int, int> TypeTable::find_place(const std::string& place) const {
    for (std::size_t ti = 0; ti < types.size(); ++ti) {
        int pi = types[ti].place_idx(place);
        if (pi >= 0) return {static_cast<int>(ti), pi};
    }
    return {-1, -1};
}

void TypeTable::validate() const {
    std::set<std::string> seen_types, seen_places;
    for (const auto& t : types) {
        if (!seen_types.insert(t.name).second) fail("duplicate process type: " + t.name);
        if (t.places.empty()) fail("process type without places: " + t.name);
        if (t.initial_place < 0 || t.initial_place >= static_cast<int>(t.places.size()))
            fail("process type without initial place: " + t.name);
        std::set<std::string> local;
        for (const auto& p : t.places) {
            if (!local.insert(p).second) fail("duplicate place " + p + " in type " + t.name);
            if (!seen_places.insert(p).second)
                fail("place name used by two types: " + p);
        }
        std::set<std::string> tnames;
        for (const auto& tr : t.transitions) {
            if (!tnames.insert(tr.name).second)
                fail("duplicate transition " + tr.name + " in type " + t.name);
            if (tr.pre < 0 || tr.pre >= static_cast<int>(t.places.size()) || tr.post < 0 ||
                tr.post >= static_cast<int>(t.places.size()))
                fail("transition " + tr.name + " of type " + t.name + " has bad endpoints");
        }
    }
    for (const auto& [sigma, ti] : source_type)
        if (ti < 0 || ti >= static_cast<int>(types.size()))
            fail("source " + sigma + " has an undeclared type");
}

OpenSystem edge_const(const TypeTable& tt, const std::string& t1, const std::string& t2,
                      const std::string& s1, const std::string& s2) {
    if (s1 == s2) fail("edge constant needs two distinct source labels, got " + s1);
    int ty1 = tt.type_of_source(s1), ty2 = tt.type_of_source(s2);
    int i1 = tt.types[ty1].trans_idx(t1), i2 = tt.types[ty2].trans_idx(t2);
    if (i1 < 0 || !tt.types[ty1].transitions[i1].observable)
        fail("edge label " + t1 + " is not an observable transition of " + tt.types[ty1].name);
    if (i2 < 0 || !tt.types[ty2].transitions[i2].observable)
        fail("edge label " + t2 + " is not an observable transition of " + tt.types[ty2].name);

    OpenSystem s;
    s.vtype = {ty1, ty2};
    s.edges = {make_edge(0, i1, 1, i2)};
    s.sources = {{s1, 0}, {s2, 1}};
    return s;
}

OpenSystem restrict_sources(OpenSystem s, const std::set<std::string>& tau) {
    for (auto it = s.sources.begin(); it != s.sources.end();)
        it = tau.count(it->first) ? std::next(it) : s.sources.erase(it);
    return s;
}

OpenSystem rename_sources(const TypeTable& tt, OpenSystem s,
                          const std::map<std::string, std::string>& alpha) {
    std::map<std::string, int> renamed;
    for (const auto& [sigma, v] : s.sources) {
        auto it = alpha.find(sigma);
        const std::string& fresh = it == alpha.end() ? sigma : it->second;
        if (it != alpha.end() && tt.type_of_source(fresh) != tt.type_of_source(sigma))
            fail("rename " + sigma + "->" + fresh + " does not preserve the source type");
        if (!renamed.emplace(fresh, v).second) fail("rename is not injective at " + fresh);
    }
    s.sources = std::move(renamed);
    return s;
}

OpenSystem compose(const TypeTable& tt, const OpenSystem& a, const OpenSystem& b) {
    const int na = static_cast<int>(a.vtype.size());
    const int nb = static_cast<int>(b.vtype.size());

    // Union-find over the disjoint union; b's vertices are offset by na.
    std::vector<int> root(na + nb);
    std::iota(root.begin(), root.end(), 0);
    auto find = [&](int x) {
        while (root[x] != x) x = root[x] = root[root[x]];
        return x;
    };

    for (const auto& [sigma, va] : a.sources) {
        auto it = b.sources.find(sigma);
        if (it == b.sources.end()) continue;
        if (a.vtype[va] != b.vtype[it->second])
            fail("composition fuses source " + sigma + " across different types");
        root[find(va)] = find(it->second + na);
    }

    OpenSystem out;
    std::vector<int> id(na + nb, -1);
    for (int v = 0; v < na + nb; ++v) {
        int r = find(v);
        if (id[r] < 0) {
            id[r] = static_cast<int>(out.vtype.size());
            out.vtype.push_back(v < na ? a.vtype[v] : b.vtype[v - na]);
        }
        id[v] = id[r];
    }

    for (const auto& e : a.edges) insert_edge(out.edges, make_edge(id[e.v1], e.t1, id[e.v2], e.t2));
    for (const auto& e : b.edges)
        insert_edge(out.edges, make_edge(id[e.v1 + na], e.t1, id[e.v2 + na], e.t2));

    for (const auto& [sigma, v] : a.sources) out.sources.emplace(sigma, id[v]);
    for (const auto& [sigma, v] : b.sources) out.sources.emplace(sigma, id[v + na]);
    std::set<int> src_verts;
    for (const auto& [sigma, v] : out.sources)
        if (!src_verts.insert(v).second) fail("composition broke source injectivity");
    (void)tt;
    return out;
}

namespace {

/// Encoding of a system under a fixed vertex numbering `pos`.
std::string encode(const OpenSystem& s, const std::vector<int>& pos) {
    std::string enc = "v:";
    std::vector<int> type_at(s.vtype.size());
    for (std::size_t v = 0; v < s.vtype.size(); ++v) type_at[pos[v]] = s.vtype[v];
    for (int t : type_at) enc += std::to_string(t) + ",";
    enc += ";s:";
    for (const auto& [sigma, v] : s.sources)
        enc += sigma + "=" + std::to_string(pos[v]) + ",";
    enc += ";e:";
    std::vector<std::array<int, 4>> edges;
    for (const auto& e : s.edges) {
        std::array<int, 4> x{pos[e.v1], e.t1, pos[e.v2], e.t2};
        if (std::pair{x[0], x[1]} > std::pair{x[2], x[3]}) {
            std::swap(x[0], x[2]);
            std::swap(x[1], x[3]);
        }
        edges.push_back(x);
    }
    std::sort(edges.begin(), edges.end());
    for (const auto& x : edges)
        enc += std::to_string(x[0]) + "." + std::to_string(x[1]) + "-" + std::to_string(x[2]) +
               "." + std::to_string(x[3]) + ",";
    return enc;
}

}  // namespace

std::string canonical_string(const TypeTable& tt, const OpenSystem& s) {
    (void)tt;
    const int n = static_cast<int>(s.vtype.size());

    // Source-labeled vertices get fixed positions (sorted by label); the
    // rest are grouped by type and permuted exhaustively for the
    // lexicographically least encoding. Exact but exponential, fine for
    // the handful of small instances the tests and the oracle touch.
    std::vector<int> pos(n, -1);
    int next = 0;
    for (const auto& [sigma, v] : s.sources) pos[v] = next++;

    std::map<int, std::vector<int>> groups;  // type -> unlabeled vertices
    for (int v = 0; v < n; ++v)
        if (pos[v] < 0) groups[s.vtype[v]].push_back(v);

    std::vector<std::vector<int>> perm;
    std::vector<int> base;  // first canonical position of each group
    for (auto& [ty, vs] : groups) {
        base.push_back(next);
        next += static_cast<int>(vs.size());
        perm.push_back(vs);
    }

    std::string best;
    auto run = [&](auto&& self, std::size_t g) -> void {
        if (g == perm.size()) {
            for (std::size_t i = 0; i < perm.size(); ++i)
                for (std::size_t k = 0; k < perm[i].size(); ++k)
                    pos[perm[i][k]] = base[i] + static_cast<int>(k);
            std::string enc = encode(s, pos);
            if (best.empty() || enc < best) best = std::move(enc);
            return;
        }
        std::sort(perm[g].begin(), perm[g].end());
        do self(self, g + 1);
        while (std::next_permutation(perm[g].begin(), perm[g].end()));
    };
    run(run, 0);
    return best.empty() ? encode(s, pos) : best;
}

}  // namespace pcs
