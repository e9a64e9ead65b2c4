/* systems.hh -- process types and the composition algebra of open systems */

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace pcs {

/// An automata-like process type: every transition moves the single
/// local token from one place to another (all arc weights 1, exactly one
/// initially marked place). Transitions are split into observable ones,
/// which synchronize along edges, and internal ones.
struct ProcessType {
    struct Trans {
        std::string name;
        int pre = -1;   // local place index
        int post = -1;  // local place index
        bool observable = false;
    };

    std::string name;
    std::vector<std::string> places;  // local place names
    int initial_place = -1;
    std::vector<Trans> transitions;

    int place_idx(const std::string& n) const;
    int trans_idx(const std::string& n) const;  // -1 if unknown
};

/// Declared process types plus the (global) typing of source labels.
/// Place names are globally unique across types, so a place name alone
/// identifies its type.
struct TypeTable {
    std::vector<ProcessType> types;
    std::map<std::string, int> source_type;  // sigma -> type index

    int type_idx(const std::string& n) const;  // -1 if unknown
    int type_of_source(const std::string& sigma) const;
    /// (type index, local place index) from a globally unique place name
    std::pair<int, int> find_place(const std::string& place) const;

    /// Throws std::invalid_argument when a type is not automata-like or
    /// place names collide across types.
    void validate() const;
};

/// A vertex-labeled graph with a set of binary edges labeled by pairs of
/// observable transitions, plus an injective partial map from source
/// labels to vertices. Edges are unordered: both orientations of the
/// endpoint list denote the same edge, stored canonically.
struct OpenSystem {
    struct Edge {
        int v1, t1;  // endpoint vertex, observable transition (local idx)
        int v2, t2;
        auto operator<=>(const Edge&) const = default;
    };

    std::vector<int> vtype;                 // vertex -> type index
    std::vector<Edge> edges;                // sorted, duplicate-free
    std::map<std::string, int> sources;     // sigma -> vertex, injective

    std::size_t vertex_count() const { return vtype.size(); }
};

/// Two fresh source-labeled vertices joined by one (t1,t2)-labeled edge.
/// Throws std::invalid_argument on label/type inconsistencies.
OpenSystem edge_const(const TypeTable& tt, const std::string& t1, const std::string& t2,
                      const std::string& s1, const std::string& s2);

/// Forgets the source labels outside tau; the graph is untouched.
OpenSystem restrict_sources(OpenSystem s, const std::set<std::string>& tau);

/// Relabels sources by the bijection alpha (new label = alpha(old));
/// alpha must preserve source types. Labels not in alpha's domain are
/// kept as they are.
OpenSystem rename_sources(const TypeTable& tt, OpenSystem s,
                          const std::map<std::string, std::string>& alpha);

/// Disjoint union followed by fusion of equally-labeled sources and
/// collapse of duplicate edges.
OpenSystem compose(const TypeTable& tt, const OpenSystem& a, const OpenSystem& b);

/// Deterministic canonical encoding: equal strings iff the systems are
/// isomorphic respecting vertex types, edge labels and source labels.
/// Exact (search-based) — intended for small test/oracle instances.
std::string canonical_string(const TypeTable& tt, const OpenSystem& s);

}  // namespace pcs
