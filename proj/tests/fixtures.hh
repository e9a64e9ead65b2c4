/* fixtures.hh -- shared hand-built systems used as oracles across test binaries */

#pragma once

#include <algorithm>
#include <map>
#include <string>

#include "../src/systems.hh"

namespace fixtures {

using pcs::OpenSystem;
using pcs::ProcessType;
using pcs::TypeTable;

/// The running controller/worker pair of types: a controller cycles
/// tokC <-> nokC (both observable), a worker cycles nok <-> tok
/// observably and tok <-> work internally. Exactly one controller
/// token and one worker token exist per vertex.
inline TypeTable controller_worker_table(std::map<std::string, std::string> sources) {
    TypeTable tt;
    ProcessType cont;
    cont.name = "Cont";
    cont.places = {"tokC", "nokC"};
    cont.initial_place = 0;
    cont.transitions = {{"getC", 1, 0, true}, {"relC", 0, 1, true}};
    ProcessType proc;
    proc.name = "Proc";
    proc.places = {"tok", "nok", "work"};
    proc.initial_place = 1;
    proc.transitions = {
        {"get", 1, 0, true}, {"rel", 0, 1, true}, {"start", 0, 2, false}, {"stop", 2, 0, false}};
    tt.types = {cont, proc};
    for (auto& [sigma, ty] : sources) tt.source_type[sigma] = tt.type_idx(ty);
    tt.validate();
    return tt;
}

/// Closed chain with n vertices: controller at 0, workers 1..n-1,
/// edge (relC,get) from 0 to 1 and (rel,get) between consecutive
/// workers. Optionally labels the far end.
inline OpenSystem chain_system(const TypeTable& tt, int n, const std::string& end_label = "") {
    OpenSystem s;
    int cont = tt.type_idx("Cont"), proc = tt.type_idx("Proc");
    const ProcessType& c = tt.types[cont];
    const ProcessType& p = tt.types[proc];
    s.vtype.assign(n, proc);
    s.vtype[0] = cont;
    s.edges.push_back({0, c.trans_idx("relC"), 1, p.trans_idx("get")});
    for (int v = 1; v + 1 < n; ++v)
        s.edges.push_back({v, p.trans_idx("rel"), v + 1, p.trans_idx("get")});
    std::sort(s.edges.begin(), s.edges.end());
    if (!end_label.empty()) s.sources[end_label] = n - 1;
    return s;
}

/// Closed star with n vertices: controller at the center 0, workers
/// 1..n-1, each attached by the two opposite edges (relC,get) and
/// (getC,rel). Optionally labels the center.
inline OpenSystem star_system(const TypeTable& tt, int n, const std::string& center_label = "") {
    OpenSystem s;
    int cont = tt.type_idx("Cont"), proc = tt.type_idx("Proc");
    const ProcessType& c = tt.types[cont];
    const ProcessType& p = tt.types[proc];
    s.vtype.assign(n, proc);
    s.vtype[0] = cont;
    for (int v = 1; v < n; ++v) {
        s.edges.push_back({0, c.trans_idx("relC"), v, p.trans_idx("get")});
        s.edges.push_back({0, c.trans_idx("getC"), v, p.trans_idx("rel")});
    }
    std::sort(s.edges.begin(), s.edges.end());
    if (!center_label.empty()) s.sources[center_label] = 0;
    return s;
}

}  // namespace fixtures
