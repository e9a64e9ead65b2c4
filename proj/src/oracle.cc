// oracle.cc -- instance enumeration and exhaustive ground-truth checks.

#include "oracle.hh"

#include <algorithm>
#include <atomic>
#include <set>
#include <stdexcept>
#include <thread>

#include "behaviors.hh"
#include "pebble.hh"
#include "petri.hh"

namespace pcs {

namespace {

/// A query atom resolved against one concrete instance: the behavior
/// places whose tokens it sums, and the demanded count.
struct AtomGroup {
    std::vector<int> places;
    Weight need = 0;
};

std::vector<AtomGroup> resolve_atoms(const TypeTable& tt, const OpenSystem& s, const Behavior& b,
                                     const Query& q) {
    std::vector<AtomGroup> groups;
    for (const QueryAtom& atom : q.atoms) {
        auto [ti, pi] = tt.find_place(atom.place);
        if (ti < 0 || tt.types[ti].name != atom.type)
            throw std::invalid_argument("query " + q.id + ": no place " + atom.place +
                                        " in type " + atom.type);
        AtomGroup grp;
        grp.need = atom.count;
        if (atom.sigma.empty()) {
            for (std::size_t v = 0; v < s.vtype.size(); ++v)
                if (s.vtype[v] == ti) grp.places.push_back(b.place_id(static_cast<int>(v), pi));
        } else if (auto it = s.sources.find(atom.sigma); it != s.sources.end()) {
            grp.places.push_back(b.place_id(it->second, pi));
        }
        // A pinned label the instance lacks leaves the group empty: its
        // sum is 0, satisfiable only by a zero demand.
        groups.push_back(std::move(grp));
    }
    return groups;
}

bool covers(const std::vector<AtomGroup>& groups, const Marking& m) {
    for (const AtomGroup& grp : groups) {
        Weight sum = 0;
        for (int p : grp.places) sum += m[p];
        if (sum < grp.need) return false;
    }
    return true;
}

std::string cover_token(ConcreteCover c) {
    switch (c) {
        case ConcreteCover::Covered: return "covered";
        case ConcreteCover::NotCovered: return "not-covered";
        default: return "inconclusive";
    }
}

}  // namespace

std::vector<Instance> enumerate_instances(const TypeTable& tt, const HrGrammar& g,
                                          int max_vertices) {
    if (max_vertices < 1) throw std::invalid_argument("enumerate_instances: max_vertices < 1");
    DeriveOptions opt;
    opt.max_vertices = max_vertices;
    DeriveResult derived = derive_systems(tt, g, opt);
    std::vector<Instance> out;
    std::set<std::string> seen;
    for (Derivation& d : derived.items)
        if (seen.insert(canonical_string(tt, d.system)).second)
            out.push_back({std::move(d.term), std::move(d.system)});
    return out;
}

ConcreteCover concrete_cover(const TypeTable& tt, const OpenSystem& s, const Query& q,
                             std::size_t state_cap) {
    Behavior b = beta(tt, s);
    std::vector<AtomGroup> groups = resolve_atoms(tt, s, b, q);
    for (const AtomGroup& grp : groups)
        if (grp.places.empty() && grp.need > 0) return ConcreteCover::NotCovered;

    std::set<Marking> seen{b.pn.initial};
    std::vector<Marking> frontier{b.pn.initial};
    bool truncated = false;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
        Marking m = frontier[i];  // frontier grows below; no references
        if (covers(groups, m)) return ConcreteCover::Covered;
        for (std::size_t t = 0; t < b.pn.net.transitions.size(); ++t) {
            if (!is_enabled(b.pn.net, m, static_cast<int>(t))) continue;
            Marking next = fire(b.pn.net, m, static_cast<int>(t));
            if (seen.contains(next)) continue;
            if (seen.size() >= state_cap) {
                truncated = true;
                continue;
            }
            seen.insert(next);
            frontier.push_back(std::move(next));
        }
    }
    return truncated ? ConcreteCover::Inconclusive : ConcreteCover::NotCovered;
}

OracleReport check_soundness(const TypeTable& tt, const HrGrammar& g,
                             const std::vector<Query>& queries, const OracleOptions& opt,
                             const CountingAbstraction* abstraction) {
    OracleReport rep;
    std::vector<Instance> instances = enumerate_instances(tt, g, opt.max_vertices);
    rep.instances.reserve(instances.size());
    for (const Instance& inst : instances)
        rep.instances.push_back(
            {to_string(inst.term), static_cast<int>(inst.system.vtype.size())});

    CountingAbstraction local;
    if (!abstraction) {
        local = build_counting(tt, g);
        abstraction = &local;
    }
    PpsCheck pps = check_pps(tt, g);

    // One abstract verdict per query, up front.
    for (const Query& q : queries) {
        OracleReport::QueryResult r;
        r.id = q.id;
        if (!q.cover) {
            r.skipped = true;
        } else {
            r.abstraction_coverable = verify_cover(tt, *abstraction, q).coverable;
            if (pps.ok && pps_applicable(q)) {
                r.pebble_applicable = true;
                r.pebble_coverable = decide_cover_pps(tt, g, q);
            }
            r.per_instance.assign(instances.size(), ConcreteCover::Inconclusive);
        }
        rep.queries.push_back(std::move(r));
    }

    // Ground truth, instances in parallel; every (query, instance) slot
    // is distinct, so workers never touch the same element.
    unsigned threads = opt.threads ? opt.threads : std::thread::hardware_concurrency();
    threads = std::max(1u, std::min<unsigned>(threads, instances.size()));
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        for (std::size_t i; (i = cursor.fetch_add(1)) < instances.size();) {
            for (std::size_t qi = 0; qi < queries.size(); ++qi) {
                if (rep.queries[qi].skipped) continue;
                rep.queries[qi].per_instance[i] =
                    concrete_cover(tt, instances[i].system, queries[qi], opt.state_cap);
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < threads; ++w) pool.emplace_back(worker);
    worker();
    for (std::thread& th : pool) th.join();

    // Deterministic discrepancy order: query-major, instance-minor.
    for (const OracleReport::QueryResult& r : rep.queries) {
        if (r.skipped) continue;
        for (std::size_t i = 0; i < r.per_instance.size(); ++i) {
            if (r.per_instance[i] != ConcreteCover::Covered) continue;
            if (!r.abstraction_coverable)
                rep.discrepancies.push_back(
                    {"cover-soundness", r.id, i, rep.instances[i].term});
            if (r.pebble_applicable && !r.pebble_coverable)
                rep.discrepancies.push_back(
                    {"pebble-exactness", r.id, i, rep.instances[i].term});
        }
    }
    return rep;
}

std::vector<std::string> OracleReport::lines() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < instances.size(); ++i)
        out.push_back("INSTANCE " + std::to_string(i) + ": vertices=" +
                      std::to_string(instances[i].vertices) + " term=" + instances[i].term);
    for (const QueryResult& r : queries) {
        if (r.skipped) {
            out.push_back("ABSTRACT " + r.id + ": skipped (reach)");
            continue;
        }
        std::string line = "ABSTRACT " + r.id + ": counting=" +
                           (r.abstraction_coverable ? "coverable" : "uncoverable") + " pebble=";
        if (r.pebble_applicable)
            line += r.pebble_coverable ? "coverable" : "uncoverable";
        else
            line += "n/a";
        out.push_back(std::move(line));
        for (std::size_t i = 0; i < r.per_instance.size(); ++i)
            out.push_back("RESULT " + r.id + " #" + std::to_string(i) + ": " +
                          cover_token(r.per_instance[i]));
    }
    for (const Discrepancy& d : discrepancies)
        out.push_back("DISCREPANCY " + d.lemma + " " + d.query + " #" +
                      std::to_string(d.instance) + ": " + d.term);
    out.push_back("SUMMARY: instances=" + std::to_string(instances.size()) +
                  " queries=" + std::to_string(queries.size()) +
                  " discrepancies=" + std::to_string(discrepancies.size()));
    return out;
}

}  // namespace pcs
