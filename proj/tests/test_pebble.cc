/* test_pebble.cc -- footprints, the flow abstraction, and the exact decision */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "../src/behaviors.hh"
#include "../src/grammar.hh"
#include "../src/pebble.hh"
#include "../src/petri.hh"
#include "../src/specfile.hh"
#include "brute_force.hh"

using namespace pcs;

namespace {

SpecFile ring_spec() { return load_spec(PCS_SPECS_DIR "/ring.pcs"); }
SpecFile star_spec() { return load_spec(PCS_SPECS_DIR "/pps_star.pcs"); }
SpecFile tree_spec() { return load_spec(PCS_SPECS_DIR "/tree_down.pcs"); }
SpecFile chain_spec() { return load_spec(PCS_SPECS_DIR "/chain.pcs"); }

void push_edge(OpenSystem& s, int v1, int t1, int v2, int t2) {
    OpenSystem::Edge e{v1, t1, v2, t2};
    if (std::pair{v1, t1} > std::pair{v2, t2}) e = {v2, t2, v1, t1};
    s.edges.push_back(e);
}

void finish_edges(OpenSystem& s) {
    std::sort(s.edges.begin(), s.edges.end());
    s.edges.erase(std::unique(s.edges.begin(), s.edges.end()), s.edges.end());
}

/// A closed token ring over the bundled ring types: head at vertex 0,
/// `links` links, every vertex sending to its clockwise neighbor.
OpenSystem ring_system(const TypeTable& tt, int links) {
    OpenSystem s;
    int head = tt.type_idx("Head"), link = tt.type_idx("Link");
    s.vtype.assign(links + 1, link);
    s.vtype[0] = head;
    int n = links + 1;
    for (int v = 0; v < n; ++v) {
        int w = (v + 1) % n;
        push_edge(s, v, tt.types[s.vtype[v]].trans_idx("send"), w,
                  tt.types[s.vtype[w]].trans_idx("recv"));
    }
    finish_edges(s);
    return s;
}

/// Index of the edge sending from `tail` to `head` in s.edges.
int edge_index(const PpsCheck& pps, const OpenSystem& s, int tail, int head) {
    for (std::size_t i = 0; i < s.edges.size(); ++i) {
        DirectedEdge d = edge_direction(pps, s, s.edges[i]);
        if (d.tail == tail && d.head == head) return static_cast<int>(i);
    }
    throw std::runtime_error("no such edge");
}

/// Every demand map over `places` with positive entries summing to at
/// most K, the empty map included.
std::vector<std::map<std::string, Weight>> targets_up_to(const std::vector<std::string>& places,
                                                         Weight budget) {
    std::vector<std::map<std::string, Weight>> out;
    std::map<std::string, Weight> cur;
    auto rec = [&](auto&& self, std::size_t i, Weight left) -> void {
        if (i == places.size()) {
            out.push_back(cur);
            return;
        }
        for (Weight c = 0; c <= left; ++c) {
            if (c > 0) cur[places[i]] = c;
            self(self, i + 1, left - c);
            cur.erase(places[i]);
        }
    };
    rec(rec, 0, budget);
    return out;
}

std::vector<std::string> all_places(const TypeTable& tt) {
    std::vector<std::string> out;
    for (const auto& t : tt.types) out.insert(out.end(), t.places.begin(), t.places.end());
    return out;
}

FlowTuple tup(std::map<std::string, Weight> fp, std::map<std::string, Weight> fm,
                     std::map<std::string, Weight> n) {
    return FlowTuple{std::move(fp), std::move(fm), std::move(n)};
}

}  // namespace

TEST_CASE("the shape check recognizes the bundled pebble grammars") {
    for (auto spec : {ring_spec(), star_spec(), tree_spec()}) {
        PpsCheck c = check_pps(spec.types, spec.grammar);
        CAPTURE(c.offending);
        REQUIRE(c.ok);
        REQUIRE(c.shape.size() == spec.types.types.size());
    }
    SpecFile ring = ring_spec();
    PpsCheck c = check_pps_types(ring.types);
    int head = ring.types.type_idx("Head"), link = ring.types.type_idx("Link");
    CHECK(c.shape[head].top == ring.types.types[head].place_idx("on"));
    CHECK(c.shape[link].top == ring.types.types[link].place_idx("hot"));
    CHECK(ring.types.types[head].transitions[c.shape[head].send].name == "send");
    CHECK(ring.types.types[link].transitions[c.shape[link].recv].name == "recv");
}

TEST_CASE("the shape check names the offending construct") {
    SpecFile chain = chain_spec();
    PpsCheck c = check_pps(chain.types, chain.grammar);
    CHECK_FALSE(c.ok);
    CHECK(c.offending.find("Cont") != std::string::npos);

    TypeTable tt;
    ProcessType bad;
    bad.name = "Bad";
    bad.places = {"up", "down"};
    bad.initial_place = 0;

    SUBCASE("recv must undo send") {
        bad.transitions = {{"send", 0, 1, true}, {"recv", 0, 1, true}};
        tt.types = {bad};
        tt.validate();
        PpsCheck r = check_pps_types(tt);
        CHECK_FALSE(r.ok);
        CHECK(r.offending.find("undo") != std::string::npos);
    }
    SUBCASE("internal transitions disqualify") {
        bad.transitions = {{"send", 0, 1, true}, {"recv", 1, 0, false}};
        tt.types = {bad};
        tt.validate();
        PpsCheck r = check_pps_types(tt);
        CHECK_FALSE(r.ok);
        CHECK(r.offending.find("observable") != std::string::npos);
    }
    SUBCASE("three places disqualify") {
        bad.places = {"up", "down", "lost"};
        bad.transitions = {{"send", 0, 1, true}, {"recv", 1, 0, true}};
        tt.types = {bad};
        tt.validate();
        PpsCheck r = check_pps_types(tt);
        CHECK_FALSE(r.ok);
        CHECK(r.offending.find("two places") != std::string::npos);
    }

    SUBCASE("edges must pair send with recv") {
        SpecFile ring = ring_spec();
        HrGrammar g;
        g.axiom = "X";
        g.rules = {{"X", HrTerm::edge("send", "send", "h", "a")}};
        PpsCheck r = check_pps(ring.types, g);
        CHECK_FALSE(r.ok);
        CHECK(r.offending.find("does not pass a pebble") != std::string::npos);
    }
}

TEST_CASE("query applicability is cover-and-unpinned") {
    Query q;
    q.cover = true;
    q.atoms = {{"Link", "", "hot", 1}};
    CHECK(pps_applicable(q));
    q.atoms.push_back({"Link", "a", "hot", 1});
    CHECK_FALSE(pps_applicable(q));
    q.atoms.pop_back();
    q.cover = false;
    CHECK_FALSE(pps_applicable(q));
}

TEST_CASE("footprints of sequences telescope and vanish on cycles") {
    SpecFile ring = ring_spec();
    PpsCheck pps = check_pps_types(ring.types);
    OpenSystem s = ring_system(ring.types, 3);  // vertices 0..3

    CHECK(footprint_of_sequence(pps, s, {}) == Footprint(4, 0));

    int e01 = edge_index(pps, s, 0, 1), e12 = edge_index(pps, s, 1, 2);
    int e23 = edge_index(pps, s, 2, 3), e30 = edge_index(pps, s, 3, 0);
    CHECK(footprint_of_sequence(pps, s, {e01, e12}) == Footprint{-1, 0, 1, 0});
    CHECK(footprint_of_sequence(pps, s, {e01, e12, e23, e30}) == Footprint(4, 0));
    CHECK_THROWS_AS(footprint_of_sequence(pps, s, {99}), std::invalid_argument);

    CHECK(initial_footprint(ring.types, pps, s) == Footprint{1, 0, 0, 0});
    CHECK(valid_footprint({0, 1, 1, 0}));
    CHECK_FALSE(valid_footprint({0, 2, 0}));
    CHECK_FALSE(valid_footprint({-1, 1}));
}

TEST_CASE("marking footprints track firing step by step") {
    SpecFile ring = ring_spec();
    PpsCheck pps = check_pps_types(ring.types);
    OpenSystem s = ring_system(ring.types, 4);
    Behavior b = beta(ring.types, s);
    Footprint start = initial_footprint(ring.types, pps, s);
    CHECK(marking_footprint(pps, b, b.pn.initial) == start);

    std::mt19937 rng(7);
    Marking m = b.pn.initial;
    std::vector<int> fired;
    for (int step = 0; step < 25; ++step) {
        std::vector<int> enabled;
        for (std::size_t t = 0; t < b.pn.net.transitions.size(); ++t)
            if (is_enabled(b.pn.net, m, static_cast<int>(t))) enabled.push_back(static_cast<int>(t));
        REQUIRE_FALSE(enabled.empty());
        int t = enabled[rng() % enabled.size()];
        m = fire(b.pn.net, m, t);
        REQUIRE(b.edge_of[t] >= 0);
        fired.push_back(b.edge_of[t]);

        Footprint now = marking_footprint(pps, b, m);
        Footprint sum = footprint_of_sequence(pps, s, fired);
        for (std::size_t v = 0; v < sum.size(); ++v) sum[v] += start[v];
        CHECK(now == sum);  // effects accumulate exactly
        CHECK(std::accumulate(now.begin(), now.end(), 0) == 1);  // one pebble, conserved
    }
}

TEST_CASE("the subsequence test decides by footprint validity alone") {
    SpecFile ring = ring_spec();
    PpsCheck pps = check_pps_types(ring.types);
    OpenSystem s = ring_system(ring.types, 2);  // 0 -> 1 -> 2 -> 0
    int e01 = edge_index(pps, s, 0, 1), e12 = edge_index(pps, s, 1, 2);

    Footprint pebble_at_0{1, 0, 0}, pebble_at_1{0, 1, 0};
    CHECK(fireable_subsequence_exists(pps, s, pebble_at_0, {e01}));
    CHECK_FALSE(fireable_subsequence_exists(pps, s, pebble_at_1, {e01}));  // hole on the tail

    // An unfireable order whose footprint is still reachable by a
    // reordering: the extraction finds the reordering.
    auto sub = extract_fireable_subsequence(pps, s, pebble_at_0, {e12, e01});
    REQUIRE(sub.has_value());
    CHECK(*sub == std::vector<int>{e01, e12});

    // No subsequence can realize an invalid summed footprint.
    CHECK_FALSE(extract_fireable_subsequence(pps, s, pebble_at_1, {e01}).has_value());
}

TEST_CASE("subsequence lemma agrees with brute force on 500 random cases") {
    SpecFile ring = ring_spec();
    const TypeTable& tt = ring.types;
    PpsCheck pps = check_pps_types(tt);
    int head = tt.type_idx("Head"), link = tt.type_idx("Link");

    std::mt19937 rng(20260815);
    int positives = 0, negatives = 0;
    for (int round = 0; round < 500; ++round) {
        int n = 2 + static_cast<int>(rng() % 5);
        OpenSystem s;
        for (int v = 0; v < n; ++v) s.vtype.push_back(rng() % 2 ? head : link);
        int attempts = 2 * n;
        for (int k = 0; k < attempts; ++k) {
            int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
            if (a == b) continue;
            push_edge(s, a, tt.types[s.vtype[a]].trans_idx("send"), b,
                      tt.types[s.vtype[b]].trans_idx("recv"));
        }
        finish_edges(s);
        if (s.edges.empty()) continue;

        Footprint start(n);
        for (int v = 0; v < n; ++v) start[v] = static_cast<int>(rng() % 2);
        std::vector<int> seq(rng() % 9);
        for (auto& e : seq) e = static_cast<int>(rng() % s.edges.size());

        bool by_footprint = fireable_subsequence_exists(pps, s, start, seq);
        bool by_search = brute::subsequence_search(pps, s, start, seq);
        CAPTURE(round);
        REQUIRE(by_footprint == by_search);
        (by_footprint ? positives : negatives)++;

        auto sub = extract_fireable_subsequence(pps, s, start, seq);
        REQUIRE(sub.has_value() == by_footprint);
        if (sub) {
            // Replay: genuinely fireable, within seq's multiplicities,
            // and with seq's summed effect.
            std::map<int, int> allowance;
            for (int e : seq) ++allowance[e];
            Footprint fp = start;
            for (int e : *sub) {
                DirectedEdge d = edge_direction(pps, s, s.edges[e]);
                REQUIRE(fp[d.tail] == 1);
                REQUIRE(fp[d.head] == 0);
                --fp[d.tail], ++fp[d.head];
                REQUIRE(--allowance[e] >= 0);
            }
            Footprint want = footprint_of_sequence(pps, s, seq);
            for (std::size_t v = 0; v < want.size(); ++v) want[v] += start[v];
            CHECK(fp == want);
        }
    }
    // Both lemma outcomes must actually occur for the sweep to mean much.
    CHECK(positives > 50);
    CHECK(negatives > 50);
}

TEST_CASE("the flow context sums the demand") {
    SpecFile ring = ring_spec();
    PpsCheck pps = check_pps_types(ring.types);
    CHECK(make_flow_context(ring.types, pps, {{"hot", 1}}).K == 1);
    CHECK(make_flow_context(ring.types, pps, {{"hot", 2}, {"cold", 3}}).K == 5);
    CHECK(make_flow_context(ring.types, pps, {}).K == 0);

    FlowContext dropped = make_flow_context(ring.types, pps, {{"hot", 0}, {"on", 2}});
    CHECK(dropped.K == 2);
    CHECK(dropped.target == std::map<std::string, Weight>{{"on", 2}});
    CHECK_THROWS_AS(make_flow_context(ring.types, pps, {{"nowhere", 1}}), std::invalid_argument);
}

TEST_CASE("edge constants enumerate firing counts") {
    SpecFile ring = ring_spec();
    PpsCheck pps = check_pps_types(ring.types);

    FlowContext ctx = make_flow_context(ring.types, pps, {{"hot", 2}});
    FlowSet f = flow_edge_const(ctx, "send", "recv", "h", "a");
    CHECK(f.visible == std::set<std::string>{"a", "h"});
    std::set<FlowTuple> want;
    for (Weight k = 0; k <= 2; ++k)
        want.insert(tup({{"a", k}, {"h", 0}}, {{"a", 0}, {"h", k}}, {{"hot", 0}}));
    CHECK(f.tuples == want);

    // The opposite direction swaps the roles of the two labels.
    FlowSet g = flow_edge_const(ctx, "recv", "send", "h", "a");
    std::set<FlowTuple> mirrored;
    for (const auto& t : f.tuples) mirrored.insert(tup(t.f_minus, t.f_plus, t.n));
    CHECK(g.tuples == mirrored);

    FlowContext zero = make_flow_context(ring.types, pps, {});
    CHECK(flow_edge_const(zero, "send", "recv", "h", "a").tuples.size() == 1);
    CHECK_THROWS_AS(flow_edge_const(ctx, "send", "send", "h", "a"), std::invalid_argument);
}

TEST_CASE("compose enforces the degree budget") {
    SpecFile ring = ring_spec();
    PpsCheck pps = check_pps_types(ring.types);
    FlowContext ctx = make_flow_context(ring.types, pps, {{"hot", 2}});

    FlowSet e = flow_edge_const(ctx, "send", "recv", "h", "a");
    FlowSet both = flow_compose(ctx, e, e);
    CHECK(both.visible == e.visible);
    std::set<FlowTuple> want;  // summed counts beyond K=2 are gone
    for (Weight m = 0; m <= 2; ++m)
        want.insert(tup({{"a", m}, {"h", 0}}, {{"a", 0}, {"h", m}}, {{"hot", 0}}));
    CHECK(both.tuples == want);

    // Disjoint labels just union up.
    FlowSet other = flow_edge_const(ctx, "send", "recv", "b", "a");
    FlowSet joined = flow_compose(ctx, e, other);
    CHECK(joined.visible == std::set<std::string>{"a", "b", "h"});
    CHECK(joined.tuples.size() == 6);  // receipts at a capped at 2: k1+k2 <= 2
}

TEST_CASE("restrict lands hidden vertices and counts finishers") {
    SpecFile ring = ring_spec();
    PpsCheck pps = check_pps_types(ring.types);
    FlowContext ctx = make_flow_context(ring.types, pps, {{"hot", 1}});
    FlowSet f = flow_edge_const(ctx, "send", "recv", "h", "a");

    CHECK(flow_restrict(ctx, f, f.visible) == f);  // nothing hidden

    // Hiding the link: it starts cold, so it ends hot exactly when it
    // received once more than it sent -- and then scores the demand.
    FlowSet no_a = flow_restrict(ctx, f, {"h"});
    CHECK(no_a.visible == std::set<std::string>{"h"});
    CHECK(no_a.tuples == std::set<FlowTuple>{
                             tup({{"h", 0}}, {{"h", 0}}, {{"hot", 0}}),
                             tup({{"h", 0}}, {{"h", 1}}, {{"hot", 1}}),
                         });

    // Hiding the head: it starts with the pebble, so sending once lands
    // it on off, sending never keeps it on; both are fine placements.
    FlowSet no_h = flow_restrict(ctx, f, {"a"});
    CHECK(no_h.tuples == std::set<FlowTuple>{
                             tup({{"a", 0}}, {{"a", 0}}, {{"hot", 0}}),
                             tup({{"a", 1}}, {{"a", 0}}, {{"hot", 0}}),
                         });

    // A hidden vertex may not end up owing or hoarding pebbles.
    FlowContext wide = make_flow_context(ring.types, pps, {{"hot", 2}});
    FlowSet f2 = flow_edge_const(wide, "send", "recv", "h", "a");
    CHECK(f2.tuples.size() == 3);
    CHECK(flow_restrict(wide, f2, {"h"}).tuples.size() == 2);  // the k=2 tuple is dropped
}

TEST_CASE("rename rekeys the visible set") {
    SpecFile ring = ring_spec();
    PpsCheck pps = check_pps_types(ring.types);
    FlowContext ctx = make_flow_context(ring.types, pps, {{"hot", 1}});
    FlowSet f = flow_edge_const(ctx, "send", "recv", "h", "a");

    FlowSet r = flow_rename(ctx, f, {{"a", "b"}, {"b", "a"}});
    CHECK(r.visible == std::set<std::string>{"b", "h"});
    CHECK(r.tuples == flow_edge_const(ctx, "send", "recv", "h", "b").tuples);

    CHECK_THROWS_AS(flow_rename(ctx, f, {{"a", "h"}}), std::invalid_argument);
}

TEST_CASE("the decision rejects what it cannot answer") {
    SpecFile chain = chain_spec();
    std::map<std::string, Weight> one_worker{{"work", 1}};
    CHECK_THROWS_AS(decide_cover_pps(chain.types, chain.grammar, one_worker),
                    std::invalid_argument);

    SpecFile ring = ring_spec();
    Query pinned;
    pinned.id = "pinned";
    pinned.cover = true;
    pinned.atoms = {{"Link", "a", "hot", 1}};
    CHECK_THROWS_AS(decide_cover_pps(ring.types, ring.grammar, pinned), std::invalid_argument);
    Query reach;
    reach.id = "exact";
    reach.cover = false;
    reach.atoms = {{"Link", "", "hot", 1}};
    CHECK_THROWS_AS(decide_cover_pps(ring.types, ring.grammar, reach), std::invalid_argument);
    std::map<std::string, Weight> nowhere{{"nowhere", 1}};
    CHECK_THROWS_AS(decide_cover_pps(ring.types, ring.grammar, nowhere),
                    std::invalid_argument);
}

TEST_CASE("an empty topology language covers only nothing at all") {
    SpecFile ring = ring_spec();
    HrGrammar empty;
    empty.axiom = "X";
    empty.rules = {{"X", HrTerm::nonterm("X")}};
    std::map<std::string, Weight> nothing;
    CHECK_FALSE(decide_cover_pps(ring.types, empty, nothing));
    CHECK(decide_cover_pps(ring.types, ring.grammar, nothing));
}

TEST_CASE("bundled pebble specs meet their expected verdicts") {
    for (auto spec : {ring_spec(), star_spec(), tree_spec()}) {
        for (const auto& q : spec.queries) {
            CAPTURE(q.id);
            REQUIRE((q.expect == "COVERABLE" || q.expect == "UNCOVERABLE"));
            CHECK(decide_cover_pps(spec.types, spec.grammar, q) == (q.expect == "COVERABLE"));
        }
    }
}

TEST_CASE("the decision matches exhaustive search on every small instance") {
    for (auto spec : {ring_spec(), star_spec(), tree_spec()}) {
        const TypeTable& tt = spec.types;
        PpsCheck pps = check_pps(tt, spec.grammar);
        REQUIRE(pps.ok);

        DeriveOptions opt;
        opt.max_vertices = 8;
        DeriveResult inst = derive_systems(tt, spec.grammar, opt);
        REQUIRE_FALSE(inst.truncated);
        REQUIRE(inst.items.size() >= 5);

        CAPTURE(spec.grammar.axiom);
        for (const auto& target : targets_up_to(all_places(tt), 3)) {
            bool abstractly = decide_cover_pps(tt, spec.grammar, target);
            bool concretely = false;
            int K = 0;
            for (const auto& [p, c] : target) K += static_cast<int>(c);
            for (const auto& item : inst.items) {
                bool full = brute::exhaustive_cover(tt, pps, item.system, target);
                // The degree budget never hides a cover (nor invents one).
                CHECK(brute::degree_bounded_cover(tt, pps, item.system, target, K) == full);
                concretely |= full;
                if (concretely) break;
            }
            CAPTURE(target);
            CHECK(abstractly == concretely);
        }

        // Pebble conservation across every reachable footprint.
        for (const auto& item : inst.items) {
            Footprint init = initial_footprint(tt, pps, item.system);
            int total = std::accumulate(init.begin(), init.end(), 0);
            for (const auto& fp : brute::reachable_footprints(pps, item.system, init))
                CHECK(std::accumulate(fp.begin(), fp.end(), 0) == total);
        }
    }
}
