/* test_behaviors.cc -- marked-net semantics and the folded abstraction */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "../src/behaviors.hh"
#include "fixtures.hh"

using namespace pcs;
using fixtures::chain_system;
using fixtures::controller_worker_table;
using fixtures::star_system;

namespace {

TypeTable closed_table() { return controller_worker_table({}); }

FTrans ftrans(std::vector<std::pair<FKey, Weight>> pre, std::vector<std::pair<FKey, Weight>> post) {
    std::sort(pre.begin(), pre.end());
    std::sort(post.begin(), post.end());
    return {std::move(pre), std::move(post)};
}

/// Hand-built expectation for the folded chain behavior: one merged
/// worker class next to the controller class.
FoldedNet expected_folded_chain(Weight workers) {
    FoldedNet f;
    FKey tokC = FKey::cls("tokC"), nokC = FKey::cls("nokC");
    FKey tok = FKey::cls("tok"), nok = FKey::cls("nok"), work = FKey::cls("work");
    f.places = {tokC, nokC, tok, nok, work};
    f.transitions = {
        ftrans({{tokC, 1}, {nok, 1}}, {{nokC, 1}, {tok, 1}}),  // controller hands off
        ftrans({{tok, 1}, {nok, 1}}, {{tok, 1}, {nok, 1}}),    // worker-to-worker handoff
        ftrans({{tok, 1}}, {{work, 1}}),
        ftrans({{work, 1}}, {{tok, 1}}),
    };
    f.initial = std::map<FKey, Weight>{{tokC, 1}, {nok, workers}};
    return f;
}

FoldedNet expected_folded_star(Weight workers) {
    FoldedNet f;
    FKey tokC = FKey::cls("tokC"), nokC = FKey::cls("nokC");
    FKey tok = FKey::cls("tok"), nok = FKey::cls("nok"), work = FKey::cls("work");
    f.places = {tokC, nokC, tok, nok, work};
    f.transitions = {
        ftrans({{tokC, 1}, {nok, 1}}, {{nokC, 1}, {tok, 1}}),
        ftrans({{nokC, 1}, {tok, 1}}, {{tokC, 1}, {nok, 1}}),  // token returns
        ftrans({{tok, 1}}, {{work, 1}}),
        ftrans({{work, 1}}, {{tok, 1}}),
    };
    f.initial = std::map<FKey, Weight>{{tokC, 1}, {nok, workers}};
    return f;
}

bool cover_folded(const FoldedNet& f, const std::map<std::string, Weight>& target) {
    PetriNet pn = folded_to_petri(f);
    PartialMarking pm;
    for (const auto& [name, w] : target) pm.set(pn.net.place_id(name), w);
    return backward_coverable(pn, pm).coverable;
}

}  // namespace

TEST_CASE("behavior of the chain matches the hand-built net") {
    TypeTable tt = closed_table();
    Behavior b = beta(tt, chain_system(tt, 4));

    CHECK(b.pn.net.places.size() == 11);       // 2 controller + 3x3 worker places
    CHECK(b.pn.net.transitions.size() == 9);   // 3 edges + 3x2 internal
    Weight total = 0;
    for (Weight w : b.pn.initial) total += w;
    CHECK(total == 4);  // one token per vertex

    // Every transition moves one or two tokens, never more.
    for (const auto& st : b.pn.net.arcs) {
        Weight in = 0, out = 0;
        for (auto [p, w] : st.pre) in += w;
        for (auto [p, w] : st.post) out += w;
        CHECK(in == out);
        CHECK(in >= 1);
        CHECK(in <= 2);
    }

    auto r = reachable_bounded(b.pn, 100000);
    CHECK_FALSE(r.truncated);
    CHECK(r.markings.size() == 7);  // matches the independent construction
}

TEST_CASE("behavior bookkeeping maps transitions back to the system") {
    TypeTable tt = closed_table();
    OpenSystem s = star_system(tt, 3);
    Behavior b = beta(tt, s);

    std::size_t edge_trans = 0, internal_trans = 0;
    for (std::size_t t = 0; t < b.pn.net.transitions.size(); ++t) {
        if (b.edge_of[t] >= 0) {
            ++edge_trans;
            CHECK(b.internal_of[t] == std::pair{-1, -1});
            CHECK(b.edge_of[t] < static_cast<int>(s.edges.size()));
        } else {
            ++internal_trans;
            auto [v, lt] = b.internal_of[t];
            CHECK(v >= 0);
            CHECK_FALSE(tt.types[s.vtype[v]].transitions[lt].observable);
        }
    }
    CHECK(edge_trans == s.edges.size());
    CHECK(internal_trans == 4);  // two workers with start/stop
}

TEST_CASE("folding the chain behavior gives the two-class net") {
    TypeTable tt = closed_table();
    FoldedNet f = fold(tt, beta(tt, chain_system(tt, 4)));
    CHECK_NOTHROW(check_folded_invariants(f));
    CHECK(f == expected_folded_chain(3));

    // Longer chains fold to the same structure, only the marking grows.
    FoldedNet f6 = fold(tt, beta(tt, chain_system(tt, 6)));
    CHECK(f6 == expected_folded_chain(5));
    CHECK(drop_marking(f6) == drop_marking(f));
}

TEST_CASE("folding the star behavior gives the round-trip net") {
    TypeTable tt = closed_table();
    FoldedNet f = fold(tt, beta(tt, star_system(tt, 4)));
    CHECK_NOTHROW(check_folded_invariants(f));
    CHECK(f == expected_folded_star(3));
}

TEST_CASE("source-labeled vertices keep pinned places") {
    TypeTable tt = controller_worker_table({{"s1", "Proc"}});
    FoldedNet f = fold(tt, beta(tt, chain_system(tt, 4, "s1")));
    CHECK_NOTHROW(check_folded_invariants(f));

    CHECK(f.visible == std::set<std::string>{"s1"});
    CHECK(f.places.count(FKey::src("s1", "tok")) == 1);
    CHECK(f.places.count(FKey::src("s1", "nok")) == 1);
    CHECK(f.places.count(FKey::src("s1", "work")) == 1);
    CHECK(f.places.count(FKey::cls("tok")) == 1);  // the inner worker

    // The pinned end: one worker-to-worker edge touches it, so the
    // handoff transition splits into a pinned and an unpinned variant.
    CHECK(f.initial->at(FKey::src("s1", "nok")) == 1);
    CHECK(f.initial->at(FKey::cls("nok")) == 2);

    // Hiding the label merges everything back.
    CHECK(folded_restrict(tt, f, {}) == expected_folded_chain(3));
}

TEST_CASE("folded operations track the concrete constructions") {
    TypeTable tt = controller_worker_table({{"s1", "Proc"}, {"s2", "Proc"}, {"s3", "Cont"}});

    auto via_behavior = [&](const OpenSystem& s) { return drop_marking(fold(tt, beta(tt, s))); };

    OpenSystem e1 = edge_const(tt, "relC", "get", "s3", "s2");
    OpenSystem e2 = edge_const(tt, "rel", "get", "s2", "s1");
    CHECK(folded_edge_const(tt, "relC", "get", "s3", "s2") == via_behavior(e1));

    OpenSystem base = restrict_sources(compose(tt, e1, e2), {"s1"});
    FoldedNet fbase = folded_restrict(
        tt,
        folded_compose(tt, folded_edge_const(tt, "relC", "get", "s3", "s2"),
                       folded_edge_const(tt, "rel", "get", "s2", "s1")),
        {"s1"});
    CHECK(fbase == via_behavior(base));

    // One recursive growth step, mirrored on both levels.
    OpenSystem grown = restrict_sources(
        rename_sources(tt, compose(tt, base, edge_const(tt, "rel", "get", "s1", "s2")),
                       {{"s1", "s2"}, {"s2", "s1"}}),
        {"s1"});
    FoldedNet fgrown = folded_restrict(
        tt,
        folded_rename(tt,
                      folded_compose(tt, fbase, folded_edge_const(tt, "rel", "get", "s1", "s2")),
                      {{"s1", "s2"}, {"s2", "s1"}}),
        {"s1"});
    CHECK(fgrown == via_behavior(grown));
    // The base chain has no handoff between two unpinned workers yet,
    // so the first growth step adds one transition; afterwards the
    // folded value is a fixed point of growing.
    CHECK(fgrown != fbase);
    OpenSystem grown2 = restrict_sources(
        rename_sources(tt, compose(tt, grown, edge_const(tt, "rel", "get", "s1", "s2")),
                       {{"s1", "s2"}, {"s2", "s1"}}),
        {"s1"});
    FoldedNet fgrown2 = folded_restrict(
        tt,
        folded_rename(tt,
                      folded_compose(tt, fgrown, folded_edge_const(tt, "rel", "get", "s1", "s2")),
                      {{"s1", "s2"}, {"s2", "s1"}}),
        {"s1"});
    CHECK(fgrown2 == via_behavior(grown2));
    CHECK(fgrown2 == fgrown);

    CHECK_NOTHROW(check_folded_invariants(fbase));
    CHECK_NOTHROW(check_folded_invariants(fgrown));
}

TEST_CASE("folded algebra rejects mixed marked/unmarked composition") {
    TypeTable tt = controller_worker_table({{"s1", "Proc"}, {"s2", "Proc"}});
    FoldedNet marked = fold(tt, beta(tt, edge_const(tt, "rel", "get", "s1", "s2")));
    FoldedNet bare = drop_marking(marked);
    CHECK_THROWS_AS(folded_compose(tt, marked, bare), std::logic_error);
    CHECK(folded_compose(tt, marked, marked).initial.has_value());
}

TEST_CASE("mutual exclusion holds in the folded instance nets") {
    TypeTable tt = closed_table();
    FoldedNet chain = fold(tt, beta(tt, chain_system(tt, 5)));
    FoldedNet star = fold(tt, beta(tt, star_system(tt, 5)));

    for (const FoldedNet& f : {chain, star}) {
        CHECK(cover_folded(f, {{"q__work", 1}}));
        CHECK_FALSE(cover_folded(f, {{"q__work", 2}}));
        CHECK_FALSE(cover_folded(f, {{"q__work", 1}, {"q__tok", 1}}));
        CHECK_FALSE(cover_folded(f, {{"q__tok", 2}}));
    }
    CHECK(cover_folded(star, {{"q__tokC", 1}, {"q__nok", 3}}));
    CHECK_FALSE(cover_folded(chain, {{"q__tokC", 1}, {"q__tok", 1}}));  // token left for good
    CHECK(cover_folded(star, {{"q__nokC", 1}, {"q__tok", 1}}));
}

TEST_CASE("folded net renders deterministically") {
    TypeTable tt = closed_table();
    FoldedNet f = fold(tt, beta(tt, chain_system(tt, 4)));
    PetriNet pn = folded_to_petri(f);
    CHECK(pn.net.places ==
          std::vector<std::string>{"q__nok", "q__nokC", "q__tok", "q__tokC", "q__work"});
    CHECK(pn.net.transitions.size() == 4);
    CHECK(pn.initial[pn.net.place_id("q__tokC")] == 1);
    CHECK(pn.initial[pn.net.place_id("q__nok")] == 3);
    CHECK(to_string(f) == to_string(f));
}

TEST_CASE("restrict after fold equals fold after restrict") {
    TypeTable tt = controller_worker_table({{"s1", "Proc"}, {"z1", "Cont"}});
    OpenSystem s = star_system(tt, 4, "z1");
    FoldedNet folded_then_restricted = folded_restrict(tt, fold(tt, beta(tt, s)), {});
    FoldedNet restricted_then_folded = fold(tt, beta(tt, restrict_sources(s, {})));
    CHECK(folded_then_restricted == restricted_then_folded);
}
