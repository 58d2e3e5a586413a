#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sparsicolor/engine.hpp"
#include "sparsicolor/gen.hpp"

using namespace sparsicolor;

namespace {
struct Fixture {
    Graph g;
    Derived d;
    ColorLists lists;
    PartialColoring col;
    Engine eng;

    explicit Fixture(int n = 3, uint64_t seed = 1)
        : g(gen_clique(n, seed)),
          d(derive(Params{}, n, n - 1)),
          lists(g, d, seed),
          col(n),
          eng(g, g, {}, d, lists, col, seed) {}
};
} // namespace

TEST_CASE("account: fixed-width field sizes") {
    Derived d = derive(Params{}, 1024, 512);
    CHECK(d.id_bits() == 10);
    CHECK(d.color_bits() == 10);
    Message pair = MsgBuilder(d).id(3).color(97).build();
    CHECK(account(pair) == 20);
    Message c = MsgBuilder(d).color(5).build();
    CHECK(account(c) == 10);
    Message empty;
    CHECK(account(empty) == 0);
    Message tagged = MsgBuilder(d).tag(7).id(1).build();
    CHECK(account(tagged) == 18);
}

TEST_CASE("empty protocol: zero rounds, coloring untouched") {
    Fixture f;
    f.eng.begin_phase("noop");
    auto pm = f.eng.end_phase(PhaseStatus::Ok);
    CHECK(pm.rounds == 0);
    CHECK(pm.max_bits_edge == 0);
    CHECK(f.col.uncolored_count() == 3);
}

TEST_CASE("one broadcast round on K_3") {
    Fixture f;
    f.eng.begin_phase("probe");
    for (NodeId v = 0; v < 3; ++v)
        for (NodeId u : f.eng.legal_neighbors(v))
            f.eng.send(v, u, MsgBuilder(f.d).bit(true).build());
    f.eng.advance_round();
    auto pm = f.eng.end_phase(PhaseStatus::Ok);
    CHECK(pm.rounds == 1);
    CHECK(pm.max_distinct_neighbors == 2);
    CHECK(pm.max_bits_edge >= 1);
}

TEST_CASE("synchrony: messages sent in round r are visible only in r+1") {
    Fixture f;
    f.eng.begin_phase("probe");
    f.eng.send(0, 1, MsgBuilder(f.d).id(0).build());
    CHECK(f.eng.inbox(1).empty()); // not readable in the sending round
    f.eng.advance_round();
    REQUIRE(f.eng.inbox(1).size() == 1);
    CHECK(f.eng.inbox(1)[0].from == 0);
    f.eng.advance_round();
    CHECK(f.eng.inbox(1).empty()); // consumed at the next barrier
    f.eng.end_phase(PhaseStatus::Ok);
}

TEST_CASE("illegal edge send is a hard failure") {
    Graph g(4, {{0, 1}, {2, 3}});
    Derived d = derive(Params{}, 4, 1);
    ColorLists lists(g, d, 1);
    PartialColoring col(4);
    Graph sparse(4, {{0, 1}}); // edge 2-3 dropped
    Engine eng(g, sparse, {}, d, lists, col, 1);
    eng.begin_phase("probe");
    CHECK_THROWS_AS(eng.send(2, 3, MsgBuilder(d).bit(true).build()), SimError);
    CHECK(eng.metrics().illegal_edge_events == 1);
}

TEST_CASE("properness asserted at the commit barrier") {
    Fixture f;
    f.eng.begin_phase("bad");
    f.eng.propose_color(0, 5);
    f.eng.propose_color(1, 5);
    CHECK_THROWS_AS(f.eng.commit(), SimError);
}

TEST_CASE("round cap is enforced") {
    Params p;
    p.round_cap = 3;
    Graph g = gen_clique(3, 1);
    Derived d = derive(p, 3, 2);
    ColorLists lists(g, d, 1);
    PartialColoring col(3);
    Engine eng(g, g, {}, d, lists, col, 1);
    eng.begin_phase("spin");
    eng.advance_round();
    eng.advance_round();
    eng.advance_round();
    CHECK_THROWS_AS(eng.advance_round(), RoundCapExceeded);
}

TEST_CASE("charge chunks wide payloads into the per-round budget") {
    Fixture f;
    f.eng.begin_phase("agg");
    int64_t budget = f.d.bits_per_edge_budget;
    f.eng.charge_payload(1, 3 * budget + 1);
    auto pm = f.eng.end_phase(PhaseStatus::Ok);
    CHECK(pm.rounds == 4);
    CHECK(pm.max_bits_edge <= budget);
}

TEST_CASE("parallel lanes merge as max rounds") {
    Fixture f;
    f.eng.begin_phase("par");
    f.eng.parallel_begin();
    f.eng.lane_begin();
    f.eng.charge(5, 8);
    f.eng.lane_end();
    f.eng.lane_begin();
    f.eng.charge(9, 8);
    f.eng.lane_end();
    f.eng.parallel_end();
    auto pm = f.eng.end_phase(PhaseStatus::Ok);
    CHECK(pm.rounds == 9);
}

TEST_CASE("deterministic rng streams per (node, phase, round)") {
    Fixture a(3, 7), b(3, 7);
    a.eng.begin_phase("x");
    b.eng.begin_phase("x");
    CHECK(a.eng.rng(1).next() == b.eng.rng(1).next());
    CHECK(a.eng.rng(1).next() != a.eng.rng(2).next());
    b.eng.advance_round();
    CHECK(a.eng.rng(1).next() != b.eng.rng(1).next()); // round advanced
    b.eng.begin_phase("y");
    CHECK(a.eng.rng(1).next() != b.eng.rng(1).next()); // different phase
}

TEST_CASE("paper-mode constants and the parameter relation checks") {
    Params paper = Params::paper();
    Derived d = derive(paper, 1 << 20, 1 << 18);
    CHECK(d.alpha == 500);
    CHECK(d.epsilon == doctest::Approx(1e-8));
    CHECK(d.eq2_ok);
    CHECK(d.eta >= 160.0 * d.alpha * d.beta); // Eq-derived

    // Violating the relations is a hard error in paper mode...
    Params bad = Params::paper();
    bad.alpha = 2;
    bad.epsilon = 0.05;
    CHECK_THROWS_AS(derive(bad, 1024, 512), std::invalid_argument);

    // ...and a logged warning in desk mode.
    Params desk;
    Derived dd = derive(desk, 1024, 512);
    CHECK_FALSE(dd.eq2_ok);
    CHECK_FALSE(dd.warnings.empty());
}

TEST_CASE("paper mode rejects deficient L3 halves; desk mode counts them") {
    // beta far above what delta can supply: every half is short.
    Params p;
    p.beta_override = 64;
    Graph g = gen_clique(9, 1); // delta 8: halves hold at most 9 colors
    Derived d = derive(p, 9, 8);
    d.paper_mode = true;
    ColorLists strict(g, d, 3);
    CHECK_THROWS(strict.members(0, SublistId::l3g(0)));

    d.paper_mode = false;
    ColorLists lax(g, d, 3);
    (void)lax.members(0, SublistId::l3g(0));
    CHECK(lax.l3_half_deficits() == 1);
}
