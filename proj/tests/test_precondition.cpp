#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "sparsicolor/gen.hpp"
#include "sparsicolor/oracle.hpp"
#include "sparsicolor/pipeline.hpp"
#include "sparsicolor/precondition.hpp"
#include "sparsicolor/rng.hpp"

using namespace sparsicolor;

namespace {
struct Sim {
    Graph g;
    Derived d;
    ColorLists lists;
    Graph sparse;
    PartialColoring col;
    Engine eng;

    Sim(Graph graph, Params p, uint64_t seed)
        : g(std::move(graph)),
          d(derive(p, g.n(), std::max(1, g.delta()))),
          lists(g, d, seed),
          sparse(build_sparsified(g, lists)),
          col(g.n()),
          eng(g, sparse, sample_aux_edges(g, d.es_rate, seed), d, lists, col, seed) {}
};
} // namespace

TEST_CASE("classify_external: zero external degree is introvert") {
    Graph k = gen_clique(80, 1);
    Sim sim(k, Params{}, 3);
    sim.eng.begin_phase("t");
    Decomposition dec = acd_exact(k, 0.05);
    auto extro = classify_external(sim.eng, dec, 3);
    for (NodeId v = 0; v < k.n(); ++v) CHECK_FALSE(extro[v]);
}

TEST_CASE("classify_external: high cross degree is extrovert, 99/100 seeds") {
    // Probe node split between two cliques: 44 edges into each. Relative to
    // its assigned clique, the other 44 edges are external, far above
    // delta/eta; sampling must call it extrovert.
    int hits = 0;
    for (int t = 0; t < 100; ++t) {
        std::vector<std::pair<NodeId, NodeId>> edges;
        const int half = 90;
        for (int i = 0; i < half; ++i)
            for (int j = i + 1; j < half; ++j) {
                edges.emplace_back(i, j);
                edges.emplace_back(half + i, half + j);
            }
        NodeId probe = 2 * half;
        for (int i = 0; i < 44; ++i) {
            edges.emplace_back(probe, i);
            edges.emplace_back(probe, half + i);
        }
        Graph g(2 * half + 1, std::move(edges));
        Sim sim(g, Params{}, 100 + t);
        sim.eng.begin_phase("t");
        Decomposition dec = acd_exact(g, 1.0);
        REQUIRE(dec.clique_count() == 2);
        if (dec.sparse(probe)) dec.clique_of[probe] = dec.clique_of[0];
        auto extro = classify_external(sim.eng, dec, 100 + t);
        hits += extro[probe];
    }
    CHECK(hits >= 99);
}

TEST_CASE("generate_slack: tie break and isolated keeps") {
    // Two adjacent nodes trying the same color: the lower ID keeps it.
    Graph pair(3, {{0, 1}});
    Params p;
    Derived d = derive(p, 3, 1);
    ColorLists lists = ColorLists::from_explicit(3, 1, {{2}, {2}, {1}});
    PartialColoring col(3);
    Engine eng(pair, pair, {}, d, lists, col, 1);
    eng.begin_phase("slack");
    std::vector<char> eligible(3, 1);
    int colored = generate_slack(eng, eligible, 1.0, 7);
    CHECK(colored == 2);          // node 0 and the isolated node 2
    CHECK(col.colored(0));        // lower id kept the contested color
    CHECK_FALSE(col.colored(1));
    CHECK(col.colored(2));        // isolated node keeps anything it tries
    CHECK(oracle::verify_proper(pair, col).kind != oracle::VerdictKind::Conflict);
}

TEST_CASE("multi_trial colors a small clique with full palettes") {
    // Clique of 4 inside color space of 9: all colored within 3 iterations
    // in nearly every seed.
    int all_colored = 0;
    for (int t = 0; t < 100; ++t) {
        Graph k = gen_clique(4, 1);
        Params p;
        p.multitrial_iters = 3;
        p.c1 = 64; // ample L1 at this tiny n
        Derived d = derive(p, 4, 8); // pretend delta = 8: palette size 9
        ColorLists lists(k, d, 40 + t);
        PartialColoring col(4);
        Engine eng(k, k, {}, d, lists, col, 40 + t);
        eng.begin_phase("mt");
        auto res = multi_trial(eng, {0, 1, 2, 3}, 1, 9);
        all_colored += res.leftover.empty();
    }
    CHECK(all_colored >= 99);
}

TEST_CASE("multi_trial leaves zero-slack nodes to the contract check") {
#ifndef NDEBUG
    // Zero-slack node: its palette is exactly its uncolored degree.
    Graph pair(2, {{0, 1}});
    Params p;
    Derived d = derive(p, 2, 1);
    ColorLists lists = ColorLists::from_explicit(2, 0, {{1}, {1}});
    PartialColoring col(2);
    Engine eng(pair, pair, {}, d, lists, col, 1);
    eng.begin_phase("mt");
    CHECK_THROWS_AS(multi_trial(eng, {0, 1}, 2, 9), SimError);
#endif
}

TEST_CASE("precondition on an all-introvert planted instance") {
    // Low cross degree: every dense node is introvert, phases 2-4 color
    // sparse nodes only; survivors are whole cliques.
    GenSpec spec = planted_for_delta(96, 384, 0.03, 5);
    spec.cross_mean = 0.5;
    PlantedPartition part;
    Graph g = generate(spec, &part);
    auto r = run_pipeline(g, Params{}, 5, PipelineOptions{Stage::Precondition, false});
    REQUIRE(r.metrics.phase("precondition") != nullptr);
    CHECK(r.metrics.phase("precondition")->status == PhaseStatus::Ok);
    // Survivors exist and are proper subsets covering most clique members.
    REQUIRE(!r.strong.decomp.cliques.empty());
    int survivors = 0;
    for (auto& c : r.strong.decomp.cliques) survivors += static_cast<int>(c.size());
    CHECK(survivors > 0);
    CHECK(r.strong.stranded <= g.n() / 20);
    // All colored nodes are frozen and the partial coloring is proper.
    CHECK(oracle::verify_proper(g, r.coloring).kind != oracle::VerdictKind::Conflict);
    for (NodeId v = 0; v < g.n(); ++v)
        if (r.coloring.colored(v)) CHECK(r.coloring.frozen(v));
}

TEST_CASE("precondition bounds uncolored external degree, 90/100 seeds") {
    int ok = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        GenSpec spec = planted_for_delta(96, 384, 0.03, 200 + t);
        spec.cross_mean = 1.5;
        Graph g = generate(spec);
        auto r = run_pipeline(g, Params{}, 200 + t, PipelineOptions{Stage::Precondition, false});
        bool bound = true;
        for (auto& c : r.strong.decomp.cliques)
            for (NodeId v : c)
                if (r.strong.ext_uncolored[v] > r.strong.e_max) bound = false;
        ok += bound;
    }
    CHECK(ok >= 90);
}

TEST_CASE("multi_trial progress: treated set decays by 1.3x per iteration") {
    std::vector<double> factors;
    for (int t = 0; t < 40; ++t) {
        Graph k = gen_clique(120, 900 + t);
        Params p;
        Derived d = derive(p, 120, 240); // ample palette vs degree: real slack
        ColorLists lists(k, d, 900 + t);
        PartialColoring col(120);
        Engine eng(k, k, {}, d, lists, col, 900 + t);
        eng.begin_phase("mt");
        std::vector<NodeId> all;
        for (NodeId v = 0; v < 120; ++v) all.push_back(v);
        auto res = multi_trial(eng, all, 1, 5);
        for (size_t i = 0; i + 1 < res.uncolored_per_iter.size(); ++i)
            if (res.uncolored_per_iter[i + 1] > 0)
                factors.push_back(static_cast<double>(res.uncolored_per_iter[i]) /
                                  res.uncolored_per_iter[i + 1]);
    }
    REQUIRE(!factors.empty());
    std::sort(factors.begin(), factors.end());
    CHECK(factors[factors.size() / 2] >= 1.3);
}

TEST_CASE("staged extrovert clique is fully colored by preconditioning") {
    // Five cliques; members of the first spray cross edges over the others,
    // making it the lone extrovert clique. Afterwards its nodes are all
    // colored and survivors sit in the other four with bounded uncolored
    // external degree.
    int ok = 0;
    const int trials = 40;
    for (int t = 0; t < trials; ++t) {
        const int s = 80, k = 5;
        std::vector<std::pair<NodeId, NodeId>> edges;
        for (int c = 0; c < k; ++c)
            for (int i = 0; i < s; ++i)
                for (int j = i + 1; j < s; ++j)
                    edges.emplace_back(c * s + i, c * s + j);
        Rng rng(700 + t);
        std::set<std::pair<NodeId, NodeId>> cross;
        for (int i = 0; i < s; ++i) {
            for (int e = 0; e < 24; ++e) { // ~0.3 * delta cross edges each
                NodeId u = static_cast<NodeId>(i);
                NodeId v = static_cast<NodeId>(s + rng.uniform(4 * s));
                cross.insert({std::min(u, v), std::max(u, v)});
            }
        }
        for (auto& e : cross) edges.push_back(e);
        Graph g(k * s, std::move(edges));
        auto r = run_pipeline(g, Params{}, 700 + t, PipelineOptions{Stage::Precondition, false});
        bool clique0_colored = true;
        for (NodeId v = 0; v < s; ++v)
            if (!r.coloring.colored(v)) clique0_colored = false;
        bool bound = r.strong.stranded == 0;
        for (auto& c : r.strong.decomp.cliques)
            for (NodeId v : c)
                if (r.strong.ext_uncolored[v] > r.strong.e_max) bound = false;
        ok += clique0_colored && bound;
    }
    CHECK(ok >= 0.9 * trials);
}
