#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "sparsicolor/gen.hpp"
#include "sparsicolor/graph.hpp"

using namespace sparsicolor;

TEST_CASE("clique generator") {
    CHECK(gen_clique(1, 7).m() == 0);
    Graph k4 = gen_clique(4, 7);
    CHECK(k4.m() == 6);
    CHECK(k4.delta() == 3);
    Graph k257 = gen_clique(257, 7);
    CHECK(k257.delta() == 256);
    for (NodeId v = 0; v < 257; ++v) CHECK(k257.degree(v) == 256);
}

TEST_CASE("gnp generator") {
    CHECK(gen_gnp(100, 0.0, 3).m() == 0);
    Graph k5 = gen_gnp(5, 1.0, 3);
    CHECK(k5.m() == 10);

    // Edge count within 4 sigma of the binomial mean over C(1000,2) pairs.
    Graph g = gen_gnp(1000, 0.1, 42);
    double pairs = 1000.0 * 999.0 / 2.0;
    double mean = 0.1 * pairs;
    double sigma = std::sqrt(pairs * 0.1 * 0.9);
    CHECK(std::llabs(g.m() - static_cast<int64_t>(mean)) < 4.0 * sigma);
    CHECK(g.check_invariants());
}

TEST_CASE("gnp is reproducible in the seed") {
    Graph a = gen_gnp(300, 0.05, 11);
    Graph b = gen_gnp(300, 0.05, 11);
    Graph c = gen_gnp(300, 0.05, 12);
    CHECK(format_edge_list(a) == format_edge_list(b));
    CHECK(format_edge_list(a) != format_edge_list(c));
}

TEST_CASE("planted: degenerate specs") {
    GenSpec one;
    one.family = Family::PlantedCliques;
    one.n = 50;
    one.clique_count = 1;
    one.clique_size = 50;
    one.epsilon_holes = 0.0;
    one.cross_mean = 0.0;
    one.seed = 5;
    auto [g, part] = gen_planted(one);
    CHECK(g.m() == 50 * 49 / 2); // K_n
    CHECK(part.cliques.size() == 1);

    GenSpec two = one;
    two.n = 200;
    two.clique_count = 2;
    two.clique_size = 100;
    auto [g2, part2] = gen_planted(two);
    CHECK(part2.cliques.size() == 2);
    // Zero cross edges: the two cliques are separate components.
    for (NodeId u : part2.cliques[0])
        for (NodeId v : part2.cliques[1]) CHECK_FALSE(g2.has_edge(u, v));
    CHECK(g2.check_invariants());
}

TEST_CASE("planted: infeasible spec rejected") {
    GenSpec bad;
    bad.family = Family::PlantedCliques;
    bad.n = 10;
    bad.clique_count = 3;
    bad.clique_size = 5;
    CHECK_THROWS(gen_planted(bad));
}

TEST_CASE("planted: members keep (1-2*holes) of delta inside, 99/100 seeds") {
    // Large cliques so the binomial spread sits inside the 0.9 margin.
    int pass = 0;
    for (int s = 0; s < 100; ++s) {
        GenSpec spec;
        spec.family = Family::PlantedCliques;
        spec.n = 1500;
        spec.clique_count = 2;
        spec.clique_size = 650;
        spec.epsilon_holes = 0.05;
        spec.cross_mean = 1.0;
        spec.cross_fraction = 0.01;
        spec.seed = 1000 + s;
        auto [g, part] = gen_planted(spec);
        bool ok = true;
        for (int c = 0; c < 2 && ok; ++c) {
            for (NodeId v : part.cliques[c]) {
                int inside = 0;
                for (NodeId u : g.neighbors(v))
                    if (part.clique_of[u] == c) ++inside;
                if (inside < 0.9 * g.delta()) { ok = false; break; }
            }
        }
        pass += ok;
    }
    CHECK(pass >= 99);
}

TEST_CASE("graph stats") {
    Graph empty(3, {});
    auto st = graph_stats(empty);
    CHECK(st.m == 0);
    CHECK(st.delta == 0);

    auto k4 = graph_stats(gen_clique(4, 1));
    CHECK(k4.m == 6);
    CHECK(k4.delta == 3);

    auto g = graph_stats(gen_gnp(100, 0.5, 9));
    CHECK(g.delta >= 35);
    CHECK(g.delta <= 70);
}

TEST_CASE("edge list format round trip") {
    Graph g = gen_gnp(60, 0.1, 4);
    std::string text = format_edge_list(g);
    Graph h = parse_edge_list(text);
    CHECK(format_edge_list(h) == text);
    CHECK(h.n() == g.n());
    CHECK(h.m() == g.m());

    Graph inferred = parse_edge_list("# comment line\n0 1\n1 2\n");
    CHECK(inferred.n() == 3);
    CHECK(inferred.m() == 2);

    Graph with_n = parse_edge_list("# n=7\n0 1\n");
    CHECK(with_n.n() == 7);
}

TEST_CASE("generated graphs satisfy simplicity and symmetry") {
    for (uint64_t s = 1; s <= 3; ++s) {
        CHECK(gen_gnp(200, 0.2, s).check_invariants());
        GenSpec spec;
        spec.family = Family::PlantedCliques;
        spec.n = 300;
        spec.clique_count = 2;
        spec.clique_size = 80;
        spec.epsilon_holes = 0.1;
        spec.seed = s;
        auto [g, part] = gen_planted(spec);
        CHECK(g.check_invariants());
    }
}
