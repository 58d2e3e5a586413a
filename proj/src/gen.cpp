#include "sparsicolor/gen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "sparsicolor/rng.hpp"

namespace sparsicolor {

namespace {
constexpr uint64_t kTagGnp = 0x67727068ULL;
constexpr uint64_t kTagHoles = 0x686f6c65ULL;
constexpr uint64_t kTagCross = 0x63726f73ULL;
constexpr uint64_t kTagBg = 0x62616367ULL;

// Bernoulli(p) over all pairs (i, j), i < j, via geometric skipping.
template <typename F>
void sample_pairs(int n, double p, Rng& rng, F&& emit) {
    if (p <= 0.0 || n < 2) return;
    int64_t total = static_cast<int64_t>(n) * (n - 1) / 2;
    if (p >= 1.0) {
        for (NodeId u = 0; u < n; ++u)
            for (NodeId v = u + 1; v < n; ++v) emit(u, v);
        return;
    }
    auto pair_at = [n](int64_t idx) {
        // Row-major rank over the strict upper triangle.
        int64_t u = 0, row = n - 1;
        while (idx >= row) {
            idx -= row;
            ++u;
            --row;
        }
        return std::pair<NodeId, NodeId>(static_cast<NodeId>(u), static_cast<NodeId>(u + 1 + idx));
    };
    int64_t idx = -1;
    for (;;) {
        idx += 1 + static_cast<int64_t>(rng.geometric_skip(p));
        if (idx >= total) break;
        auto [u, v] = pair_at(idx);
        emit(u, v);
    }
}
} // namespace

Graph gen_clique(int n, uint64_t seed) {
    (void)seed;
    if (n < 1) throw std::invalid_argument("gen_clique: n >= 1 required");
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(static_cast<size_t>(n) * (n - 1) / 2);
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return Graph(n, std::move(edges));
}

Graph gen_gnp(int n, double p, uint64_t seed) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("gen_gnp: p in [0,1] required");
    Rng rng = Rng::stream(seed, 0, kTagGnp);
    std::vector<std::pair<NodeId, NodeId>> edges;
    sample_pairs(n, p, rng, [&](NodeId u, NodeId v) { edges.emplace_back(u, v); });
    return Graph(n, std::move(edges));
}

std::pair<Graph, PlantedPartition> gen_planted(const GenSpec& spec) {
    const int n = spec.n;
    const int k = spec.clique_count;
    const int s = spec.clique_size;
    if (k < 1 || s < 1 || static_cast<int64_t>(k) * s > n)
        throw std::invalid_argument("gen_planted: clique_size*clique_count <= n required");
    if (spec.epsilon_holes < 0.0 || spec.epsilon_holes >= 1.0 / 3.0)
        throw std::invalid_argument("gen_planted: epsilon_holes in [0, 1/3) required");

    PlantedPartition part;
    part.clique_of.assign(n, -1);
    part.cliques.resize(k);
    for (int c = 0; c < k; ++c) {
        for (int i = 0; i < s; ++i) {
            NodeId v = static_cast<NodeId>(c * s + i);
            part.clique_of[v] = c;
            part.cliques[c].push_back(v);
        }
    }
    const NodeId bg_start = static_cast<NodeId>(k * s);
    const int bg_count = n - k * s;

    std::vector<std::pair<NodeId, NodeId>> edges;

    // Near-cliques: drop each internal edge independently with prob eps_holes/2.
    Rng hole_rng = Rng::stream(spec.seed, 0, kTagHoles);
    const double keep = 1.0 - spec.epsilon_holes / 2.0;
    for (int c = 0; c < k; ++c) {
        for (int i = 0; i < s; ++i)
            for (int j = i + 1; j < s; ++j)
                if (hole_rng.bernoulli(keep))
                    edges.emplace_back(part.cliques[c][i], part.cliques[c][j]);
    }

    // Inter-clique edges: per clique node, Poisson-ish count capped at
    // cross_fraction * clique_size, endpoints in other cliques.
    if (k > 1 && spec.cross_mean > 0.0) {
        int cap = spec.cross_fraction > 0.0
                      ? std::max(0, static_cast<int>(spec.cross_fraction * s))
                      : std::numeric_limits<int>::max();
        std::set<std::pair<NodeId, NodeId>> cross;
        for (NodeId v = 0; v < bg_start; ++v) {
            Rng r = Rng::stream(spec.seed, v, kTagCross);
            int cnt = 0;
            // Geometric-ish integer count with the requested mean.
            double expect = spec.cross_mean;
            while (expect > 0 && r.bernoulli(expect / (1.0 + expect))) {
                ++cnt;
                expect -= 1.0;
            }
            cnt = std::min(cnt, cap);
            for (int t = 0; t < cnt; ++t) {
                NodeId u = static_cast<NodeId>(r.uniform(static_cast<uint64_t>(bg_start)));
                if (part.clique_of[u] == part.clique_of[v]) continue;
                cross.insert({std::min(u, v), std::max(u, v)});
            }
        }
        for (auto& e : cross) edges.push_back(e);
    }

    // Sparse background: gnp among the remaining nodes plus a few edges
    // into the cliques so they are not isolated components.
    if (bg_count > 1) {
        double p_bg = std::min(1.0, spec.bg_degree_fraction * s / std::max(1, bg_count - 1));
        Rng bg_rng = Rng::stream(spec.seed, 1, kTagBg);
        sample_pairs(bg_count, p_bg, bg_rng, [&](NodeId a, NodeId b) {
            edges.emplace_back(bg_start + a, bg_start + b);
        });
        std::set<std::pair<NodeId, NodeId>> attach;
        for (NodeId b = bg_start; b < n; ++b) {
            Rng r = Rng::stream(spec.seed, b, kTagBg);
            int cnt = 1 + static_cast<int>(r.uniform(3));
            for (int t = 0; t < cnt && bg_start > 0; ++t) {
                NodeId u = static_cast<NodeId>(r.uniform(static_cast<uint64_t>(bg_start)));
                attach.insert({std::min(u, b), std::max(u, b)});
            }
        }
        for (auto& e : attach) edges.push_back(e);
    }

    return {Graph(n, std::move(edges)), std::move(part)};
}

Graph generate(const GenSpec& spec, PlantedPartition* partition) {
    switch (spec.family) {
        case Family::Clique:
            return gen_clique(spec.n, spec.seed);
        case Family::Gnp:
            return gen_gnp(spec.n, spec.p, spec.seed);
        case Family::PlantedCliques: {
            auto [g, part] = gen_planted(spec);
            if (partition) *partition = std::move(part);
            return std::move(g);
        }
    }
    throw std::invalid_argument("unknown family");
}

GenSpec planted_for_delta(int delta_target, int n, double epsilon_holes, uint64_t seed) {
    GenSpec spec;
    spec.family = Family::PlantedCliques;
    spec.n = n;
    spec.epsilon_holes = epsilon_holes;
    spec.seed = seed;
    // Internal degree of a member is ~ (s-1)(1 - eps_holes/2); aim the mean
    // a little under delta_target so cross edges rarely push past it.
    double keep = 1.0 - epsilon_holes / 2.0;
    spec.clique_size = std::max(2, static_cast<int>(std::lround((delta_target - 2) / keep)) + 1);
    spec.clique_count = std::max(1, static_cast<int>(n * 0.7) / spec.clique_size);
    spec.cross_mean = 2.0;
    spec.cross_fraction = 0.05;
    return spec;
}

} // namespace sparsicolor
