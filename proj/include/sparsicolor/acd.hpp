#pragma once

#include <cstdint>
#include <vector>

#include "sparsicolor/engine.hpp"
#include "sparsicolor/graph.hpp"
#include "sparsicolor/params.hpp"

namespace sparsicolor {

// Partition into sparse nodes and almost-cliques, with per-node external
// and anti-degrees and per-clique average anti-degree.
struct Decomposition {
    std::vector<int> clique_of;                 // -1 = sparse
    std::vector<std::vector<NodeId>> cliques;   // sorted member lists
    std::vector<NodeId> clique_label;           // min popular-node ID per clique
    std::vector<NodeId> v_sparse;
    std::vector<int> e_v;                       // external degree (dense nodes)
    std::vector<int> a_v;                       // anti-degree within own clique
    std::vector<double> dbar;                   // per clique

    bool sparse(NodeId v) const { return clique_of[v] < 0; }
    int clique_count() const { return static_cast<int>(cliques.size()); }

    // Measured Def-2.4-style bounds per clique: max size ratio |C|/delta
    // and min inside-degree ratio; callers assert against their epsilon.
    struct CliqueBounds {
        double max_size_ratio = 0.0;
        double min_inside_ratio = 1.0;
    };
    CliqueBounds measure(const Graph& g) const;

    std::string dump() const; // one line per node: "node clique|S e_v a_v"
};

// Per-node neighborhood sketch used to detect friend edges: r(v) uniform
// in [lambda]; F(v) keeps neighbor values below the keep threshold.
struct SketchState {
    uint64_t lambda = 0;
    uint64_t sigma = 0; // keep values <= sigma
    double delta_eff = 0.0;
    std::vector<uint32_t> r;
    std::vector<std::vector<uint32_t>> f; // sorted value sets
};

SketchState build_sketch(const Graph& g, const Derived& d, uint64_t seed);

// |F(u) ∩ F(v)| >= (1 - 1.5 delta) * Delta * sigma/lambda.
bool detect_friend(const Graph& g, NodeId u, NodeId v, const SketchState& sk);

// v sampled >= (1 - 1.5 delta) * Delta * p friendly edges among its samples.
bool detect_popular(int friendly_sampled, int delta, double sample_rate, double delta_eff,
                    double popularity_scale = 1.0);

// Centralized oracle: exact friendship (shared (1-delta)-fraction of the
// neighborhood at delta = epsilon/12) and popularity, then connected
// components of the popular subgraph over friendly edges, keeping the
// components that contain a (delta/2)-popular node. `epsilon` sets the
// detection slack; the quality of the result is what measure() reports,
// so callers pick the slack their instances need.
Decomposition acd_exact(const Graph& g, double epsilon);

// Distributed variant running under the engine: sketches are computed
// charge-free (streaming), friendship is tested on aux + sparsified edges,
// clique IDs spread by min-label propagation. Engine must already hold the
// aux edges passed here.
Decomposition acd_distributed(Engine& eng, const std::vector<std::vector<NodeId>>& aux,
                              uint64_t seed);

} // namespace sparsicolor
