#pragma once

#include <memory>
#include <optional>
#include <string>

#include "sparsicolor/acd.hpp"
#include "sparsicolor/augpath.hpp"
#include "sparsicolor/engine.hpp"
#include "sparsicolor/gen.hpp"
#include "sparsicolor/matching.hpp"
#include "sparsicolor/oracle.hpp"
#include "sparsicolor/precondition.hpp"

namespace sparsicolor {

enum class Stage { Acd, Precondition, Matching, Reduce, Full };

struct PipelineOptions {
    Stage stop_after = Stage::Full;
    bool use_exact_acd = false;
};

struct CliqueReport {
    int size = 0;
    double dbar = 0.0;
    int matching_size = 0;
    bool compact_used = false;
    bool compact_ok = true;
    int unpromising = 0;
};

struct PipelineResult {
    Derived derived;
    PartialColoring coloring;
    RunMetrics metrics;
    std::string verdict;
    bool complete = false;        // everyone colored and verdict valid
    bool hard_ok = true;          // no properness/legality violation (else thrown)
    Decomposition acd;
    StrongDecomposition strong;
    std::vector<CliqueReport> cliques;
    ReduceResult reduce;
    AugPathResult aug;
    int64_t sparsified_edges = 0;
    int sparsified_max_degree = 0;
};

// Per-color list inclusion probability and the resulting per-edge keep
// probability of the sparsified graph, from the configured rates alone.
double per_color_inclusion(const Derived& d);
double edge_keep_probability(const Derived& d);

PipelineResult run_pipeline(const Graph& g, const Params& params, uint64_t seed,
                            const PipelineOptions& opt = {});

} // namespace sparsicolor
