#pragma once

#include <vector>

#include "sparsicolor/engine.hpp"
#include "sparsicolor/matching.hpp"

namespace sparsicolor {

// Augmenting forest grown inside one almost-clique: levels[0] holds the
// uncolored roots; every deeper node is colored and its color is adoptable
// by its parent once the whole root-leaf path shifts.
struct AugForest {
    int d = 0;                               // planned depth floor(log_beta(delta/(alpha k)))
    std::vector<std::vector<NodeId>> levels; // U_0 .. U_{d+1}
    std::vector<NodeId> parent;              // n-sized, -1 outside the forest
    std::vector<Color> link_color;           // node's color at growth time
    std::vector<int> level_of;               // n-sized, -1 outside
    int leaf_starved = 0;                    // nodes with fewer than beta children (i < d)
    int64_t colors_sampled = 0;              // growth-step draws below the final level
    int64_t colors_filtered = 0;             // draws rejected by the growth filters

    const std::vector<NodeId>& leaves() const { return levels.back(); }
    std::string dump() const;
};

// Structural check: disjointness, parent levels, and link adoptability by
// replaying the filter conditions against the current coloring.
bool check_forest(const Engine& eng, const CliqueCtx& ctx, const AugForest& f,
                  std::string* why = nullptr);

// Spoiled node: fewer than k/2 clique-palette colors left after removing
// the colors the outside could take this iteration (frozen external colors
// are already outside the palette; uncolored external neighbors block both
// halves of their L3_ell sublists).
std::vector<char> spoiled_nodes(Engine& eng, const CliqueCtx& ctx, int ell, int k);

// Lemma-reduce loop: activation-1/4 color trials through L1 restricted to
// the node's palette intersected with the clique palette, until every
// clique has at most delta/(alpha*beta) uncolored nodes.
struct ReduceResult {
    std::vector<int> uncolored_per_round; // total over treated cliques
    int rounds = 0;
    bool bound_met = true;
};
ReduceResult reduce_uncolored(Engine& eng, const std::vector<CliqueCtx>& cliques);

// One growth of the augmenting forest for iteration ell.
AugForest grow_tree(Engine& eng, const CliqueCtx& ctx, const ColorfulMatching& m, int k,
                    int ell);

// Harvests: recolor augmenting paths bottom-up. Return roots colored.
int harvest_high(Engine& eng, const CliqueCtx& ctx, AugForest& forest, int ell);
int harvest_low(Engine& eng, const CliqueCtx& ctx, AugForest& forest, int ell,
                bool* dissemination_ok = nullptr);

// One full iteration: count k, grow, dispatch by regime. Returns new k.
int aug_iteration(Engine& eng, const CliqueCtx& ctx, const ColorfulMatching& m, int ell);

// Driver: iterate all cliques in lockstep until everyone hits k = 0 or the
// iteration cap. Records the per-clique k trajectory.
struct AugPathResult {
    std::vector<std::vector<int>> k_trajectory; // per clique
    int iterations = 0;
    bool all_colored = false;
};
AugPathResult run_augpath(Engine& eng, std::vector<CliqueCtx>& cliques,
                          const std::vector<ColorfulMatching>& matchings);

} // namespace sparsicolor
