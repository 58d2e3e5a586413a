#pragma once

#include <tuple>
#include <vector>

#include "sparsicolor/engine.hpp"
#include "sparsicolor/precondition.hpp"

namespace sparsicolor {

// Per-clique context shared by the matching / reduce / augmenting phases:
// member list, sparsified-clique adjacency and a BFS depth used to charge
// clique-local aggregation.
struct CliqueCtx {
    int index = 0;
    std::vector<NodeId> members; // sorted
    double dbar = 0.0;
    int bfs_depth = 1;
    std::vector<std::vector<NodeId>> adj; // sparsified adjacency within C, per member slot
    std::vector<int> slot_of;             // n-sized, -1 outside

    bool contains(NodeId v) const { return slot_of[v] >= 0; }
};

CliqueCtx build_clique_ctx(const Engine& eng, const std::vector<NodeId>& members, int index,
                           double dbar);

// Anti-edges of the clique: non-adjacent member pairs (u < v), over G.
std::vector<std::pair<NodeId, NodeId>> anti_edges(const Graph& g,
                                                  const std::vector<NodeId>& members);

struct ColorfulMatching {
    std::vector<std::tuple<NodeId, NodeId, Color>> pairs; // u < v share the color
    int size() const { return static_cast<int>(pairs.size()); }
    bool uses_color(Color c) const {
        for (auto& [u, v, pc] : pairs)
            if (pc == c) return true;
        return false;
    }
};

// Scan-checkable invariants of Def 5.2 plus non-conflict with the current
// coloring of external neighbors.
bool check_colorful_matching(const Graph& g, const std::vector<NodeId>& members,
                             const ColorfulMatching& m, const PartialColoring& col,
                             std::string* why = nullptr);

// Exact availability of anti-edges: avail_c(e) = 1 iff c is unused by
// colored external neighbors of either endpoint and not L2-sampled by any
// uncolored external neighbor. Heavy colors have avail_c(F) >= dbar*delta/20.
struct AvailResult {
    int64_t total = 0;
    std::vector<int64_t> per_color; // index c, 1..delta+1
    std::vector<Color> heavy;
};
AvailResult avail(const Graph& g, const std::vector<NodeId>& members,
                  const std::vector<std::pair<NodeId, NodeId>>& f,
                  const std::vector<Color>& d_colors, const PartialColoring& col,
                  ColorLists& lists, double dbar);

// Round-based sampler (for dbar >= beta): per iteration every uncolored
// member samples L2_i; exactly-one-color nodes survive the conflict
// filters; monochromatic anti-pairs enter the matching, smallest pair
// first. Stops early once `target` pairs are matched.
ColorfulMatching matching_rounds(Engine& eng, const CliqueCtx& ctx, int k_target);

// Dissemination-based variant (for dbar < beta): L2* sampling, candidate
// discovery via per-color two-hop groups, RandomPush of candidate triples,
// identical greedy matching everywhere. May retry dissemination once.
struct CompactResult {
    ColorfulMatching matching;
    bool dissemination_complete = true;
    int candidate_count = 0;
    int selected_colors = 0;
};
CompactResult matching_compact(Engine& eng, const CliqueCtx& ctx, int k_target);

// Clique palette: colors unused by members of C.
ColorMask clique_palette(int delta, const std::vector<NodeId>& members,
                         const PartialColoring& col);
// Promising node: anti-degree at most the matching size.
bool promising(int a_v, const ColorfulMatching& m);

// RandomPush: every informed node forwards one uniformly chosen known
// message along each incident sparsified-clique edge, per round. Returns
// who knows what.
struct PushResult {
    std::vector<std::vector<char>> knows; // [member slot][message]
    int rounds_used = 0;
    bool complete = false;
};
PushResult random_push(Engine& eng, const CliqueCtx& ctx, const std::vector<Message>& msgs,
                       const std::vector<NodeId>& sources, int rounds, uint64_t salt);

} // namespace sparsicolor
