#include "sparsicolor/augpath.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace sparsicolor {

namespace {
constexpr uint64_t kSaltLowPush = 0x6c6f7770ULL;

int tree_depth(int delta, int alpha, int beta, int k) {
    double ratio = static_cast<double>(delta) / (static_cast<double>(alpha) * std::max(1, k));
    if (ratio < beta) return 0;
    return static_cast<int>(std::floor(std::log(ratio) / std::log(static_cast<double>(beta))));
}

// Colors an uncolored external sparsified neighbor could take in iteration
// ell: both halves of its L3_ell sublists.
ColorMask l3_external_block(Engine& eng, const CliqueCtx& ctx, NodeId v, int ell) {
    ColorMask blocked(eng.params().delta);
    for (NodeId u : eng.sparse().neighbors(v)) {
        if (ctx.contains(u) || eng.coloring().colored(u)) continue;
        blocked.or_with(eng.lists().sublist_mask(u, SublistId::l3g(ell)));
        blocked.or_with(eng.lists().sublist_mask(u, SublistId::l3h(ell)));
    }
    return blocked;
}

// A colored sparsified external neighbor holding c blocks it permanently.
bool held_by_external(Engine& eng, const CliqueCtx& ctx, NodeId v, Color c) {
    for (NodeId u : eng.sparse().neighbors(v)) {
        if (ctx.contains(u)) continue;
        if (eng.coloring().color(u) == c) return true;
    }
    return false;
}

NodeId root_of(const AugForest& f, NodeId v) {
    while (f.parent[v] >= 0) v = f.parent[v];
    return v;
}

// Shift the path from the leaf's tree root down to the leaf: each node
// adopts its child's recorded color, the leaf adopts c_new.
void recolor_path(Engine& eng, const AugForest& f, NodeId leaf, Color c_new) {
    NodeId v = leaf;
    Color take = c_new;
    while (v >= 0) {
        eng.propose_color(v, take);
        NodeId p = f.parent[v];
        take = f.link_color[v];
        v = p;
    }
}
} // namespace

std::string AugForest::dump() const {
    std::ostringstream out;
    for (size_t lvl = 0; lvl < levels.size(); ++lvl)
        for (NodeId v : levels[lvl])
            out << v << " " << lvl << " " << parent[v] << " " << link_color[v] << "\n";
    return out.str();
}

bool check_forest(const Engine& eng, const CliqueCtx& ctx, const AugForest& f,
                  std::string* why) {
    auto fail = [&](const std::string& s) {
        if (why) *why = s;
        return false;
    };
    std::vector<char> seen(eng.full().n(), 0);
    for (size_t lvl = 0; lvl < f.levels.size(); ++lvl) {
        for (NodeId v : f.levels[lvl]) {
            if (seen[v]++) return fail("node in two positions");
            if (!ctx.contains(v)) return fail("forest node outside clique");
            if (lvl == 0) {
                if (eng.coloring().colored(v)) return fail("colored root");
                continue;
            }
            NodeId p = f.parent[v];
            if (p < 0 || f.level_of[p] != static_cast<int>(lvl) - 1)
                return fail("parent not one level up");
            Color c = f.link_color[v];
            if (eng.coloring().color(v) != c) return fail("link color is not the node's color");
            if (!eng.sparse().has_edge(p, v)) return fail("tree edge not sparsified");
            // Adoptability replay: the parent could take c if v vacated it.
            for (NodeId u : eng.full().neighbors(p))
                if (u != v && eng.coloring().color(u) == c)
                    return fail("link color held by another neighbor of the parent");
        }
    }
    return true;
}

std::vector<char> spoiled_nodes(Engine& eng, const CliqueCtx& ctx, int ell, int k) {
    const Graph& g = eng.full();
    const Derived& d = eng.params();
    ColorMask psi_c = clique_palette(d.delta, ctx.members, eng.coloring());
    std::vector<char> out(ctx.members.size(), 0);
    for (size_t i = 0; i < ctx.members.size(); ++i) {
        NodeId v = ctx.members[i];
        ColorMask blocked(d.delta);
        for (NodeId u : g.neighbors(v)) {
            if (ctx.contains(u)) continue;
            if (!eng.coloring().colored(u)) {
                blocked.or_with(eng.lists().sublist_mask(u, SublistId::l3g(ell)));
                blocked.or_with(eng.lists().sublist_mask(u, SublistId::l3h(ell)));
            }
        }
        ColorMask psi_v = eng.coloring().psi(g, v, d.delta);
        int free_count = 0;
        for (Color c = 1; c <= d.delta + 1; ++c)
            if (psi_c.test(c) && psi_v.test(c) && !blocked.test(c)) ++free_count;
        out[i] = free_count <= k / 2;
    }
    return out;
}

ReduceResult reduce_uncolored(Engine& eng, const std::vector<CliqueCtx>& cliques) {
    const Graph& g = eng.full();
    const Derived& d = eng.params();
    ReduceResult res;
    const int target = std::max(1, static_cast<int>(d.delta / (d.alpha * d.beta)));
    const int t_draws = d.alpha * d.beta;

    eng.charge(2, Derived::bit_width_of(g.n() + 1)); // initial uncolored counts

    std::vector<Color> tried(g.n(), 0);
    for (int round = 0; round < d.reduce_round_cap; ++round) {
        bool any = false;
        int total_uncolored = 0;
        for (const CliqueCtx& ctx : cliques) {
            int k = 0;
            for (NodeId v : ctx.members) k += !eng.coloring().colored(v);
            total_uncolored += k;
            if (k < target || k == 0) continue;
            any = true;
            ColorMask psi_c = clique_palette(d.delta, ctx.members, eng.coloring());
            for (NodeId v : ctx.members) {
                if (eng.coloring().colored(v)) continue;
                Rng rng = eng.rng(v);
                if (!rng.bernoulli(d.trial_activation)) continue;
                ColorMask psi_v = eng.coloring().psi(g, v, d.delta);
                for (int t = 0; t < t_draws; ++t) {
                    auto c = eng.lists().fresh_one(v, SublistId::l1());
                    if (!c) { eng.note_list_exhausted(); break; }
                    if (psi_v.test(*c) && psi_c.test(*c)) { tried[v] = *c; break; }
                }
            }
        }
        res.uncolored_per_round.push_back(total_uncolored);
        if (!any) break;
        // Simultaneous resolution across all cliques, lower ID keeps.
        for (const CliqueCtx& ctx : cliques) {
            for (NodeId v : ctx.members) {
                Color c = tried[v];
                if (c == 0) continue;
                bool keep = true;
                for (NodeId u : g.neighbors(v)) {
                    if (eng.coloring().color(u) == c) { keep = false; break; }
                    if (tried[u] == c && u < v) { keep = false; break; }
                }
                if (keep) eng.propose_color(v, c);
            }
        }
        for (const CliqueCtx& ctx : cliques)
            for (NodeId v : ctx.members) tried[v] = 0;
        eng.charge(2, 8 + d.color_bits());
        ++res.rounds;
    }
    for (const CliqueCtx& ctx : cliques) {
        int k = 0;
        for (NodeId v : ctx.members) k += !eng.coloring().colored(v);
        if (k > target) res.bound_met = false;
    }
    return res;
}

AugForest grow_tree(Engine& eng, const CliqueCtx& ctx, const ColorfulMatching& m, int k,
                    int ell) {
    const Graph& g = eng.full();
    const Derived& d = eng.params();
    AugForest f;
    f.d = tree_depth(d.delta, d.alpha, d.beta, k);
    f.parent.assign(g.n(), -1);
    f.link_color.assign(g.n(), 0);
    f.level_of.assign(g.n(), -1);

    // B_i: colors reserved by the forest plus the colorful matching. A
    // matched color has two holders, so a shift through it would collide.
    ColorMask reserved(d.delta);
    for (auto& [u, v, c] : m.pairs) reserved.set(c);

    std::vector<NodeId> level;
    for (NodeId v : ctx.members)
        if (!eng.coloring().colored(v)) {
            level.push_back(v);
            f.level_of[v] = 0;
        }
    f.levels.push_back(level);

    for (int i = 0; i <= f.d && !level.empty(); ++i) {
        int x;
        if (i < f.d) {
            x = 5 * d.beta;
        } else {
            // Exact |U_d| by in-forest convergecast plus clique aggregation.
            eng.charge(2 * std::max(1, f.d) + 2 * ctx.bfs_depth,
                       Derived::bit_width_of(g.n() + 1));
            x = static_cast<int>(6.0 * d.delta /
                                 (d.alpha * std::max<size_t>(1, level.size())));
            if (x < 1) x = 1;
        }
        // Sample sets S_u, then count level-wide color multiplicity for the
        // uniquely-sampled filter.
        std::vector<std::vector<Color>> samples(level.size());
        std::map<Color, int> multiplicity;
        for (size_t s = 0; s < level.size(); ++s) {
            NodeId u = level[s];
            int want = std::min(x, eng.lists().remaining(u, SublistId::l3g(ell)));
            if (want < x) ++f.leaf_starved;
            samples[s] = eng.lists().fresh(u, SublistId::l3g(ell), want);
            for (Color c : samples[s]) ++multiplicity[c];
        }
        std::vector<NodeId> next_level;
        for (size_t s = 0; s < level.size(); ++s) {
            NodeId u = level[s];
            ColorMask ext_l3 = l3_external_block(eng, ctx, u, ell);
            int children = 0;
            const int want_children = i < f.d ? d.beta : x;
            for (Color c : samples[s]) {
                if (children >= want_children) break;
                if (i < f.d) ++f.colors_sampled;
                auto reject = [&] {
                    if (i < f.d) ++f.colors_filtered;
                };
                if (multiplicity[c] != 1) { reject(); continue; }             // (iii)
                if (reserved.test(c)) { reject(); continue; }                 // (ii)
                if (ext_l3.test(c)) { reject(); continue; }                   // (i) sampled
                if (held_by_external(eng, ctx, u, c)) { reject(); continue; } // (i) used
                // (iv) exactly one sparsified clique neighbor holds c.
                NodeId holder = -1;
                bool unique = true;
                for (NodeId w : ctx.adj[ctx.slot_of[u]]) {
                    if (eng.coloring().color(w) == c) {
                        if (holder >= 0) { unique = false; break; }
                        holder = w;
                    }
                }
                if (!unique || holder < 0) { reject(); continue; }
                if (f.level_of[holder] >= 0) { reject(); continue; } // already in forest
                f.parent[holder] = u;
                f.link_color[holder] = c;
                f.level_of[holder] = i + 1;
                reserved.set(c);
                next_level.push_back(holder);
                ++children;
            }
            if (i < f.d && children < d.beta) ++f.leaf_starved;
        }
        std::sort(next_level.begin(), next_level.end());
        f.levels.push_back(next_level);
        level = std::move(next_level);
        eng.charge_payload(4, static_cast<int64_t>(x) * d.color_bits());
    }
    return f;
}

namespace {
// Leaf trial color admissible for recoloring: free in the whole clique,
// not held by a colored external neighbor, not reachable by an uncolored
// external neighbor through its L3_ell lists.
bool leaf_color_ok(Engine& eng, const CliqueCtx& ctx, const ColorMask& psi_c, NodeId leaf,
                   Color c, int ell) {
    if (!psi_c.test(c)) return false;
    if (held_by_external(eng, ctx, leaf, c)) return false;
    ColorMask blocked = l3_external_block(eng, ctx, leaf, ell);
    return !blocked.test(c);
}
} // namespace

int harvest_high(Engine& eng, const CliqueCtx& ctx, AugForest& forest, int ell) {
    const Derived& d = eng.params();
    ColorMask psi_c = clique_palette(d.delta, ctx.members, eng.coloring());

    // One fresh color per leaf; colors sampled by two different trees are
    // conflict-marked for both.
    std::map<Color, std::vector<NodeId>> by_color;
    for (NodeId leaf : forest.leaves()) {
        auto c = eng.lists().fresh_one(leaf, SublistId::l3h(ell));
        if (!c) { eng.note_list_exhausted(); continue; }
        by_color[*c].push_back(leaf);
    }
    std::map<NodeId, std::pair<NodeId, Color>> winner; // root -> (leaf, color)
    for (auto& [c, leaves] : by_color) {
        NodeId r0 = root_of(forest, leaves.front());
        bool cross_tree = false;
        for (NodeId l : leaves)
            if (root_of(forest, l) != r0) { cross_tree = true; break; }
        if (cross_tree) continue;
        for (NodeId l : leaves) {
            if (!leaf_color_ok(eng, ctx, psi_c, l, c, ell)) continue;
            auto it = winner.find(r0);
            if (it == winner.end() || l < it->second.first) winner[r0] = {l, c};
            break;
        }
    }
    for (auto& [root, lc] : winner) recolor_path(eng, forest, lc.first, lc.second);
    eng.charge(5 + std::max(1, forest.d), 8 + d.color_bits() + d.id_bits());
    return static_cast<int>(winner.size());
}

int harvest_low(Engine& eng, const CliqueCtx& ctx, AugForest& forest, int ell,
                bool* dissemination_ok) {
    const Derived& d = eng.params();
    if (dissemination_ok) *dissemination_ok = true;
    const int k = static_cast<int>(forest.levels.front().size());
    if (k == 0) return 0;
    ColorMask psi_c = clique_palette(d.delta, ctx.members, eng.coloring());

    // Leaves try beta fresh colors; adoptable candidates flow to the root,
    // which keeps the k smallest with their min-ID proposer.
    std::map<NodeId, std::map<Color, NodeId>> root_cand; // root -> color -> leaf
    for (NodeId leaf : forest.leaves()) {
        int want = std::min(d.beta, eng.lists().remaining(leaf, SublistId::l3h(ell)));
        if (want == 0) { eng.note_list_exhausted(); continue; }
        NodeId root = root_of(forest, leaf);
        for (Color c : eng.lists().fresh(leaf, SublistId::l3h(ell), want)) {
            if (!leaf_color_ok(eng, ctx, psi_c, leaf, c, ell)) continue;
            auto& cands = root_cand[root];
            auto it = cands.find(c);
            if (it == cands.end()) cands.emplace(c, leaf);
            else it->second = std::min(it->second, leaf);
        }
    }
    eng.charge_payload(3 + std::max(1, forest.d),
                       static_cast<int64_t>(d.beta) * d.color_bits());

    // Root messages (ID, color), capped at k smallest colors per root.
    std::vector<Message> msgs;
    std::vector<NodeId> sources;
    std::vector<std::tuple<NodeId, Color, NodeId>> entries; // (root, color, leaf)
    for (auto& [root, cands] : root_cand) {
        int kept = 0;
        for (auto& [c, leaf] : cands) {
            if (kept++ >= k) break;
            entries.emplace_back(root, c, leaf);
            msgs.push_back(MsgBuilder(d).tag(2).id(root).color(c).build());
            sources.push_back(root);
        }
    }
    if (!entries.empty()) {
        int rounds = 4 * static_cast<int>(std::ceil(log2i(d.delta)));
        PushResult pr = random_push(eng, ctx, msgs, sources, rounds, kSaltLowPush + ell);
        if (!pr.complete) {
            eng.note_retry();
            pr = random_push(eng, ctx, msgs, sources, rounds, kSaltLowPush + 7919 + ell);
            if (!pr.complete) {
                if (dissemination_ok) *dissemination_ok = false;
                return 0;
            }
        }
    }

    // Identical greedy root-color matching: roots in ID order take their
    // smallest unused candidate color.
    std::sort(entries.begin(), entries.end());
    ColorMask used(d.delta);
    int colored = 0;
    NodeId current = -1;
    bool taken = false;
    for (auto& [root, c, leaf] : entries) {
        if (root != current) { current = root; taken = false; }
        if (taken || used.test(c)) continue;
        used.set(c);
        taken = true;
        recolor_path(eng, forest, leaf, c);
        ++colored;
    }
    eng.charge(1 + std::max(1, forest.d), d.color_bits());
    return colored;
}

int aug_iteration(Engine& eng, const CliqueCtx& ctx, const ColorfulMatching& m, int ell) {
    const Derived& d = eng.params();
    int k = 0;
    for (NodeId v : ctx.members) k += !eng.coloring().colored(v);
    eng.charge(2 * ctx.bfs_depth, Derived::bit_width_of(eng.full().n() + 1));
    if (k == 0) return 0;

    AugForest f = grow_tree(eng, ctx, m, k, ell);
    if (k >= d.beta)
        harvest_high(eng, ctx, f, ell);
    else
        harvest_low(eng, ctx, f, ell);
    int after = 0;
    for (NodeId v : ctx.members) after += !eng.coloring().colored(v);
    return after;
}

AugPathResult run_augpath(Engine& eng, std::vector<CliqueCtx>& cliques,
                          const std::vector<ColorfulMatching>& matchings) {
    const Derived& d = eng.params();
    AugPathResult res;
    res.k_trajectory.resize(cliques.size());
    for (size_t i = 0; i < cliques.size(); ++i) {
        int k = 0;
        for (NodeId v : cliques[i].members) k += !eng.coloring().colored(v);
        res.k_trajectory[i].push_back(k);
    }
    for (int ell = 0; ell < d.aug_iter_cap; ++ell) {
        bool done = true;
        for (auto& t : res.k_trajectory)
            if (t.back() > 0) done = false;
        if (done) break;
        ++res.iterations;
        eng.parallel_begin();
        for (size_t i = 0; i < cliques.size(); ++i) {
            if (res.k_trajectory[i].back() == 0) continue;
            eng.lane_begin();
            int k_after = aug_iteration(eng, cliques[i], matchings[i], ell);
            eng.lane_end();
            res.k_trajectory[i].push_back(k_after);
        }
        eng.parallel_end();
    }
    res.all_colored = true;
    for (auto& t : res.k_trajectory)
        if (t.back() > 0) res.all_colored = false;
    return res;
}

} // namespace sparsicolor
