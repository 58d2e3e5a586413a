#include "sparsicolor/matching.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

namespace sparsicolor {

namespace {
constexpr uint64_t kSaltPush = 0x70757368ULL;
} // namespace

CliqueCtx build_clique_ctx(const Engine& eng, const std::vector<NodeId>& members, int index,
                           double dbar) {
    CliqueCtx ctx;
    ctx.index = index;
    ctx.members = members;
    ctx.dbar = dbar;
    ctx.slot_of.assign(eng.full().n(), -1);
    for (size_t i = 0; i < members.size(); ++i) ctx.slot_of[members[i]] = static_cast<int>(i);
    ctx.adj.resize(members.size());
    for (size_t i = 0; i < members.size(); ++i)
        for (NodeId u : eng.sparse().neighbors(members[i]))
            if (ctx.slot_of[u] >= 0) ctx.adj[i].push_back(u);

    // BFS depth over the sparsified clique, from the min-ID member.
    std::vector<int> dist(members.size(), -1);
    std::deque<int> q;
    dist[0] = 0;
    q.push_back(0);
    int depth = 0;
    while (!q.empty()) {
        int s = q.front();
        q.pop_front();
        depth = std::max(depth, dist[s]);
        for (NodeId u : ctx.adj[s]) {
            int t = ctx.slot_of[u];
            if (dist[t] == -1) {
                dist[t] = dist[s] + 1;
                q.push_back(t);
            }
        }
    }
    ctx.bfs_depth = std::max(1, depth);
    return ctx;
}

std::vector<std::pair<NodeId, NodeId>> anti_edges(const Graph& g,
                                                  const std::vector<NodeId>& members) {
    std::vector<std::pair<NodeId, NodeId>> out;
    for (size_t i = 0; i < members.size(); ++i)
        for (size_t j = i + 1; j < members.size(); ++j)
            if (!g.has_edge(members[i], members[j])) out.emplace_back(members[i], members[j]);
    return out;
}

bool check_colorful_matching(const Graph& g, const std::vector<NodeId>& members,
                             const ColorfulMatching& m, const PartialColoring& col,
                             std::string* why) {
    auto fail = [&](const std::string& s) {
        if (why) *why = s;
        return false;
    };
    std::vector<char> seen_node(g.n(), 0);
    std::map<Color, int> seen_color;
    for (auto& [u, v, c] : m.pairs) {
        if (g.has_edge(u, v)) return fail("matched pair is a real edge");
        if (std::find(members.begin(), members.end(), u) == members.end() ||
            std::find(members.begin(), members.end(), v) == members.end())
            return fail("pair endpoint outside clique");
        if (col.color(u) != c || col.color(v) != c) return fail("endpoints not colored alike");
        if (seen_node[u]++ || seen_node[v]++) return fail("node in two pairs");
        if (seen_color[c]++) return fail("color reused by two pairs");
        for (NodeId w : g.neighbors(u))
            if (w != v && col.color(w) == c) return fail("pair color conflicts at endpoint");
        for (NodeId w : g.neighbors(v))
            if (w != u && col.color(w) == c) return fail("pair color conflicts at endpoint");
    }
    return true;
}

AvailResult avail(const Graph& g, const std::vector<NodeId>& members,
                  const std::vector<std::pair<NodeId, NodeId>>& f,
                  const std::vector<Color>& d_colors, const PartialColoring& col,
                  ColorLists& lists, double dbar) {
    const int delta = g.delta();
    AvailResult res;
    res.per_color.assign(delta + 2, 0);

    std::vector<char> in_c(g.n(), 0);
    for (NodeId v : members) in_c[v] = 1;
    std::vector<ColorMask> blocked(members.size(), ColorMask(delta));
    std::vector<int> slot(g.n(), -1);
    for (size_t i = 0; i < members.size(); ++i) slot[members[i]] = static_cast<int>(i);
    for (size_t i = 0; i < members.size(); ++i) {
        NodeId v = members[i];
        for (NodeId u : g.neighbors(v)) {
            if (in_c[u]) continue;
            if (col.colored(u))
                blocked[i].set(col.color(u));
            else
                blocked[i].or_with(lists.l2_mask(u));
        }
    }
    std::vector<Color> colors = d_colors;
    if (colors.empty())
        for (Color c = 1; c <= delta + 1; ++c) colors.push_back(c);
    for (auto& [u, v] : f) {
        const ColorMask& bu = blocked[slot[u]];
        const ColorMask& bv = blocked[slot[v]];
        for (Color c : colors) {
            if (!bu.test(c) && !bv.test(c)) {
                ++res.per_color[c];
                ++res.total;
            }
        }
    }
    double heavy_bar = dbar * delta / 20.0;
    for (Color c = 1; c <= delta + 1; ++c)
        if (static_cast<double>(res.per_color[c]) >= heavy_bar && res.per_color[c] > 0)
            res.heavy.push_back(c);
    return res;
}

ColorfulMatching matching_rounds(Engine& eng, const CliqueCtx& ctx, int k_target) {
    const Derived& d = eng.params();
    ColorfulMatching m;
    ColorMask m_colors(d.delta);
    const int target = static_cast<int>(std::ceil(static_cast<double>(k_target) *
                                                  std::max(1.0, ctx.dbar)));
    // A clique whose pair production dries up this long is in the small
    // anti-degree regime; the dissemination variant takes over after the
    // size count.
    const int stagnation_window = std::max(96, d.matching_iters / 6);
    int last_add = 0;
    for (int iter = 0; iter < d.matching_iters; ++iter) {
        // Step 1-2: sample L2_iter; active iff exactly one color drawn.
        std::vector<std::pair<Color, NodeId>> active; // (color, node)
        for (NodeId v : ctx.members) {
            if (eng.coloring().colored(v)) continue;
            const auto& lst = eng.lists().members(v, SublistId::l2(iter));
            if (lst.size() != 1) continue;
            Color c = lst[0];
            // Step 3: drop on conflicts with externals and matched colors.
            // External blocks: colors held by colored sparsified neighbors
            // outside C, or sampled by uncolored ones this iteration.
            if (m_colors.test(c)) continue;
            bool blocked = false;
            for (NodeId u : eng.sparse().neighbors(v)) {
                if (ctx.contains(u)) continue;
                if (eng.coloring().colored(u) ? eng.coloring().color(u) == c
                                              : eng.lists().sublist_mask(u, SublistId::l2(iter))
                                                    .test(c)) {
                    blocked = true;
                    break;
                }
            }
            if (blocked) continue;
            active.emplace_back(c, v);
        }
        std::sort(active.begin(), active.end());
        // Step 4: a color is kept by its smallest anti-pair, if any.
        for (size_t i = 0; i < active.size();) {
            size_t j = i;
            while (j < active.size() && active[j].first == active[i].first) ++j;
            Color c = active[i].first;
            std::pair<NodeId, NodeId> best{-1, -1};
            for (size_t a = i; a < j && best.first < 0; ++a)
                for (size_t b = a + 1; b < j; ++b)
                    if (!eng.full().has_edge(active[a].second, active[b].second)) {
                        best = {active[a].second, active[b].second};
                        break;
                    }
            if (best.first >= 0) {
                m.pairs.emplace_back(best.first, best.second, c);
                m_colors.set(c);
                eng.propose_color(best.first, c);
                eng.propose_color(best.second, c);
                last_add = iter;
            }
            i = j;
        }
        // Announce + two-hop resolution; the relay round of iteration i
        // shares the wire with the announce of iteration i+1.
        eng.charge(2, 8 + d.color_bits() + d.id_bits());
        if ((iter & 7) == 7) {
            // Periodic matching-size count on the clique BFS tree.
            eng.charge(2 * ctx.bfs_depth, Derived::bit_width_of(eng.full().n() + 1));
            if (m.size() >= target) break;
            if (iter - last_add >= stagnation_window && m.size() < k_target * d.beta) break;
        }
    }
    return m;
}

CompactResult matching_compact(Engine& eng, const CliqueCtx& ctx, int k_target) {
    const Derived& d = eng.params();
    const Graph& g = eng.full();
    CompactResult out;

    // S_v: L2* colors surviving external conflicts (held or sampled).
    std::vector<std::vector<Color>> s(ctx.members.size());
    for (size_t i = 0; i < ctx.members.size(); ++i) {
        NodeId v = ctx.members[i];
        ColorMask blocked(d.delta);
        for (NodeId u : eng.sparse().neighbors(v)) {
            if (ctx.contains(u)) continue;
            if (eng.coloring().colored(u))
                blocked.set(eng.coloring().color(u));
            else
                blocked.or_with(eng.lists().sublist_mask(u, SublistId::l2star()));
        }
        for (Color c : eng.lists().members(v, SublistId::l2star()))
            if (!blocked.test(c)) s[i].push_back(c);
        std::sort(s[i].begin(), s[i].end());
    }
    // Broadcast of L2* contents within color groups.
    eng.charge_payload(2, static_cast<int64_t>(d.rate_l2star * (d.delta + 1) + 1) *
                              d.color_bits());

    // S'_v via per-color two-hop groups: colors shared with an anti-neighbor.
    std::map<Color, std::vector<NodeId>> holders;
    for (size_t i = 0; i < ctx.members.size(); ++i)
        for (Color c : s[i]) holders[c].push_back(ctx.members[i]);
    eng.charge(4, 8 + d.color_bits() + d.id_bits());

    // Candidate anti-edges (uv, c), grouped per color.
    std::map<Color, std::vector<std::pair<NodeId, NodeId>>> cand;
    int64_t cand_total = 0;
    for (auto& [c, hs] : holders) {
        for (size_t a = 0; a < hs.size(); ++a)
            for (size_t b = a + 1; b < hs.size(); ++b)
                if (!g.has_edge(hs[a], hs[b])) {
                    cand[c].emplace_back(hs[a], hs[b]);
                    ++cand_total;
                }
    }
    out.candidate_count = static_cast<int>(cand_total);
    // Candidate count aggregation to per-color leaders, then the root.
    eng.charge(2 * ctx.bfs_depth, Derived::bit_width_of(g.n() + 1));

    // Color selection: everything if under U, else the smallest prefix of
    // leader-ordered colors holding at least U candidates (cap 8 beta^3).
    const double u_bound = 4.0 * d.gamma * d.gamma * k_target * std::max(1.0, ctx.dbar) *
                           d.beta * d.beta;
    std::vector<std::tuple<NodeId, Color, const std::vector<std::pair<NodeId, NodeId>>*>> order;
    for (auto& [c, list] : cand) order.emplace_back(holders[c].front(), c, &list);
    std::sort(order.begin(), order.end(),
              [](auto& a, auto& b) {
                  return std::tie(std::get<0>(a), std::get<1>(a)) <
                         std::tie(std::get<0>(b), std::get<1>(b));
              });
    std::vector<std::tuple<NodeId, NodeId, Color>> selected;
    if (cand_total <= u_bound) {
        for (auto& [lead, c, list] : order)
            for (auto& [u, v] : *list) selected.emplace_back(u, v, c);
    } else {
        int64_t got = 0;
        for (auto& [lead, c, list] : order) {
            if (got >= u_bound || static_cast<int>(selected.size()) >= d.compact_cap) break;
            for (auto& [u, v] : *list) selected.emplace_back(u, v, c);
            got += static_cast<int64_t>(list->size());
            ++out.selected_colors;
        }
        eng.charge(4 * ctx.bfs_depth, Derived::bit_width_of(g.n() + 1)); // subtree selection
    }
    if (static_cast<int>(selected.size()) > d.compact_cap)
        selected.resize(d.compact_cap);

    // Disseminate candidate triples with RandomPush; retry once on failure.
    std::vector<Message> msgs;
    std::vector<NodeId> sources;
    for (auto& [u, v, c] : selected) {
        msgs.push_back(MsgBuilder(d).tag(1).id(u).id(v).color(c).build());
        sources.push_back(u);
    }
    int push_rounds = 4 * static_cast<int>(std::ceil(log2i(d.delta)));
    bool complete = msgs.empty();
    for (int attempt = 0; attempt < 2 && !complete; ++attempt) {
        if (attempt > 0) eng.note_retry();
        PushResult pr = random_push(eng, ctx, msgs, sources, push_rounds, kSaltPush + attempt);
        complete = pr.complete;
    }
    out.dissemination_complete = complete;
    if (!complete && !msgs.empty()) return out; // recorded by the caller

    // Identical greedy matching everywhere: scan by (color, pair id).
    std::sort(selected.begin(), selected.end(),
              [](auto& a, auto& b) {
                  return std::tie(std::get<2>(a), std::get<0>(a), std::get<1>(a)) <
                         std::tie(std::get<2>(b), std::get<0>(b), std::get<1>(b));
              });
    ColorMask used_color(d.delta);
    std::vector<char> used_node(g.n(), 0);
    for (auto& [u, v, c] : selected) {
        if (used_color.test(c) || used_node[u] || used_node[v]) continue;
        used_color.set(c);
        used_node[u] = used_node[v] = 1;
        out.matching.pairs.emplace_back(u, v, c);
        eng.propose_color(u, c);
        eng.propose_color(v, c);
    }
    eng.charge(1, d.color_bits());
    return out;
}

ColorMask clique_palette(int delta, const std::vector<NodeId>& members,
                         const PartialColoring& col) {
    ColorMask used(delta);
    for (NodeId v : members)
        if (col.colored(v)) used.set(col.color(v));
    ColorMask out(delta);
    for (Color c = 1; c <= delta + 1; ++c)
        if (!used.test(c)) out.set(c);
    return out;
}

bool promising(int a_v, const ColorfulMatching& m) { return a_v <= m.size(); }

PushResult random_push(Engine& eng, const CliqueCtx& ctx, const std::vector<Message>& msgs,
                       const std::vector<NodeId>& sources, int rounds, uint64_t salt) {
    PushResult res;
    const size_t x = msgs.size();
    res.knows.assign(ctx.members.size(), std::vector<char>(x, 0));
    std::vector<std::vector<int>> known(ctx.members.size()); // message indexes
    for (size_t i = 0; i < x; ++i) {
        int slot = ctx.slot_of[sources[i]];
        res.knows[slot][i] = 1;
        known[slot].push_back(static_cast<int>(i));
    }
    auto all_known = [&]() {
        for (auto& k : known)
            if (k.size() < x) return false;
        return true;
    };
    if (x == 0 || all_known()) {
        res.complete = true;
        return res;
    }
    for (int r = 0; r < rounds; ++r) {
        for (size_t i = 0; i < ctx.members.size(); ++i) {
            if (known[i].empty()) continue;
            NodeId v = ctx.members[i];
            Rng rng = eng.rng(v, salt);
            for (NodeId u : ctx.adj[i]) {
                int pick = known[i][rng.uniform(known[i].size())];
                Message m = msgs[pick];
                m.payload = static_cast<uint64_t>(pick); // index stands in for content
                eng.send(v, u, m);
            }
        }
        eng.advance_round();
        ++res.rounds_used;
        for (size_t i = 0; i < ctx.members.size(); ++i) {
            for (const Message& m : eng.inbox(ctx.members[i])) {
                int idx = static_cast<int>(m.payload);
                if (!res.knows[i][idx]) {
                    res.knows[i][idx] = 1;
                    known[i].push_back(idx);
                }
            }
        }
        if (all_known()) {
            res.complete = true;
            return res;
        }
    }
    res.complete = all_known();
    return res;
}

} // namespace sparsicolor
