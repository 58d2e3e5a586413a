#include "sparsicolor/oracle.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

#include "sparsicolor/rng.hpp"

namespace sparsicolor {
namespace oracle {

std::string Verdict::str() const {
    std::ostringstream out;
    switch (kind) {
        case VerdictKind::Valid: out << "valid"; break;
        case VerdictKind::Conflict: out << "conflict(" << u << "," << v << ")"; break;
        case VerdictKind::ListViolation: out << "list-violation(" << nodes.front() << ")"; break;
        case VerdictKind::Incomplete: out << "incomplete(" << nodes.size() << ")"; break;
    }
    return out.str();
}

Verdict verify_proper(const Graph& g, const PartialColoring& col) {
    Verdict v;
    for (NodeId a = 0; a < g.n(); ++a) {
        if (!col.colored(a)) continue;
        for (NodeId b : g.neighbors(a)) {
            if (a < b && col.color(b) == col.color(a)) {
                v.kind = VerdictKind::Conflict;
                v.u = a;
                v.v = b;
                return v;
            }
        }
    }
    for (NodeId a = 0; a < g.n(); ++a)
        if (!col.colored(a)) v.nodes.push_back(a);
    if (!v.nodes.empty()) v.kind = VerdictKind::Incomplete;
    return v;
}

Verdict verify_coloring(const Graph& g, const ColorLists& lists, const PartialColoring& col) {
    Verdict v;
    for (NodeId a = 0; a < g.n(); ++a) {
        if (!col.colored(a)) continue;
        for (NodeId b : g.neighbors(a)) {
            if (a < b && col.color(b) == col.color(a)) {
                v.kind = VerdictKind::Conflict;
                v.u = a;
                v.v = b;
                return v;
            }
        }
    }
    for (NodeId a = 0; a < g.n(); ++a) {
        if (col.colored(a) && !lists.has_color(a, col.color(a))) {
            v.kind = VerdictKind::ListViolation;
            v.nodes.push_back(a);
            return v;
        }
    }
    for (NodeId a = 0; a < g.n(); ++a)
        if (!col.colored(a)) v.nodes.push_back(a);
    if (!v.nodes.empty()) v.kind = VerdictKind::Incomplete;
    return v;
}

namespace {
constexpr int kInf = 1 << 30;

struct HK {
    const BipartiteInstance& g;
    std::vector<int> ml, mr, dist;

    explicit HK(const BipartiteInstance& inst)
        : g(inst), ml(inst.n_left, -1), mr(inst.n_right, -1), dist(inst.n_left, kInf) {}

    bool bfs() {
        std::deque<int> q;
        bool found = false;
        for (int v = 0; v < g.n_left; ++v) {
            dist[v] = ml[v] == -1 ? 0 : kInf;
            if (ml[v] == -1) q.push_back(v);
        }
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int c : g.adj[v]) {
                int w = mr[c];
                if (w == -1) {
                    found = true;
                } else if (dist[w] == kInf) {
                    dist[w] = dist[v] + 1;
                    q.push_back(w);
                }
            }
        }
        return found;
    }

    bool dfs(int v) {
        for (int c : g.adj[v]) {
            int w = mr[c];
            if (w == -1 || (dist[w] == dist[v] + 1 && dfs(w))) {
                ml[v] = c;
                mr[c] = v;
                return true;
            }
        }
        dist[v] = kInf;
        return false;
    }
};
} // namespace

MatchResult list_coloring_feasible(const BipartiteInstance& inst) {
    MatchResult r;
    HK hk(inst);
    while (hk.bfs()) {
        for (int v = 0; v < inst.n_left; ++v)
            if (hk.ml[v] == -1 && hk.dfs(v)) ++r.size;
    }
    r.match_left = hk.ml;
    r.match_right = hk.mr;
    r.feasible = r.size == inst.n_left;
    if (!r.feasible) {
        // Hall witness: left nodes reachable from a free left node by
        // alternating paths; their right neighborhood is smaller.
        std::vector<char> seen_l(inst.n_left, 0), seen_r(inst.n_right, 0);
        std::deque<int> q;
        for (int v = 0; v < inst.n_left; ++v)
            if (hk.ml[v] == -1) {
                seen_l[v] = 1;
                q.push_back(v);
            }
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int c : inst.adj[v]) {
                if (seen_r[c]) continue;
                seen_r[c] = 1;
                int w = hk.mr[c];
                if (w != -1 && !seen_l[w]) {
                    seen_l[w] = 1;
                    q.push_back(w);
                }
            }
        }
        for (int v = 0; v < inst.n_left; ++v)
            if (seen_l[v]) r.hall_witness.push_back(v);
    }
    return r;
}

int max_matching_bruteforce(const BipartiteInstance& inst) {
    std::vector<char> used(inst.n_right, 0);
    std::function<int(int)> go = [&](int v) -> int {
        if (v == inst.n_left) return 0;
        int best = go(v + 1); // leave v unmatched
        for (int c : inst.adj[v]) {
            if (used[c]) continue;
            used[c] = 1;
            best = std::max(best, 1 + go(v + 1));
            used[c] = 0;
        }
        return best;
    };
    return go(0);
}

void enumerate_perfect_matchings(const BipartiteInstance& inst,
                                 const std::function<void(const std::vector<int>&)>& cb) {
    std::vector<int> ml(inst.n_left, -1);
    std::vector<char> used(inst.n_right, 0);
    std::function<void(int)> go = [&](int v) {
        if (v == inst.n_left) {
            cb(ml);
            return;
        }
        for (int c : inst.adj[v]) {
            if (used[c]) continue;
            used[c] = 1;
            ml[v] = c;
            go(v + 1);
            ml[v] = -1;
            used[c] = 0;
        }
    };
    go(0);
}

LevelCheckResult level_matching_check(const BipartiteInstance& inst,
                                      const std::vector<int>& match_left, int root_left) {
    LevelCheckResult res;
    const int nl = inst.n_left, nr = inst.n_right;
    std::vector<std::vector<int>> radj(nr);
    for (int v = 0; v < nl; ++v)
        for (int c : inst.adj[v]) radj[c].push_back(v);

    // BFS from the root over the bipartite graph; ids: left v -> v, right c -> nl + c.
    std::vector<int> level(nl + nr, -1);
    std::deque<int> q{root_left};
    level[root_left] = 0;
    int max_level = 0;
    while (!q.empty()) {
        int x = q.front();
        q.pop_front();
        auto relax = [&](int y) {
            if (level[y] == -1) {
                level[y] = level[x] + 1;
                max_level = std::max(max_level, level[y]);
                q.push_back(y);
            }
        };
        if (x < nl)
            for (int c : inst.adj[x]) relax(nl + c);
        else
            for (int v : radj[x - nl]) relax(v);
    }

    // The matching must be perfect on the root's component.
    std::vector<int> match_right(nr, -1);
    for (int v = 0; v < nl; ++v)
        if (match_left[v] != -1) match_right[match_left[v]] = v;
    for (int v = 0; v < nl; ++v)
        if (level[v] != -1 && match_left[v] == -1) {
            res.error = "not-a-perfect-matching";
            return res;
        }
    for (int c = 0; c < nr; ++c)
        if (level[nl + c] != -1 && match_right[c] == -1) {
            res.error = "not-a-perfect-matching";
            return res;
        }

    std::vector<int64_t> sizes(max_level + 1, 0);
    for (int x = 0; x < nl + nr; ++x)
        if (level[x] != -1) sizes[level[x]]++;
    res.m_d.assign(max_level + 1, 0);
    for (int v = 0; v < nl; ++v) {
        if (level[v] == -1 || match_left[v] == -1) continue;
        int lc = level[nl + match_left[v]];
        int d = std::min(level[v], lc);
        if (std::abs(level[v] - lc) != 1) {
            res.error = "matching edge skips a level";
            return res;
        }
        res.m_d[d]++;
    }
    res.s_d.resize(max_level + 1);
    for (int d = 0; d <= max_level; ++d) {
        int64_t s = 0;
        for (int i = 0; i <= d; ++i) s += (i % 2 == 0 ? 1 : -1) * sizes[d - i];
        res.s_d[d] = s;
        if (s != res.m_d[d]) {
            std::ostringstream out;
            out << "level " << d << ": S_d=" << s << " but matching edges=" << res.m_d[d];
            res.error = out.str();
            return res;
        }
    }
    res.ok = true;
    return res;
}

namespace {
// One random small almost-clique configuration for the lemma suite.
struct LemmaConfig {
    int m = 0;     // |C|
    int delta = 0; // max degree of the ambient graph
    std::vector<std::vector<char>> anti; // anti-adjacency within C
    std::vector<int> a;                  // anti-degrees
    std::vector<std::vector<Color>> ext_used;    // colored-external blocks per node
    std::vector<std::vector<char>> ext_sampled;  // L2-sampled blocks per node (per color)
    std::vector<Color> col;                      // partial coloring of C (0 = none)
    std::vector<std::pair<int, int>> matching;   // colorful matching pairs
    double dbar = 0.0;
};

LemmaConfig random_config(Rng& rng, int max_nodes) {
    LemmaConfig cf;
    cf.m = 5 + static_cast<int>(rng.uniform(static_cast<uint64_t>(max_nodes - 4)));
    cf.anti.assign(cf.m, std::vector<char>(cf.m, 0));
    cf.a.assign(cf.m, 0);
    if (rng.bernoulli(0.3)) {
        // Matching-shaped anti-edges: low average anti-degree with every
        // anti-pair matchable, which drives the unpromising-count branch.
        std::vector<int> perm(cf.m);
        for (int i = 0; i < cf.m; ++i) perm[i] = i;
        rng.shuffle(perm);
        int pairs = 1 + static_cast<int>(rng.uniform(static_cast<uint64_t>(cf.m / 2)));
        for (int t = 0; t + 1 < 2 * pairs; t += 2) {
            int i = perm[t], j = perm[t + 1];
            cf.anti[i][j] = cf.anti[j][i] = 1;
            cf.a[i]++;
            cf.a[j]++;
        }
    } else {
        double q = 0.05 + 0.25 * rng.uniform01();
        for (int i = 0; i < cf.m; ++i)
            for (int j = i + 1; j < cf.m; ++j)
                if (rng.bernoulli(q)) {
                    cf.anti[i][j] = cf.anti[j][i] = 1;
                    cf.a[i]++;
                    cf.a[j]++;
                }
    }
    int64_t anti_edges = 0;
    for (int x : cf.a) anti_edges += x;
    cf.dbar = static_cast<double>(anti_edges) / cf.m; // sum a_v / |C|

    int emax = static_cast<int>(rng.uniform(4));
    int dmax = 0;
    std::vector<int> ev(cf.m);
    for (int i = 0; i < cf.m; ++i) {
        ev[i] = static_cast<int>(rng.uniform(static_cast<uint64_t>(emax + 1)));
        dmax = std::max(dmax, cf.m - 1 - cf.a[i] + ev[i]);
    }
    cf.delta = dmax + static_cast<int>(rng.uniform(3));
    const int colors = cf.delta + 1;

    cf.ext_used.assign(cf.m, {});
    cf.ext_sampled.assign(cf.m, std::vector<char>(colors + 1, 0));
    for (int i = 0; i < cf.m; ++i) {
        for (int t = 0; t < ev[i]; ++t)
            cf.ext_used[i].push_back(1 + static_cast<Color>(rng.uniform(colors)));
        int extra = static_cast<int>(rng.uniform(4));
        for (int t = 0; t < extra; ++t)
            cf.ext_sampled[i][1 + rng.uniform(colors)] = 1;
    }

    // Colorful matching: greedy random disjoint anti-pairs, distinct colors.
    cf.col.assign(cf.m, 0);
    std::vector<char> in_pair(cf.m, 0), color_used(colors + 1, 0);
    std::vector<std::pair<int, int>> pool;
    for (int i = 0; i < cf.m; ++i)
        for (int j = i + 1; j < cf.m; ++j)
            if (cf.anti[i][j]) pool.emplace_back(i, j);
    rng.shuffle(pool);
    auto proper_for = [&](int v, Color c) {
        for (int u = 0; u < cf.m; ++u)
            if (u != v && !cf.anti[v][u] && cf.col[u] == c) return false;
        for (Color b : cf.ext_used[v])
            if (b == c) return false;
        return true;
    };
    for (auto& [i, j] : pool) {
        if (in_pair[i] || in_pair[j]) continue;
        for (int tries = 0; tries < 8; ++tries) {
            Color c = 1 + static_cast<Color>(rng.uniform(colors));
            if (color_used[c] || !proper_for(i, c) || !proper_for(j, c)) continue;
            cf.col[i] = cf.col[j] = c;
            color_used[c] = 1;
            in_pair[i] = in_pair[j] = 1;
            cf.matching.emplace_back(i, j);
            break;
        }
    }

    // Color a random subset of the rest, properly.
    for (int i = 0; i < cf.m; ++i) {
        if (in_pair[i] || !rng.bernoulli(0.6)) continue;
        for (int tries = 0; tries < 12; ++tries) {
            Color c = 1 + static_cast<Color>(rng.uniform(colors));
            if (!color_used[c] && proper_for(i, c)) {
                cf.col[i] = c;
                color_used[c] = 1;
                break;
            }
        }
    }
    return cf;
}
} // namespace

LemmaSuiteReport brute_force_lemma_suite(int configs, int max_nodes, int alpha, uint64_t seed) {
    LemmaSuiteReport rep;
    Rng rng = Rng::stream(seed, 0, 0x6c656d6dULL);
    for (int t = 0; t < configs; ++t) {
        LemmaConfig cf = random_config(rng, max_nodes);
        ++rep.configs;
        const int colors = cf.delta + 1;
        const int msize = static_cast<int>(cf.matching.size());

        std::vector<char> used_in_c(colors + 1, 0);
        int uncolored = 0;
        for (int i = 0; i < cf.m; ++i) {
            if (cf.col[i])
                used_in_c[cf.col[i]] = 1;
            else
                ++uncolored;
        }

        // Promising-palette inequality: |Psi_C ∩ Psi_v| >= |uncolored C|.
        for (int v = 0; v < cf.m; ++v) {
            if (cf.a[v] > msize) continue; // unpromising
            ++rep.promising_checked;
            std::vector<char> blocked(colors + 1, 0);
            for (int u = 0; u < cf.m; ++u)
                if (u != v && !cf.anti[v][u] && cf.col[u]) blocked[cf.col[u]] = 1;
            for (Color c : cf.ext_used[v]) blocked[c] = 1;
            int both = 0;
            for (Color c = 1; c <= colors; ++c)
                if (!used_in_c[c] && !blocked[c]) ++both;
            if (both < uncolored) {
                ++rep.promising_failures;
                if (rep.first_failure.empty())
                    rep.first_failure = "promising inequality failed, config " + std::to_string(t);
            }
        }

        // Unpromising-count bound under |M| >= 2*alpha*dbar.
        if (msize >= 2.0 * alpha * cf.dbar && cf.dbar > 0) {
            ++rep.unpromising_checked;
            int unpromising = 0;
            for (int v = 0; v < cf.m; ++v)
                if (cf.a[v] > msize) ++unpromising;
            if (unpromising > cf.delta / alpha) {
                ++rep.unpromising_failures;
                if (rep.first_failure.empty())
                    rep.first_failure = "unpromising bound failed, config " + std::to_string(t);
            }
        }

        // Heavy colors: if avail_D(F) >= dbar*delta^2/6 then >= delta/10
        // heavy colors (avail_c(F) >= dbar*delta/20). Evaluated on the
        // uncolored configuration.
        if (cf.dbar > 0) {
            std::vector<int64_t> avail_c(colors + 1, 0);
            int64_t total = 0;
            for (int i = 0; i < cf.m; ++i)
                for (int j = i + 1; j < cf.m; ++j) {
                    if (!cf.anti[i][j]) continue;
                    for (Color c = 1; c <= colors; ++c) {
                        bool blocked = cf.ext_sampled[i][c] || cf.ext_sampled[j][c];
                        for (Color b : cf.ext_used[i]) blocked |= (b == c);
                        for (Color b : cf.ext_used[j]) blocked |= (b == c);
                        if (!blocked) {
                            ++avail_c[c];
                            ++total;
                        }
                    }
                }
            double bar = cf.dbar * cf.delta * cf.delta / 6.0;
            if (static_cast<double>(total) >= bar) {
                ++rep.heavy_checked;
                int heavy = 0;
                for (Color c = 1; c <= colors; ++c)
                    if (static_cast<double>(avail_c[c]) >= cf.dbar * cf.delta / 20.0) ++heavy;
                if (heavy < cf.delta / 10) {
                    ++rep.heavy_failures;
                    if (rep.first_failure.empty())
                        rep.first_failure = "heavy-color bound failed, config " + std::to_string(t);
                }
            }
        }
    }
    return rep;
}

} // namespace oracle
} // namespace sparsicolor
