#include "sparsicolor/acd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sparsicolor/rng.hpp"

namespace sparsicolor {

namespace {
constexpr uint64_t kTagSketch = 0x736b6574ULL;

int sorted_intersection_size(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    size_t i = 0, j = 0;
    int k = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) ++i;
        else if (a[i] > b[j]) ++j;
        else { ++k; ++i; ++j; }
    }
    return k;
}

int shared_neighbors(const Graph& g, NodeId u, NodeId v) {
    const auto& a = g.neighbors(u);
    const auto& b = g.neighbors(v);
    size_t i = 0, j = 0;
    int k = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) ++i;
        else if (a[i] > b[j]) ++j;
        else { ++k; ++i; ++j; }
    }
    return k;
}

// Fills per-node degrees and dbar once the partition is fixed.
void finalize(const Graph& g, Decomposition& d) {
    const int n = g.n();
    d.e_v.assign(n, 0);
    d.a_v.assign(n, 0);
    d.dbar.assign(d.cliques.size(), 0.0);
    for (NodeId v = 0; v < n; ++v) {
        int c = d.clique_of[v];
        if (c < 0) {
            d.v_sparse.push_back(v);
            continue;
        }
        int inside = 0;
        for (NodeId u : g.neighbors(v))
            if (d.clique_of[u] == c) ++inside;
        d.e_v[v] = g.degree(v) - inside;
        d.a_v[v] = static_cast<int>(d.cliques[c].size()) - 1 - inside;
    }
    for (size_t c = 0; c < d.cliques.size(); ++c) {
        int64_t sum = 0;
        for (NodeId v : d.cliques[c]) sum += d.a_v[v];
        d.dbar[c] = d.cliques[c].empty() ? 0.0 : static_cast<double>(sum) / d.cliques[c].size();
    }
}
} // namespace

Decomposition::CliqueBounds Decomposition::measure(const Graph& g) const {
    CliqueBounds b;
    for (auto& c : cliques) {
        b.max_size_ratio = std::max(
            b.max_size_ratio, static_cast<double>(c.size()) / std::max(1, g.delta()));
        for (NodeId v : c) {
            int inside = static_cast<int>(c.size()) - 1 - a_v[v];
            b.min_inside_ratio = std::min(
                b.min_inside_ratio, static_cast<double>(inside) / std::max(1, g.delta()));
        }
    }
    return b;
}

std::string Decomposition::dump() const {
    std::ostringstream out;
    for (size_t v = 0; v < clique_of.size(); ++v) {
        out << v << " ";
        if (clique_of[v] < 0) out << "S";
        else out << clique_label[clique_of[v]];
        out << " " << e_v[v] << " " << a_v[v] << "\n";
    }
    return out.str();
}

SketchState build_sketch(const Graph& g, const Derived& d, uint64_t seed) {
    SketchState sk;
    // The decomposition runs at a third of the configured epsilon; the desk
    // floor keeps detection margins at a few sigma for workstation sizes.
    sk.delta_eff = std::max(d.epsilon / 36.0, 0.2);
    sk.lambda = static_cast<uint64_t>(std::ceil(16.0 * std::max(1, g.delta()) / sk.delta_eff));
    sk.sigma = static_cast<uint64_t>(std::ceil(sk.lambda * d.sketch_keep));
    const int n = g.n();
    sk.r.resize(n);
    for (NodeId v = 0; v < n; ++v)
        sk.r[v] = static_cast<uint32_t>(Rng::stream(seed, v, kTagSketch).uniform(sk.lambda) + 1);
    sk.f.resize(n);
    const int threshold = (g.delta() + 1) / 2;
    for (NodeId v = 0; v < n; ++v) {
        if (g.degree(v) < threshold) continue;
        for (NodeId u : g.neighbors(v))
            if (sk.r[u] <= sk.sigma) sk.f[v].push_back(sk.r[u]);
        std::sort(sk.f[v].begin(), sk.f[v].end());
        sk.f[v].erase(std::unique(sk.f[v].begin(), sk.f[v].end()), sk.f[v].end());
    }
    return sk;
}

bool detect_friend(const Graph& g, NodeId u, NodeId v, const SketchState& sk) {
    double expected = static_cast<double>(g.delta()) * sk.sigma / sk.lambda;
    double threshold = (1.0 - 1.5 * sk.delta_eff) * expected;
    return sorted_intersection_size(sk.f[u], sk.f[v]) >= threshold;
}

bool detect_popular(int friendly_sampled, int delta, double sample_rate, double delta_eff,
                    double popularity_scale) {
    double threshold = (1.0 - 1.5 * delta_eff * popularity_scale) * delta * sample_rate;
    return friendly_sampled >= threshold;
}

Decomposition acd_exact(const Graph& g, double epsilon) {
    const int n = g.n();
    const int delta = g.delta();
    const double de = epsilon / 12.0;
    Decomposition d;
    d.clique_of.assign(n, -1);

    // Exact x-friendship per edge: shared neighborhood >= (1-x)Delta.
    // Popularity thresholds at x in {delta/2, delta, 2*delta}. Counts are
    // integers, so fractional thresholds floor.
    const auto bar = [&](double x) { return std::floor((1.0 - x) * delta); };
    std::vector<std::vector<NodeId>> friends2d(n); // 2*delta-friend adjacency
    std::vector<int> cnt_half(n, 0), cnt_two(n, 0);
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v : g.neighbors(u)) {
            if (v < u) continue;
            int shared = shared_neighbors(g, u, v);
            if (shared >= bar(2.0 * de)) {
                friends2d[u].push_back(v);
                friends2d[v].push_back(u);
                ++cnt_two[u];
                ++cnt_two[v];
            }
            if (shared >= bar(de / 2.0)) {
                ++cnt_half[u];
                ++cnt_half[v];
            }
        }
    }
    std::vector<char> popular2(n, 0), popular_half(n, 0);
    for (NodeId v = 0; v < n; ++v) {
        popular2[v] = cnt_two[v] >= bar(2.0 * de);
        popular_half[v] = cnt_half[v] >= bar(de / 2.0);
    }

    // Components of the popular subgraph over friendly edges; keep the ones
    // holding a (delta/2)-popular node.
    std::vector<int> comp(n, -1);
    int comp_count = 0;
    for (NodeId s = 0; s < n; ++s) {
        if (!popular2[s] || comp[s] != -1) continue;
        std::vector<NodeId> stack{s}, members;
        comp[s] = comp_count;
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            members.push_back(v);
            for (NodeId u : friends2d[v]) {
                if (popular2[u] && comp[u] == -1) {
                    comp[u] = comp_count;
                    stack.push_back(u);
                }
            }
        }
        bool keep = false;
        NodeId label = members.front();
        for (NodeId v : members)
            if (popular_half[v]) {
                keep = true;
                label = std::min(label, v);
                break;
            }
        if (keep) {
            NodeId min_pop = g.n();
            for (NodeId v : members)
                if (popular_half[v]) min_pop = std::min(min_pop, v);
            std::sort(members.begin(), members.end());
            for (NodeId v : members) d.clique_of[v] = static_cast<int>(d.cliques.size());
            d.cliques.push_back(std::move(members));
            d.clique_label.push_back(min_pop);
            ++comp_count;
        } else {
            for (NodeId v : members) comp[v] = -2; // sparse
        }
    }
    finalize(g, d);
    return d;
}

Decomposition acd_distributed(Engine& eng, const std::vector<std::vector<NodeId>>& aux,
                              uint64_t seed) {
    const Graph& g = eng.full();
    const Derived& d = eng.params();
    const int n = g.n();
    const int delta = g.delta();

    // Streaming setup: sketch values and F(v) are charge-free.
    SketchState sk = build_sketch(g, d, seed);

    // Friendship on aux + sparsified edges; F-exchange charged against the
    // bandwidth ledger (values are id-sized, chunked by the engine).
    const int threshold = (delta + 1) / 2;
    std::vector<std::vector<NodeId>> friendly(n);
    int64_t f_bits = 0;
    for (NodeId v = 0; v < n; ++v)
        f_bits = std::max(f_bits, static_cast<int64_t>(sk.f[v].size()) *
                                      Derived::bit_width_of(static_cast<int64_t>(sk.lambda)));
    eng.charge_payload(1, f_bits);
    auto try_edge = [&](NodeId u, NodeId v) {
        if (g.degree(u) < threshold || g.degree(v) < threshold) return;
        if (detect_friend(g, u, v, sk)) {
            friendly[u].push_back(v);
            friendly[v].push_back(u);
        }
    };
    for (NodeId v = 0; v < n; ++v)
        for (NodeId u : aux[v])
            if (u > v) try_edge(v, u);
    for (NodeId v = 0; v < n; ++v)
        for (NodeId u : eng.sparse().neighbors(v))
            if (u > v) try_edge(v, u);
    for (auto& f : friendly) {
        std::sort(f.begin(), f.end());
        f.erase(std::unique(f.begin(), f.end()), f.end());
    }

    // Popularity from the aux sample only (the independent edge sample).
    std::vector<char> popular(n, 0), popular_strong(n, 0);
    for (NodeId v = 0; v < n; ++v) {
        if (g.degree(v) < threshold) continue;
        int cnt = 0;
        for (NodeId u : aux[v])
            if (std::binary_search(friendly[v].begin(), friendly[v].end(), u)) ++cnt;
        popular[v] = detect_popular(cnt, delta, d.es_rate, sk.delta_eff, 2.0);
        popular_strong[v] = detect_popular(cnt, delta, d.es_rate, sk.delta_eff, 0.5);
    }

    // Min-label propagation over friendly edges between popular nodes.
    // Labels start at strongly popular nodes.
    const NodeId none = n;
    std::vector<NodeId> label(n, none), next(n, none);
    for (NodeId v = 0; v < n; ++v)
        if (popular_strong[v]) label[v] = v;
    int cap = 8 * static_cast<int>(std::ceil(log2i(delta))) + 8;
    int used_rounds = 0;
    for (int it = 0; it < cap; ++it) {
        bool changed = false;
        for (NodeId v = 0; v < n; ++v) {
            if (!popular[v]) continue;
            NodeId best = label[v];
            for (NodeId u : friendly[v])
                if (popular[u]) best = std::min(best, label[u]);
            next[v] = best;
            changed |= best != label[v];
        }
        std::swap(label, next);
        ++used_rounds;
        if (!changed) break;
    }
    eng.charge(used_rounds, 8 + d.id_bits());

    Decomposition dec;
    dec.clique_of.assign(n, -1);
    std::vector<std::pair<NodeId, NodeId>> labeled; // (label, node)
    for (NodeId v = 0; v < n; ++v)
        if (popular[v] && label[v] != none) labeled.emplace_back(label[v], v);
    std::sort(labeled.begin(), labeled.end());
    for (size_t i = 0; i < labeled.size();) {
        size_t j = i;
        std::vector<NodeId> members;
        while (j < labeled.size() && labeled[j].first == labeled[i].first)
            members.push_back(labeled[j++].second);
        std::sort(members.begin(), members.end());
        for (NodeId v : members) dec.clique_of[v] = static_cast<int>(dec.cliques.size());
        dec.clique_label.push_back(labeled[i].first);
        dec.cliques.push_back(std::move(members));
        i = j;
    }
    finalize(g, dec);

    // e_v / a_v / dbar by clique-local convergecast over the sparsified
    // clique: two sweeps of a BFS tree of depth O(log Delta).
    eng.charge(2 * static_cast<int64_t>(std::ceil(log2i(delta))) + 2,
               2 * Derived::bit_width_of(n + 1));
    return dec;
}

} // namespace sparsicolor
