#include "sparsicolor/precondition.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace sparsicolor {

namespace {
constexpr uint64_t kSaltClassify = 0x636c7366ULL;
constexpr uint64_t kSaltSlack = 0x736c636bULL;
constexpr uint64_t kSaltTrial = 0x7472696cULL;

// Keeps a color iff no G-neighbor holds it and every adjacent trier of the
// same color has a larger ID. Tries announced on sparsified edges; a
// conflicting neighbor always shares the color, so the edge is present.
struct TrialRound {
    Engine& eng;
    std::vector<Color> tried;

    explicit TrialRound(Engine& e) : eng(e), tried(e.full().n(), 0) {}

    void resolve_and_commit() {
        const Graph& g = eng.full();
        for (NodeId v = 0; v < g.n(); ++v) {
            Color c = tried[v];
            if (c == 0) continue;
            bool keep = true;
            for (NodeId u : g.neighbors(v)) {
                if (eng.coloring().color(u) == c) { keep = false; break; }
                if (tried[u] == c && u < v) { keep = false; break; }
            }
            if (keep) eng.propose_color(v, c);
        }
        eng.charge(2, 8 + eng.params().color_bits());
    }
};
} // namespace

std::vector<char> classify_external(Engine& eng, const Decomposition& acd, uint64_t seed) {
    const Graph& g = eng.full();
    const Derived& d = eng.params();
    const double p = std::min(1.0, d.eta * d.beta / d.delta);
    std::vector<char> extro(g.n(), 0);
    for (NodeId v = 0; v < g.n(); ++v) {
        if (acd.sparse(v)) continue;
        Rng rng = Rng::stream(seed, v, kSaltClassify);
        int sampled_external = 0;
        for (NodeId u : g.neighbors(v)) {
            if (!rng.bernoulli(p)) continue;
            if (!acd.sparse(u) && acd.clique_of[u] != acd.clique_of[v]) ++sampled_external;
        }
        extro[v] = sampled_external >= 0.75 * d.beta;
    }
    eng.charge(1, 8 + d.id_bits()); // clique-id exchange on sampled edges
    return extro;
}

int generate_slack(Engine& eng, const std::vector<char>& eligible, double activation_p,
                   uint64_t salt) {
    TrialRound round(eng);
    int before = eng.coloring().uncolored_count();
    for (NodeId v = 0; v < eng.full().n(); ++v) {
        if (!eligible[v] || eng.coloring().colored(v)) continue;
        Rng rng = eng.rng(v, salt);
        if (!rng.bernoulli(activation_p)) continue;
        auto c = eng.lists().fresh_one(v, SublistId::l1());
        if (!c) { eng.note_list_exhausted(); continue; }
        round.tried[v] = *c;
    }
    round.resolve_and_commit();
    return before - eng.coloring().uncolored_count();
}

MultiTrialResult multi_trial(Engine& eng, const std::vector<NodeId>& nodes, int s_min,
                             uint64_t salt) {
    const Graph& g = eng.full();
    const Derived& d = eng.params();
    MultiTrialResult res;
    std::vector<NodeId> active;
    for (NodeId v : nodes)
        if (!eng.coloring().colored(v)) active.push_back(v);
    assert(s_min >= 1);
    (void)s_min;
    (void)salt;
#ifndef NDEBUG
    for (NodeId v : active) {
        ColorMask psi = eng.coloring().psi(g, v, d.delta);
        int udeg = 0;
        for (NodeId u : g.neighbors(v)) udeg += !eng.coloring().colored(u);
        if (psi.count() - udeg < s_min)
            throw SimError("multi_trial contract: node " + std::to_string(v) +
                           " has slack below s_min");
    }
#endif

    std::vector<std::vector<Color>> tries(g.n());
    for (int j = 0; j < d.multitrial_iters && !active.empty(); ++j) {
        res.uncolored_per_iter.push_back(static_cast<int>(active.size()));
        const int want = std::min(2 << std::min(j, 20), d.multitrial_cap);
        for (NodeId v : active) {
            tries[v].clear();
            ColorMask psi = eng.coloring().psi(g, v, d.delta);
            int budget = 4 * want;
            while (static_cast<int>(tries[v].size()) < want && budget-- > 0) {
                auto c = eng.lists().fresh_one(v, SublistId::l1());
                if (!c) { eng.note_list_exhausted(); break; }
                if (psi.test(*c)) tries[v].push_back(*c);
            }
        }
        // Keep the first tried color no lower-ID adjacent trier also tried.
        std::vector<NodeId> still;
        for (NodeId v : active) {
            Color keep = 0;
            for (Color c : tries[v]) {
                bool contested = false;
                for (NodeId u : g.neighbors(v)) {
                    if (u < v && !eng.coloring().colored(u) &&
                        std::find(tries[u].begin(), tries[u].end(), c) != tries[u].end()) {
                        contested = true;
                        break;
                    }
                    if (eng.coloring().color(u) == c) { contested = true; break; }
                }
                if (!contested) { keep = c; break; }
            }
            if (keep) {
                eng.propose_color(v, keep);
                ++res.colored;
            } else {
                still.push_back(v);
            }
        }
        eng.charge_payload(2, static_cast<int64_t>(want) * d.color_bits());
        for (NodeId v : active) tries[v].clear();
        active.swap(still);
    }
    res.leftover = std::move(active);
    return res;
}

StrongDecomposition precondition(Engine& eng, const Decomposition& acd, uint64_t seed) {
    const Graph& g = eng.full();
    const Derived& d = eng.params();
    const double eps_prime = d.epsilon / 3.0;

    StrongDecomposition out;
    out.e_max = d.e_max;
    out.node_extrovert = classify_external(eng, acd, seed);

    // Clique classification by aggregated extrovert counts.
    out.clique_extrovert.assign(acd.clique_count(), 0);
    for (int c = 0; c < acd.clique_count(); ++c) {
        int cnt = 0;
        for (NodeId v : acd.cliques[c]) cnt += out.node_extrovert[v];
        out.clique_extrovert[c] = cnt > 2.0 * eps_prime * d.delta;
    }
    eng.charge(2 * static_cast<int64_t>(std::ceil(log2i(d.delta))) + 1,
               Derived::bit_width_of(g.n() + 1));

    // Generate slack: sparse nodes and all members of extroverted cliques.
    std::vector<char> slack_set(g.n(), 0);
    for (NodeId v = 0; v < g.n(); ++v) {
        if (acd.sparse(v)) slack_set[v] = 1;
        else if (out.clique_extrovert[acd.clique_of[v]]) slack_set[v] = 1;
    }
    generate_slack(eng, slack_set, d.slack_activation, kSaltSlack);

    // V' = sparse + extroverted nodes of introvert cliques + introverted
    // nodes of extrovert cliques.
    std::vector<NodeId> vprime;
    for (NodeId v = 0; v < g.n(); ++v) {
        if (eng.coloring().colored(v)) continue;
        if (acd.sparse(v)) { vprime.push_back(v); continue; }
        bool ce = out.clique_extrovert[acd.clique_of[v]];
        bool ne = out.node_extrovert[v];
        if (ce != static_cast<bool>(ne)) vprime.push_back(v);
    }
    multi_trial(eng, vprime, 1, kSaltTrial);

    // Extroverted nodes in extroverted cliques: randomized color trials to
    // shed uncolored degree, then multi-trial on the rest.
    std::vector<NodeId> hard;
    for (NodeId v = 0; v < g.n(); ++v)
        if (!eng.coloring().colored(v) && !acd.sparse(v) && out.node_extrovert[v] &&
            out.clique_extrovert[acd.clique_of[v]])
            hard.push_back(v);
    if (!hard.empty()) {
        int rounds = 2 * static_cast<int>(std::ceil(log2i(d.eta))) + 4;
        for (int r = 0; r < rounds; ++r) {
            TrialRound trial(eng);
            for (NodeId v : hard) {
                if (eng.coloring().colored(v)) continue;
                Rng rng = eng.rng(v, kSaltTrial + 1 + r);
                if (!rng.bernoulli(d.trial_activation)) continue;
                ColorMask psi = eng.coloring().psi(g, v, d.delta);
                for (int t = 0; t < 4; ++t) {
                    auto c = eng.lists().fresh_one(v, SublistId::l1());
                    if (!c) { eng.note_list_exhausted(); break; }
                    if (psi.test(*c)) { trial.tried[v] = *c; break; }
                }
            }
            trial.resolve_and_commit();
        }
        multi_trial(eng, hard, 1, kSaltTrial + 99);
    }

    // Everything colored so far is frozen: later phases never recolor it.
    for (NodeId v = 0; v < g.n(); ++v)
        if (eng.coloring().colored(v)) eng.coloring().freeze(v);

    // Survivors: uncolored members of introverted cliques.
    Decomposition& sd = out.decomp;
    sd.clique_of.assign(g.n(), -1);
    for (int c = 0; c < acd.clique_count(); ++c) {
        if (out.clique_extrovert[c]) continue;
        std::vector<NodeId> members;
        for (NodeId v : acd.cliques[c])
            if (!eng.coloring().colored(v)) members.push_back(v);
        if (members.empty()) continue;
        for (NodeId v : members) sd.clique_of[v] = static_cast<int>(sd.cliques.size());
        sd.clique_label.push_back(acd.clique_label[c]);
        sd.cliques.push_back(std::move(members));
    }
    sd.e_v.assign(g.n(), 0);
    sd.a_v.assign(g.n(), 0);
    sd.dbar.assign(sd.cliques.size(), 0.0);
    out.ext_uncolored.assign(g.n(), 0);
    for (size_t c = 0; c < sd.cliques.size(); ++c) {
        int64_t sum = 0;
        for (NodeId v : sd.cliques[c]) {
            int inside = 0;
            for (NodeId u : g.neighbors(v)) {
                if (sd.clique_of[u] == static_cast<int>(c)) ++inside;
                else if (sd.clique_of[u] >= 0 && !eng.coloring().colored(u))
                    ++out.ext_uncolored[v];
            }
            sd.e_v[v] = g.degree(v) - inside;
            sd.a_v[v] = static_cast<int>(sd.cliques[c].size()) - 1 - inside;
            sum += sd.a_v[v];
        }
        sd.dbar[c] = static_cast<double>(sum) / sd.cliques[c].size();
    }
    for (NodeId v = 0; v < g.n(); ++v) {
        if (!eng.coloring().colored(v) && sd.clique_of[v] < 0) {
            ++out.stranded;
            sd.v_sparse.push_back(v);
        }
    }
    return out;
}

} // namespace sparsicolor
