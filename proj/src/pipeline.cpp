#include "sparsicolor/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace sparsicolor {

double per_color_inclusion(const Derived& d) {
    double miss = std::pow(1.0 - 1.0 / (d.delta + 1), d.l1_size);
    miss *= std::pow(1.0 - d.rate_l2, d.l2_sublists);
    miss *= 1.0 - d.rate_l2star;
    miss *= std::pow(1.0 - d.rate_l3, 2.0 * d.l3_sublists);
    return 1.0 - miss;
}

double edge_keep_probability(const Derived& d) {
    double pi = per_color_inclusion(d);
    return 1.0 - std::pow(1.0 - pi * pi, d.delta + 1);
}

namespace {
PhaseStatus run_guarded(Engine& eng, const std::function<void()>& body) {
    try {
        body();
        return PhaseStatus::Ok;
    } catch (const RoundCapExceeded&) {
        return PhaseStatus::RoundCapExceeded;
    } catch (const ListExhausted&) {
        eng.note_list_exhausted();
        return PhaseStatus::ListExhausted;
    }
}
} // namespace

PipelineResult run_pipeline(const Graph& g, const Params& params, uint64_t seed,
                            const PipelineOptions& opt) {
    PipelineResult res;
    res.derived = derive(params, g.n(), std::max(1, g.delta()));
    const Derived& d = res.derived;

    ColorLists lists(g, d, seed);
    Graph sparse = build_sparsified(g, lists);
    res.sparsified_edges = sparse.m();
    res.sparsified_max_degree = sparse.delta();
    auto aux = sample_aux_edges(g, d.es_rate, mix_key(seed, 0x616378ULL));

    res.coloring = PartialColoring(g.n());
    Engine eng(g, sparse, aux, d, lists, res.coloring, seed);

    // --- almost-clique decomposition ---------------------------------------
    eng.begin_phase("acd");
    PhaseStatus st = run_guarded(eng, [&] {
        // The exact oracle is driven at the same detection slack the sketch
        // uses, so the two routes are comparable.
        res.acd = opt.use_exact_acd
                      ? acd_exact(g, 12.0 * std::max(d.epsilon / 36.0, 0.2))
                      : acd_distributed(eng, aux, seed);
    });
    eng.end_phase(st);
    if (opt.stop_after == Stage::Acd) {
        res.metrics = eng.metrics();
        return res;
    }

    // --- preconditioning ----------------------------------------------------
    eng.begin_phase("precondition");
    st = run_guarded(eng, [&] { res.strong = precondition(eng, res.acd, seed); });
    eng.end_phase(st);
    if (opt.stop_after == Stage::Precondition) {
        res.metrics = eng.metrics();
        return res;
    }

    // --- per-clique contexts over survivors ---------------------------------
    std::vector<CliqueCtx> ctxs;
    for (size_t i = 0; i < res.strong.decomp.cliques.size(); ++i)
        ctxs.push_back(build_clique_ctx(eng, res.strong.decomp.cliques[i],
                                        static_cast<int>(i), res.strong.decomp.dbar[i]));
    res.cliques.resize(ctxs.size());
    for (size_t i = 0; i < ctxs.size(); ++i) {
        res.cliques[i].size = static_cast<int>(ctxs[i].members.size());
        res.cliques[i].dbar = ctxs[i].dbar;
    }

    // --- colorful matching ---------------------------------------------------
    std::vector<ColorfulMatching> matchings(ctxs.size());
    eng.begin_phase("matching");
    st = run_guarded(eng, [&] {
        eng.parallel_begin();
        for (size_t i = 0; i < ctxs.size(); ++i) {
            eng.lane_begin();
            matchings[i] = matching_rounds(eng, ctxs[i], d.matching_k);
            eng.lane_end();
        }
        eng.parallel_end();
        // Cliques that fell short of K*beta pairs have dbar < beta: uncolor
        // and rerun with the dissemination variant.
        eng.parallel_begin();
        for (size_t i = 0; i < ctxs.size(); ++i) {
            if (matchings[i].size() >= d.matching_k * d.beta) continue;
            eng.lane_begin();
            for (auto& [u, v, c] : matchings[i].pairs) {
                eng.uncolor(u);
                eng.uncolor(v);
            }
            eng.charge(1, d.color_bits());
            CompactResult cr = matching_compact(eng, ctxs[i], d.matching_k);
            matchings[i] = cr.matching;
            res.cliques[i].compact_used = true;
            res.cliques[i].compact_ok = cr.dissemination_complete;
            eng.lane_end();
        }
        eng.parallel_end();
    });
    for (size_t i = 0; i < ctxs.size(); ++i) {
        res.cliques[i].matching_size = matchings[i].size();
        for (NodeId v : ctxs[i].members)
            if (!promising(res.strong.decomp.a_v[v], matchings[i])) ++res.cliques[i].unpromising;
    }
    eng.end_phase(st);
    if (opt.stop_after == Stage::Matching) {
        res.metrics = eng.metrics();
        return res;
    }

    // --- reduce -------------------------------------------------------------
    eng.begin_phase("reduce");
    st = run_guarded(eng, [&] { res.reduce = reduce_uncolored(eng, ctxs); });
    eng.end_phase(st);
    if (opt.stop_after == Stage::Reduce) {
        res.metrics = eng.metrics();
        return res;
    }

    // --- augmenting paths ----------------------------------------------------
    eng.begin_phase("augpath");
    st = run_guarded(eng, [&] { res.aug = run_augpath(eng, ctxs, matchings); });
    eng.end_phase(st);

    res.metrics = eng.metrics();
    oracle::Verdict v = oracle::verify_coloring(g, lists, res.coloring);
    res.verdict = v.str();
    res.complete = v.kind == oracle::VerdictKind::Valid;
    return res;
}

} // namespace sparsicolor
