#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sparsicolor/experiment.hpp"
#include "sparsicolor/oracle.hpp"

using namespace sparsicolor;

namespace {
PartialColoring read_coloring(const std::string& path, int n) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    PartialColoring col(n);
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        NodeId v;
        Color c;
        if (ls >> v >> c) col.set(v, c);
    }
    return col;
}
} // namespace

int main(int argc, char** argv) {
    CLI::App app{"palette-sparsified distributed coloring simulator"};
    app.require_subcommand(1);

    // --- gen ---------------------------------------------------------------
    auto* gen_cmd = app.add_subcommand("gen", "generate an instance and write an edge list");
    std::string gen_family = "planted", gen_out = "graph.txt";
    int gen_n = 1024, gen_cliques = 0, gen_size = 0, gen_delta = 0;
    double gen_p = 0.1, gen_holes = 0.04;
    uint64_t gen_seed = 1;
    gen_cmd->add_option("--family", gen_family, "clique|gnp|planted");
    gen_cmd->add_option("--n", gen_n);
    gen_cmd->add_option("--p", gen_p, "gnp edge probability");
    gen_cmd->add_option("--cliques", gen_cliques, "planted clique count");
    gen_cmd->add_option("--clique-size", gen_size);
    gen_cmd->add_option("--holes", gen_holes, "planted hole rate");
    gen_cmd->add_option("--delta", gen_delta, "size planted spec for this max degree");
    gen_cmd->add_option("--seed", gen_seed);
    gen_cmd->add_option("--out", gen_out);

    // --- run ----------------------------------------------------------------
    auto* run_cmd = app.add_subcommand("run", "run an experiment from a config file");
    std::string run_config;
    std::vector<std::string> run_sets;
    run_cmd->add_option("--config", run_config, "key=value config file or JSON");
    run_cmd->add_option("--set", run_sets, "override: key=value (repeatable)");
    // Flags mirror the config keys directly: --phase full, --seeds 100, ...
    static const char* kKeys[] = {
        "mode", "n", "generator.family", "generator.p", "generator.delta",
        "generator.cliques", "generator.clique_size", "generator.holes",
        "generator.cross_mean", "generator.cross_fraction", "generator.bg_degree_fraction",
        "alpha", "epsilon", "beta", "c_beta", "eta", "gamma", "c1", "scale.l2",
        "scale.l2star", "scale.l3", "matching.k", "matching.iter_mult", "caps.rounds",
        "caps.aug_iters", "caps.reduce_rounds", "caps.multitrial_iters", "phase", "seed",
        "seeds", "seed_list", "exact_acd", "workers", "out.metrics", "out.summary",
        "out.verdicts", "out.coloring", "levelcheck.instances", "oracle.configs"};
    std::vector<std::pair<std::string, std::string>> run_kv;
    for (const char* key : kKeys) {
        run_cmd->add_option_function<std::string>(
            "--" + std::string(key),
            [key, &run_kv](const std::string& v) { run_kv.emplace_back(key, v); });
    }

    // --- verify ---------------------------------------------------------------
    auto* ver_cmd = app.add_subcommand("verify", "verify a coloring against a graph");
    std::string ver_graph, ver_coloring;
    uint64_t ver_seed = 0;
    ver_cmd->add_option("--graph", ver_graph)->required();
    ver_cmd->add_option("--coloring", ver_coloring)->required();
    ver_cmd->add_option("--seed", ver_seed, "replay list sampling for the list check");

    // --- acd -------------------------------------------------------------------
    auto* acd_cmd = app.add_subcommand("acd", "print the almost-clique decomposition");
    std::string acd_graph;
    double acd_eps = 2.4; // detection slack delta = eps/12; pipeline default
    acd_cmd->add_option("--graph", acd_graph)->required();
    acd_cmd->add_option("--epsilon", acd_eps, "detection slack (delta = eps/12)");

    // --- bench -----------------------------------------------------------------
    auto* bench_cmd = app.add_subcommand("bench", "round scaling across sizes");
    std::vector<int> bench_deltas{64, 128, 256};
    int bench_seeds = 5;
    bench_cmd->add_option("--delta", bench_deltas, "target max degrees");
    bench_cmd->add_option("--seeds", bench_seeds);

    // --- levelcheck ---------------------------------------------------------------
    auto* lvl_cmd = app.add_subcommand("levelcheck", "level-set matching invariant suite");
    int lvl_instances = 1000;
    uint64_t lvl_seed = 1;
    lvl_cmd->add_option("--instances", lvl_instances);
    lvl_cmd->add_option("--seed", lvl_seed);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen_cmd) {
            GenSpec spec;
            spec.n = gen_n;
            spec.seed = gen_seed;
            if (gen_family == "clique") spec.family = Family::Clique;
            else if (gen_family == "gnp") { spec.family = Family::Gnp; spec.p = gen_p; }
            else if (gen_family == "planted") {
                if (gen_delta > 0 && gen_size == 0) {
                    spec = planted_for_delta(gen_delta, gen_n, gen_holes, gen_seed);
                } else {
                    spec.family = Family::PlantedCliques;
                    spec.clique_count = gen_cliques > 0 ? gen_cliques : 2;
                    spec.clique_size = gen_size > 0 ? gen_size : gen_n / 4;
                    spec.epsilon_holes = gen_holes;
                }
            } else throw std::runtime_error("unknown family " + gen_family);
            Graph g = generate(spec);
            write_edge_list(g, gen_out);
            auto st = graph_stats(g);
            std::cout << "n=" << st.n << " m=" << st.m << " delta=" << st.delta << " -> "
                      << gen_out << "\n";
            return 0;
        }
        if (*run_cmd) {
            ExperimentConfig cfg =
                run_config.empty() ? ExperimentConfig{} : load_config(run_config);
            for (auto& [key, value] : run_kv) apply_override(cfg, key, value);
            for (auto& kv : run_sets) {
                size_t eq = kv.find('=');
                if (eq == std::string::npos) throw std::runtime_error("--set needs key=value");
                apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
            }
            if (const char* env = std::getenv("SPARSICOLOR_SEED"))
                cfg.master_seed = std::stoull(env);
            auto out = run_experiment(cfg);
            std::cout << cfg.phase << ": " << out.summary_line << "\n";
            return out.exit_code;
        }
        if (*ver_cmd) {
            Graph g = read_edge_list(ver_graph);
            PartialColoring col = read_coloring(ver_coloring, g.n());
            if (ver_seed != 0) {
                Params p;
                Derived d = derive(p, g.n(), std::max(1, g.delta()));
                ColorLists lists(g, d, ver_seed);
                auto v = oracle::verify_coloring(g, lists, col);
                std::cout << v.str() << "\n";
                return v.kind == oracle::VerdictKind::Valid ? 0 : 1;
            }
            auto v = oracle::verify_proper(g, col);
            std::cout << v.str() << "\n";
            return v.kind == oracle::VerdictKind::Valid ? 0 : 1;
        }
        if (*acd_cmd) {
            Graph g = read_edge_list(acd_graph);
            Decomposition dec = acd_exact(g, acd_eps);
            std::cout << dec.dump();
            return 0;
        }
        if (*bench_cmd) {
            std::cout << "delta,seed,total_rounds,rounds_over_log2sq,complete\n";
            for (int delta : bench_deltas) {
                for (int s = 0; s < bench_seeds; ++s) {
                    GenSpec spec = planted_for_delta(delta, 4 * delta, 0.04, s + 1);
                    Graph g = generate(spec);
                    Params p;
                    auto r = run_pipeline(g, p, s + 1);
                    double lg = std::log2(std::max(2, g.delta()));
                    std::cout << g.delta() << "," << s + 1 << "," << r.metrics.total_rounds
                              << "," << r.metrics.total_rounds / (lg * lg) << ","
                              << (r.complete ? 1 : 0) << "\n";
                }
            }
            return 0;
        }
        if (*lvl_cmd) {
            ExperimentConfig cfg;
            cfg.phase = "levelcheck";
            cfg.levelcheck_instances = lvl_instances;
            cfg.master_seed = lvl_seed;
            cfg.out_verdicts = "levelcheck_verdicts.txt";
            auto out = run_experiment(cfg);
            std::cout << out.summary_line << "\n";
            return out.complete == out.runs ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
