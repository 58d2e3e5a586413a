#include "sparsicolor/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "sparsicolor/oracle.hpp"

namespace sparsicolor {

using nlohmann::json;

std::vector<uint64_t> ExperimentConfig::seeds() const {
    if (!seed_list.empty()) return seed_list;
    std::vector<uint64_t> out;
    for (int i = 0; i < seed_count; ++i) out.push_back(master_seed + i);
    return out;
}

namespace {
Family family_from(const std::string& s) {
    if (s == "clique") return Family::Clique;
    if (s == "gnp") return Family::Gnp;
    if (s == "planted" || s == "planted-cliques") return Family::PlantedCliques;
    throw std::invalid_argument("unknown family: " + s);
}

uint64_t parse_u64(const std::string& v) { return std::stoull(v); }
} // namespace

void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    auto& p = cfg.params;
    if (key == "mode") p.mode = value == "paper" ? Mode::Paper : Mode::Desk;
    else if (key == "n") cfg.gen.n = std::stoi(value);
    else if (key == "generator.family") cfg.gen.family = family_from(value);
    else if (key == "generator.p") cfg.gen.p = std::stod(value);
    else if (key == "generator.delta") cfg.gen_target_delta = std::stoi(value);
    else if (key == "generator.cliques") cfg.gen.clique_count = std::stoi(value);
    else if (key == "generator.clique_size") cfg.gen.clique_size = std::stoi(value);
    else if (key == "generator.holes") cfg.gen.epsilon_holes = std::stod(value);
    else if (key == "generator.cross_mean") cfg.gen.cross_mean = std::stod(value);
    else if (key == "generator.cross_fraction") cfg.gen.cross_fraction = std::stod(value);
    else if (key == "generator.bg_degree_fraction") cfg.gen.bg_degree_fraction = std::stod(value);
    else if (key == "alpha") p.alpha = std::stoi(value);
    else if (key == "epsilon") p.epsilon = std::stod(value);
    else if (key == "beta") p.beta_override = std::stoi(value);
    else if (key == "c_beta") p.c_beta = std::stod(value);
    else if (key == "eta") p.eta = std::stod(value);
    else if (key == "gamma") p.gamma = std::stod(value);
    else if (key == "c1") p.c1 = std::stod(value);
    else if (key == "scale.l2") p.scale_l2 = std::stod(value);
    else if (key == "scale.l2star") p.scale_l2star = std::stod(value);
    else if (key == "scale.l3") p.scale_l3 = std::stod(value);
    else if (key == "matching.k") p.matching_k = std::stoi(value);
    else if (key == "matching.iter_mult") p.matching_iter_mult = std::stoi(value);
    else if (key == "caps.rounds") p.round_cap = std::stoll(value);
    else if (key == "caps.aug_iters") p.aug_iter_cap = std::stoi(value);
    else if (key == "caps.reduce_rounds") p.reduce_round_cap = std::stoi(value);
    else if (key == "caps.multitrial_iters") p.multitrial_iters = std::stoi(value);
    else if (key == "phase") cfg.phase = value;
    else if (key == "seed") cfg.master_seed = parse_u64(value);
    else if (key == "seeds") cfg.seed_count = std::stoi(value);
    else if (key == "seed_list") {
        cfg.seed_list.clear();
        std::istringstream in(value);
        std::string tok;
        while (std::getline(in, tok, ',')) cfg.seed_list.push_back(parse_u64(tok));
    } else if (key == "exact_acd") cfg.exact_acd = value == "1" || value == "true";
    else if (key == "workers") cfg.workers = std::stoi(value);
    else if (key == "out.metrics") cfg.out_metrics = value;
    else if (key == "out.summary") cfg.out_summary = value;
    else if (key == "out.verdicts") cfg.out_verdicts = value;
    else if (key == "out.coloring") cfg.out_coloring = value;
    else if (key == "levelcheck.instances") cfg.levelcheck_instances = std::stoi(value);
    else if (key == "oracle.configs") cfg.oracle_configs = std::stoi(value);
    else throw std::invalid_argument("unknown config key: " + key);
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json j = json::parse(text);
        for (auto& [key, val] : j.items()) {
            std::string s = val.is_string() ? val.get<std::string>() : val.dump();
            apply_override(cfg, key, s);
        }
        return cfg;
    }
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        size_t pos = line.find_first_not_of(" \t");
        if (pos == std::string::npos || line[pos] == '#') continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("bad config line: " + line);
        std::string key = line.substr(pos, eq - pos);
        std::string value = line.substr(eq + 1);
        while (!key.empty() && key.back() == ' ') key.pop_back();
        size_t vs = value.find_first_not_of(" \t");
        value = vs == std::string::npos ? "" : value.substr(vs);
        while (!value.empty() && (value.back() == '\r' || value.back() == ' ')) value.pop_back();
        apply_override(cfg, key, value);
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    ExperimentConfig cfg = parse_config_text(ss.str());
    if (const char* env = std::getenv("SPARSICOLOR_SEED")) cfg.master_seed = parse_u64(env);
    return cfg;
}

namespace {
struct RunRow {
    uint64_t seed = 0;
    PipelineResult result;
    bool hard_failure = false;
    std::string hard_error;
};

Stage stage_from_phase(const std::string& phase) {
    if (phase == "acd") return Stage::Acd;
    if (phase == "precondition") return Stage::Precondition;
    if (phase == "matching") return Stage::Matching;
    if (phase == "augpath" || phase == "full") return Stage::Full;
    throw std::invalid_argument("phase has no pipeline stage: " + phase);
}

ExperimentOutcome run_levelcheck(const ExperimentConfig& cfg) {
    ExperimentOutcome out;
    Rng rng = Rng::stream(cfg.master_seed, 0, 0x6c766c63ULL);
    int pass = 0;
    for (int i = 0; i < cfg.levelcheck_instances; ++i) {
        int nl = 2 + static_cast<int>(rng.uniform(39));
        int nr = nl; // the invariant needs perfect matchings
        oracle::BipartiteInstance inst;
        inst.n_left = nl;
        inst.n_right = nr;
        inst.adj.resize(nl);
        double p = std::min(1.0, (2.0 + rng.uniform01() * 2.0) * std::log(nl + 1) / nl);
        for (int v = 0; v < nl; ++v)
            for (int c = 0; c < nr; ++c)
                if (rng.bernoulli(p)) inst.adj[v].push_back(c);
        auto mr = oracle::list_coloring_feasible(inst);
        if (!mr.feasible) { --i; continue; } // only perfect matchings feed the check
        auto lc = oracle::level_matching_check(inst, mr.match_left, 0);
        ++out.runs;
        if (lc.ok) ++pass;
    }
    out.complete = pass;
    std::ostringstream line;
    line << pass << "/" << out.runs << " pass";
    out.summary_line = line.str();
    out.exit_code = 0;
    std::ofstream v(cfg.out_verdicts);
    v << "levelcheck " << out.summary_line << "\n";
    return out;
}

ExperimentOutcome run_oracle_suite(const ExperimentConfig& cfg) {
    ExperimentOutcome out;
    auto rep = oracle::brute_force_lemma_suite(cfg.oracle_configs, 30, 4, cfg.master_seed);
    out.runs = rep.configs;
    out.complete = rep.ok() ? rep.configs : 0;
    std::ostringstream line;
    line << "oracle-suite configs=" << rep.configs << " promising=" << rep.promising_checked
         << " unpromising=" << rep.unpromising_checked << " heavy=" << rep.heavy_checked
         << (rep.ok() ? " all-pass" : " FAILURES: " + rep.first_failure);
    out.summary_line = line.str();
    out.exit_code = rep.ok() ? 0 : 1;
    std::ofstream v(cfg.out_verdicts);
    v << out.summary_line << "\n";
    return out;
}
} // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
    if (cfg.phase == "levelcheck") return run_levelcheck(cfg);
    if (cfg.phase == "oracle-suite") return run_oracle_suite(cfg);

    ExperimentOutcome out;
    auto seeds = cfg.seeds();
    if (seeds.empty()) {
        std::ofstream(cfg.out_metrics);
        std::ofstream(cfg.out_summary) << "seed,n,delta,total_rounds,uncolored,verdict\n";
        std::ofstream(cfg.out_verdicts);
        return out;
    }

    GenSpec gen = cfg.gen;
    if (cfg.gen.family == Family::PlantedCliques && cfg.gen_target_delta > 0 &&
        cfg.gen.clique_size == 0) {
        gen = planted_for_delta(cfg.gen_target_delta, cfg.gen.n, cfg.gen.epsilon_holes,
                                cfg.gen.seed);
        gen.cross_mean = cfg.gen.cross_mean;
        gen.cross_fraction = cfg.gen.cross_fraction;
    }

    Stage stage = stage_from_phase(cfg.phase);
    PipelineOptions opt;
    opt.stop_after = stage;
    opt.use_exact_acd = cfg.exact_acd;

    std::vector<RunRow> rows(seeds.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= seeds.size()) break;
            RunRow& row = rows[i];
            row.seed = seeds[i];
            GenSpec gs = gen;
            gs.seed = seeds[i];
            try {
                PlantedPartition part;
                Graph g = generate(gs, &part);
                row.result = run_pipeline(g, cfg.params, seeds[i], opt);
            } catch (const SimError& e) {
                row.hard_failure = true;
                row.hard_error = e.what();
            } catch (const std::exception& e) {
                row.hard_failure = true;
                row.hard_error = e.what();
            }
        }
    };
    int workers = std::max(1, cfg.workers);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers - 1; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    // Report assembly, serialized and ordered by seed.
    std::ofstream jm(cfg.out_metrics);
    std::ofstream cs(cfg.out_summary);
    std::ofstream vd(cfg.out_verdicts);
    cs << "seed,n,delta,total_rounds,max_bits_edge,max_distinct_neighbors,uncolored,verdict\n";
    int hard_failures = 0;
    for (auto& row : rows) {
        ++out.runs;
        if (row.hard_failure) {
            ++hard_failures;
            vd << row.seed << " HARD-FAILURE " << row.hard_error << "\n";
            continue;
        }
        const PipelineResult& r = row.result;
        for (auto& ph : r.metrics.phases) {
            json rec = {
                {"run_id", row.seed},
                {"phase", ph.phase},
                {"rounds", ph.rounds},
                {"max_bits_edge", ph.max_bits_edge},
                {"max_distinct_neighbors", ph.max_distinct_neighbors},
                {"uncolored_after", ph.uncolored_after},
                {"status", to_string(ph.status)},
                {"retries", ph.retries},
            };
            jm << rec.dump() << "\n";
        }
        if (!r.verdict.empty()) {
            json rec = {{"run_id", row.seed}, {"phase", "verify"}, {"verdict", r.verdict}};
            jm << rec.dump() << "\n";
        }
        cs << row.seed << "," << r.derived.n << "," << r.derived.delta << ","
           << r.metrics.total_rounds << "," << r.metrics.max_bits_edge << ","
           << r.metrics.max_distinct_neighbors << "," << r.coloring.uncolored_count() << ","
           << r.verdict << "\n";
        vd << row.seed << " " << r.verdict << "\n";
        if (r.complete) ++out.complete;
    }
    if (!cfg.out_coloring.empty() && !rows.empty() && !rows.front().hard_failure) {
        std::ofstream cf(cfg.out_coloring);
        const auto& colors = rows.front().result.coloring.raw();
        cf << "# seed=" << rows.front().seed << "\n";
        for (size_t v = 0; v < colors.size(); ++v) cf << v << " " << colors[v] << "\n";
    }

    // Aggregate row: success fraction plus round quantiles over the runs.
    std::vector<int64_t> rounds;
    for (auto& row : rows)
        if (!row.hard_failure) rounds.push_back(row.result.metrics.total_rounds);
    std::sort(rounds.begin(), rounds.end());
    auto quant = [&](double q) -> int64_t {
        if (rounds.empty()) return 0;
        return rounds[std::min(rounds.size() - 1,
                               static_cast<size_t>(q * (rounds.size() - 1)))];
    };
    std::ostringstream line;
    line << out.complete << "/" << out.runs << " complete, rounds p50=" << quant(0.5)
         << " p90=" << quant(0.9);
    out.summary_line = line.str();
    vd << "summary: " << out.summary_line << "\n";
    out.exit_code = hard_failures == 0 ? 0 : 1;
    return out;
}

} // namespace sparsicolor
