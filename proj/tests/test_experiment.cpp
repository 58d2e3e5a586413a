#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "sparsicolor/experiment.hpp"

using namespace sparsicolor;

namespace {
std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

ExperimentConfig small_config(const std::string& tag) {
    ExperimentConfig cfg = parse_config_text(
        "generator.family=planted\n"
        "n=256\n"
        "generator.delta=64\n"
        "generator.holes=0.04\n"
        "phase=full\n"
        "seeds=3\n"
        "seed=77\n");
    cfg.out_metrics = "/tmp/sc_" + tag + "_metrics.jsonl";
    cfg.out_summary = "/tmp/sc_" + tag + "_summary.csv";
    cfg.out_verdicts = "/tmp/sc_" + tag + "_verdicts.txt";
    return cfg;
}
} // namespace

TEST_CASE("config parsing: flat keys and json") {
    ExperimentConfig flat = parse_config_text("alpha=6\nepsilon=0.02\nseeds=5\nphase=acd\n");
    CHECK(flat.params.alpha == 6);
    CHECK(flat.params.epsilon == doctest::Approx(0.02));
    CHECK(flat.seed_count == 5);
    CHECK(flat.phase == "acd");

    ExperimentConfig js = parse_config_text(R"({"alpha": "6", "seeds": 5, "phase": "acd"})");
    CHECK(js.params.alpha == 6);
    CHECK(js.seed_count == 5);

    CHECK_THROWS(parse_config_text("nonsense_key=1\n"));
}

TEST_CASE("zero seeds: empty report, exit 0") {
    ExperimentConfig cfg = small_config("zero");
    cfg.seed_count = 0;
    auto out = run_experiment(cfg);
    CHECK(out.exit_code == 0);
    CHECK(out.runs == 0);
    CHECK(slurp(cfg.out_metrics).empty());
}

TEST_CASE("experiment writes one metrics row per (run, phase)") {
    ExperimentConfig cfg = small_config("rows");
    auto out = run_experiment(cfg);
    CHECK(out.exit_code == 0);
    CHECK(out.runs == 3);
    std::istringstream in(slurp(cfg.out_metrics));
    std::string line;
    int rows = 0, verdict_rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++rows;
        if (line.find("\"verify\"") != std::string::npos) ++verdict_rows;
    }
    CHECK(rows == 3 * 6); // acd, precondition, matching, reduce, augpath, verify
    CHECK(verdict_rows == 3);
    std::string summary = slurp(cfg.out_summary);
    CHECK(summary.find("seed,n,delta") == 0);
}

TEST_CASE("experiment reruns are byte-identical") {
    ExperimentConfig a = small_config("det_a");
    ExperimentConfig b = small_config("det_b");
    run_experiment(a);
    run_experiment(b);
    CHECK(slurp(a.out_metrics) == slurp(b.out_metrics));
    CHECK(slurp(a.out_summary) == slurp(b.out_summary));
    CHECK(slurp(a.out_verdicts) == slurp(b.out_verdicts));
}

TEST_CASE("levelcheck phase reports all-pass") {
    ExperimentConfig cfg;
    cfg.phase = "levelcheck";
    cfg.levelcheck_instances = 200;
    cfg.master_seed = 5;
    cfg.out_verdicts = "/tmp/sc_lvl_verdicts.txt";
    auto out = run_experiment(cfg);
    CHECK(out.runs == 200);
    CHECK(out.complete == 200);
    CHECK(out.summary_line == "200/200 pass");
}

TEST_CASE("oracle-suite phase") {
    ExperimentConfig cfg;
    cfg.phase = "oracle-suite";
    cfg.oracle_configs = 500;
    cfg.master_seed = 5;
    cfg.out_verdicts = "/tmp/sc_orc_verdicts.txt";
    auto out = run_experiment(cfg);
    CHECK(out.exit_code == 0);
}
