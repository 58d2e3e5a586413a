#pragma once

#include <map>
#include <string>
#include <vector>

#include "sparsicolor/gen.hpp"
#include "sparsicolor/pipeline.hpp"

namespace sparsicolor {

// Experiment driver configuration. Flat key=value text (diff-friendly) or a
// JSON object with the same keys; CLI flags mirror the keys.
struct ExperimentConfig {
    GenSpec gen;
    int gen_target_delta = 0; // nonzero: size the planted spec for this delta
    Params params;
    std::string phase = "full"; // full|acd|precondition|matching|augpath|levelcheck|oracle-suite
    uint64_t master_seed = 1;
    int seed_count = 1;
    std::vector<uint64_t> seed_list; // wins over seed_count when nonempty
    bool exact_acd = false;
    int workers = 2;
    std::string out_metrics = "metrics.jsonl";
    std::string out_summary = "summary.csv";
    std::string out_verdicts = "verdicts.txt";
    std::string out_coloring;  // when set: "node color" lines, first seed
    int levelcheck_instances = 1000;
    int oracle_configs = 10000;

    std::vector<uint64_t> seeds() const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);
void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value);

struct ExperimentOutcome {
    int exit_code = 0;
    int runs = 0;
    int complete = 0;
    std::string summary_line;
};

// Executes the configured phase across seeds (parallel worker pool, report
// assembly serialized) and writes metrics.jsonl / summary.csv / verdicts.txt.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg);

} // namespace sparsicolor
