#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lrdspec/io.hpp"
#include "lrdspec/model_config.hpp"

namespace lrdspec {

/// Parsed experiment description. One JSON file specifies the experiment
/// kind, the model (inline or by file reference), and the run parameters.
struct ExperimentConfig {
    enum class Kind { simulate, estimate, bias_decay, cov_tail, mc_consistency };

    explicit ExperimentConfig(ModelConfig mc) : model_config(std::move(mc)) {}

    Kind kind = Kind::simulate;
    ModelConfig model_config;
    Theta theta0;
    std::vector<long> T_list;
    int replicates = 1;
    std::uint64_t seed = 0;
    std::vector<long> lags;        // cov_tail lag list
    long tail_window_start = 200;  // cov_tail verdict window
    SimMethod sim_method = SimMethod::circulant;
    int embed_factor = 8;
    int ma_truncation = 0;
    std::string input_sample;  // estimate: path to a stored sample
    std::string out_dir = "out";
    TableFormat format = TableFormat::csv;
    int threads = 1;
    std::string config_text;  // canonical source text, hashed into reports

    /// Fixture thresholds with recorded provenance (see configs/fixtures.json).
    double bias_ratio_max = 0.5;
    double estimate_tol_single_run = 0.1;
    double mc_final_median_max = 0.05;
    double cov_tail_rel_tol = 0.10;
};

ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(const std::string& json_text,
                                         const std::string& base_dir = ".");

/// Loads fixture thresholds into cfg from a fixtures JSON file.
void apply_fixtures(ExperimentConfig& cfg, const std::string& fixtures_path);

struct Verdict {
    std::string criterion;
    bool pass = false;
    bool applicable = true;  // false => verdict skipped, reason in detail
    std::string detail;
};

struct RunReport {
    std::string experiment;
    std::string config_hash;
    std::vector<std::string> table_columns;
    std::vector<std::vector<std::string>> table_rows;
    std::vector<Verdict> verdicts;
    std::vector<std::string> warnings;

    bool all_pass() const;
    /// Canonical JSON (no timings; byte-identical for a given config + seed).
    std::string to_json() const;
};

/// Writes report.json, the metrics table, and a timings sidecar (timing data
/// is kept out of report.json so reports stay byte-reproducible).
void write_report(const RunReport& report, const ExperimentConfig& cfg,
                  double wall_seconds);

RunReport run_simulate(const ExperimentConfig& cfg);
RunReport run_estimate(const ExperimentConfig& cfg);
RunReport run_bias_decay(const ExperimentConfig& cfg);
RunReport run_cov_tail(const ExperimentConfig& cfg);
RunReport run_mc_consistency(const ExperimentConfig& cfg);

RunReport run_experiment(const ExperimentConfig& cfg);

}  // namespace lrdspec
