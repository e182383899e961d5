// Command-line front end: simulate / estimate / bias-decay / cov-tail /
// mc-consistency, each driven by a JSON experiment config. Exit code 0 when
// every verdict passes, 1 when any fails, 2 on configuration errors.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lrdspec/errors.hpp"
#include "lrdspec/experiments.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::string fixtures_path;
    std::string format;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "experiment config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", args.out_dir, "output directory (overrides config)");
    cmd->add_option("--fixtures", args.fixtures_path, "fixture thresholds (JSON)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", args.seed, "seed override")->each([&](const std::string&) {
        args.seed_set = true;
    });
    cmd->add_option("--threads", args.threads, "worker thread count (0 = hardware)");
    cmd->add_option("--format", args.format, "table format: csv | jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
}

int run(const CommonArgs& args, lrdspec::ExperimentConfig::Kind expected) {
    using namespace lrdspec;
    ExperimentConfig cfg = load_experiment_config(args.config_path);
    if (cfg.kind != expected)
        throw ConfigError("config: experiment kind does not match the subcommand");
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    if (args.seed_set) cfg.seed = args.seed;
    if (args.threads > 0) cfg.threads = args.threads;
    if (!args.format.empty())
        cfg.format = args.format == "csv" ? TableFormat::csv : TableFormat::jsonl;
    if (!args.fixtures_path.empty()) apply_fixtures(cfg, args.fixtures_path);

    const auto start = std::chrono::steady_clock::now();
    const RunReport report = run_experiment(cfg);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_report(report, cfg, wall);

    std::cout << report.experiment << ": " << report.table_rows.size() << " table rows, hash "
              << report.config_hash << ", " << wall << " s\n";
    if (report.table_rows.size() <= 12) {
        for (std::size_t c = 0; c < report.table_columns.size(); ++c)
            std::cout << (c ? "  " : "  ") << report.table_columns[c];
        std::cout << '\n';
        for (const auto& row : report.table_rows) {
            for (std::size_t c = 0; c < row.size(); ++c) std::cout << "  " << row[c];
            std::cout << '\n';
        }
    }
    for (const auto& w : report.warnings) std::cout << "  warning: " << w << '\n';
    for (const auto& v : report.verdicts) {
        std::cout << "  " << (v.applicable ? (v.pass ? "PASS" : "FAIL") : "SKIP") << ' '
                  << v.criterion << ": " << v.detail << '\n';
    }
    return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Long-range dependent functional time series: simulation, frequency-domain "
                 "statistics and long-memory estimation"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        lrdspec::ExperimentConfig::Kind kind;
    };
    const Sub subs[] = {
        {"simulate", "draw sample paths and write them to CSV/JSONL",
         lrdspec::ExperimentConfig::Kind::simulate},
        {"estimate", "fit the long-memory parameter from a sample",
         lrdspec::ExperimentConfig::Kind::estimate},
        {"bias-decay", "integrated periodogram bias across sample sizes",
         lrdspec::ExperimentConfig::Kind::bias_decay},
        {"cov-tail", "covariance tail against the heavy-tail asymptote",
         lrdspec::ExperimentConfig::Kind::cov_tail},
        {"mc-consistency", "Monte Carlo consistency of the estimator",
         lrdspec::ExperimentConfig::Kind::mc_consistency},
    };

    CommonArgs args[std::size(subs)];
    for (std::size_t i = 0; i < std::size(subs); ++i)
        add_common(app.add_subcommand(subs[i].name, subs[i].help), args[i]);

    CLI11_PARSE(app, argc, argv);

    try {
        for (std::size_t i = 0; i < std::size(subs); ++i)
            if (app.get_subcommand(subs[i].name)->parsed()) return run(args[i], subs[i].kind);
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const lrdspec::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
