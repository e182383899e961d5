#include "lrdspec/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "lrdspec/errors.hpp"
#include "lrdspec/estimation.hpp"
#include "lrdspec/parallel.hpp"
#include "lrdspec/rng.hpp"

namespace lrdspec {

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<long> long_list(const json& v, const std::string& name) {
    std::vector<long> out;
    if (v.is_number()) {
        out.push_back(v.get<long>());
        return out;
    }
    if (!v.is_array()) throw ConfigError("config: field '" + name + "' must be a number or array");
    for (const auto& e : v) out.push_back(e.get<long>());
    return out;
}

std::string effective_hash(const ExperimentConfig& cfg) {
    return text_hash(cfg.config_text + "\nseed=" + std::to_string(cfg.seed));
}

double quantile(std::vector<double> sorted, double q) {
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double pos = q * (sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - lo;
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

bool near_boundary(const Theta& theta, const ThetaDomain& box, double tol = 1e-9) {
    for (std::size_t i = 0; i < theta.size(); ++i)
        if (std::abs(theta[i] - box.lower[i]) < tol || std::abs(theta[i] - box.upper[i]) < tol)
            return true;
    return false;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text,
                                         const std::string& base_dir) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    ModelConfig mc = [&] {
        if (j.contains("model")) return parse_model_config(j["model"].dump());
        if (j.contains("model_file"))
            return load_model_config(base_dir + "/" + j["model_file"].get<std::string>());
        throw ConfigError("config: missing required field 'model' (or 'model_file')");
    }();
    ExperimentConfig cfg(std::move(mc));
    cfg.config_text = json_text;

    const auto kind_it = j.find("experiment");
    if (kind_it == j.end()) throw ConfigError("config: missing required field 'experiment'");
    const std::string kind = kind_it->get<std::string>();
    if (kind == "simulate")
        cfg.kind = ExperimentConfig::Kind::simulate;
    else if (kind == "estimate")
        cfg.kind = ExperimentConfig::Kind::estimate;
    else if (kind == "bias_decay")
        cfg.kind = ExperimentConfig::Kind::bias_decay;
    else if (kind == "cov_tail")
        cfg.kind = ExperimentConfig::Kind::cov_tail;
    else if (kind == "mc_consistency")
        cfg.kind = ExperimentConfig::Kind::mc_consistency;
    else
        throw ConfigError("config: unknown experiment '" + kind + "'");

    if (j.contains("theta0")) cfg.theta0 = j["theta0"].get<std::vector<double>>();
    if (j.contains("T")) {
        cfg.T_list = long_list(j["T"], "T");
        for (long T : cfg.T_list)
            if (T < 8) throw ConfigError("config: every T must be >= 8");
    }
    cfg.replicates = j.value("replicates", 1);
    if (cfg.replicates < 1) throw ConfigError("config: replicates must be >= 1");
    cfg.seed = j.value("seed", 0ull);
    if (j.contains("lags")) cfg.lags = long_list(j["lags"], "lags");
    cfg.tail_window_start = j.value("tail_window_start", cfg.tail_window_start);
    if (j.contains("sim")) {
        const json& s = j["sim"];
        const std::string method = s.value("method", std::string("circulant"));
        if (method == "circulant")
            cfg.sim_method = SimMethod::circulant;
        else if (method == "ma_truncation")
            cfg.sim_method = SimMethod::ma_truncation;
        else
            throw ConfigError("config: sim.method must be 'circulant' or 'ma_truncation'");
        cfg.embed_factor = s.value("embed_factor", cfg.embed_factor);
        cfg.ma_truncation = s.value("J", cfg.ma_truncation);
    }
    cfg.input_sample = j.value("input", std::string());
    cfg.out_dir = j.value("out", cfg.out_dir);
    const std::string format = j.value("format", std::string("csv"));
    if (format == "csv")
        cfg.format = TableFormat::csv;
    else if (format == "jsonl")
        cfg.format = TableFormat::jsonl;
    else
        throw ConfigError("config: format must be 'csv' or 'jsonl'");
    cfg.threads = j.value("threads", 0);
    if (cfg.threads <= 0) cfg.threads = default_threads();
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    const auto slash = path.find_last_of('/');
    const std::string base = slash == std::string::npos ? "." : path.substr(0, slash);
    return parse_experiment_config(slurp(path), base);
}

void apply_fixtures(ExperimentConfig& cfg, const std::string& fixtures_path) {
    const json j = json::parse(slurp(fixtures_path));
    if (j.contains("bias_decay"))
        cfg.bias_ratio_max = j["bias_decay"].value("ratio_max", cfg.bias_ratio_max);
    if (j.contains("estimate"))
        cfg.estimate_tol_single_run =
            j["estimate"].value("single_run_tol", cfg.estimate_tol_single_run);
    if (j.contains("mc_consistency"))
        cfg.mc_final_median_max =
            j["mc_consistency"].value("final_median_max", cfg.mc_final_median_max);
    if (j.contains("cov_tail"))
        cfg.cov_tail_rel_tol = j["cov_tail"].value("rel_tol", cfg.cov_tail_rel_tol);
}

bool RunReport::all_pass() const {
    for (const auto& v : verdicts)
        if (v.applicable && !v.pass) return false;
    return true;
}

std::string RunReport::to_json() const {
    json j;
    j["experiment"] = experiment;
    j["config_hash"] = config_hash;
    j["table"]["columns"] = table_columns;
    j["table"]["rows"] = table_rows;
    json verdicts_j = json::array();
    for (const auto& v : verdicts) {
        json vj;
        vj["criterion"] = v.criterion;
        vj["pass"] = v.pass;
        vj["applicable"] = v.applicable;
        vj["detail"] = v.detail;
        verdicts_j.push_back(vj);
    }
    j["verdicts"] = verdicts_j;
    j["warnings"] = warnings;
    return j.dump(2);
}

void write_report(const RunReport& report, const ExperimentConfig& cfg, double wall_seconds) {
    ensure_directory(cfg.out_dir);
    const std::string report_path = cfg.out_dir + "/report.json";

    // Refuse to mix outputs from different configurations in one directory.
    if (std::ifstream existing(report_path); existing) {
        try {
            const json prev = json::parse(existing);
            if (prev.contains("config_hash") &&
                prev["config_hash"].get<std::string>() != report.config_hash)
                throw ConfigError("output directory '" + cfg.out_dir +
                                  "' holds results for a different configuration (hash " +
                                  prev["config_hash"].get<std::string>() + "); refusing");
        } catch (const json::parse_error&) {
            throw ConfigError("output directory '" + cfg.out_dir +
                              "' holds an unreadable report.json; refusing");
        }
    }

    {
        std::ofstream out(report_path, std::ios::binary);
        out << report.to_json() << '\n';
    }
    const bool csv = cfg.format == TableFormat::csv;
    {
        std::ofstream out(cfg.out_dir + (csv ? "/metrics.csv" : "/metrics.jsonl"),
                          std::ios::binary);
        if (csv) {
            for (std::size_t c = 0; c < report.table_columns.size(); ++c)
                out << report.table_columns[c]
                    << (c + 1 < report.table_columns.size() ? "," : "\n");
            for (const auto& row : report.table_rows)
                for (std::size_t c = 0; c < row.size(); ++c)
                    out << row[c] << (c + 1 < row.size() ? "," : "\n");
        } else {
            for (const auto& row : report.table_rows) {
                json rj;
                for (std::size_t c = 0; c < row.size(); ++c) rj[report.table_columns[c]] = row[c];
                out << rj.dump() << '\n';
            }
        }
    }
    {
        // Timings stay out of report.json so reports are byte-reproducible.
        json t;
        t["wall_seconds"] = wall_seconds;
        std::ofstream out(cfg.out_dir + "/timings.json", std::ios::binary);
        out << t.dump(2) << '\n';
    }
}

namespace {

void require_theta0(const ExperimentConfig& cfg) {
    if (cfg.theta0.empty()) throw ConfigError("config: missing required field 'theta0'");
    if (!cfg.model_config.model.theta_domain.contains(cfg.theta0))
        throw ConfigError("config: theta0 outside the model's theta domain");
}

SamplePath simulate_with(const ExperimentConfig& cfg, long T, std::uint64_t seed, int threads) {
    SimConfig sim;
    sim.method = cfg.sim_method;
    sim.seed = seed;
    sim.embed_factor = cfg.embed_factor;
    sim.J = cfg.ma_truncation;
    sim.threads = threads;
    return cfg.sim_method == SimMethod::circulant
               ? simulate_gaussian(cfg.model_config.model, cfg.theta0, T, sim)
               : simulate_ma(cfg.model_config.model, cfg.theta0, T, sim);
}

}  // namespace

RunReport run_simulate(const ExperimentConfig& cfg) {
    require_theta0(cfg);
    if (cfg.T_list.empty()) throw ConfigError("config: missing required field 'T'");
    RunReport report;
    report.experiment = "simulate";
    report.config_hash = effective_hash(cfg);
    report.table_columns = {"T", "L", "method", "seed", "file"};
    ensure_directory(cfg.out_dir);
    for (long T : cfg.T_list) {
        const SamplePath path = simulate_with(cfg, T, cfg.seed, cfg.threads);
        const std::string file = cfg.out_dir + "/sample_T" + std::to_string(T) +
                                 (cfg.format == TableFormat::csv ? ".csv" : ".jsonl");
        write_sample_path(file, path, cfg.format);
        report.table_rows.push_back({std::to_string(T), std::to_string(path.basis.L),
                                     path.meta.method, std::to_string(cfg.seed), file});
    }
    return report;
}

RunReport run_estimate(const ExperimentConfig& cfg) {
    RunReport report;
    report.experiment = "estimate";
    report.config_hash = effective_hash(cfg);

    SamplePath sample = [&]() -> SamplePath {
        if (!cfg.input_sample.empty()) return read_sample_path(cfg.input_sample);
        require_theta0(cfg);
        if (cfg.T_list.size() != 1)
            throw ConfigError("config: estimate without 'input' needs exactly one T");
        return simulate_with(cfg, cfg.T_list[0], cfg.seed, cfg.threads);
    }();
    if (!same_basis(sample.basis, cfg.model_config.model.basis))
        throw ConfigError("estimate: sample basis size does not match the model");

    const PeriodogramSet pset = periodogram(fdft(sample));
    OptimizerConfig opt;
    opt.threads = cfg.threads;
    const EstimateResult est = estimate_theta(pset, cfg.model_config.model,
                                              cfg.model_config.weight, opt,
                                              cfg.model_config.estimation_kernel);

    ensure_directory(cfg.out_dir);
    json out;
    out["config_hash"] = report.config_hash;
    out["seed"] = sample.meta.seed;
    out["theta_hat"] = est.theta_hat;
    out["objective"] = est.objective;
    out["contrast_at_theta_hat"] =
        std::vector<double>(est.contrast_at_theta_hat.values.begin(),
                            est.contrast_at_theta_hat.values.end());
    json trace = json::array();
    for (const auto& [theta, value] : est.trace) trace.push_back({{"theta", theta}, {"value", value}});
    out["trace"] = trace;
    {
        std::ofstream f(cfg.out_dir + "/estimate.json", std::ios::binary);
        f << out.dump(2) << '\n';
    }

    report.table_columns = {"component", "theta_hat", "objective", "contrast"};
    for (int k = 0; k < est.contrast_at_theta_hat.values.size(); ++k) {
        std::string theta_s;
        for (std::size_t i = 0; i < est.theta_hat.size(); ++i)
            theta_s += (i ? ";" : "") + format_double(est.theta_hat[i]);
        report.table_rows.push_back({std::to_string(k + 1), theta_s,
                                     format_double(est.objective),
                                     format_double(est.contrast_at_theta_hat.values[k])});
    }
    if (!sample.meta.theta_true.empty()) {
        double err = 0.0;
        for (std::size_t i = 0; i < est.theta_hat.size(); ++i) {
            const double d = est.theta_hat[i] - sample.meta.theta_true[i];
            err += d * d;
        }
        err = std::sqrt(err);
        Verdict v;
        v.criterion = "estimate.single_run_error";
        v.pass = err < cfg.estimate_tol_single_run;
        v.detail = "|theta_hat - theta_true| = " + format_double(err) + " vs " +
                   format_double(cfg.estimate_tol_single_run);
        report.verdicts.push_back(v);
    }
    return report;
}

RunReport run_bias_decay(const ExperimentConfig& cfg) {
    require_theta0(cfg);
    if (cfg.T_list.empty()) throw ConfigError("config: missing required field 'T'");
    if (!std::is_sorted(cfg.T_list.begin(), cfg.T_list.end()))
        throw ConfigError("config: bias_decay needs an ascending T list");
    RunReport report;
    report.experiment = "bias_decay";
    report.config_hash = effective_hash(cfg);
    report.table_columns = {"T", "integrated_bias"};

    std::vector<double> bias(cfg.T_list.size());
    for (std::size_t i = 0; i < cfg.T_list.size(); ++i) {
        bias[i] = integrated_bias(cfg.model_config.model, cfg.theta0, cfg.T_list[i],
                                  cfg.model_config.model.quad, cfg.threads);
        report.table_rows.push_back({std::to_string(cfg.T_list[i]), format_double(bias[i])});
    }

    const double max_bias = *std::max_element(bias.begin(), bias.end());
    Verdict mono;
    mono.criterion = "bias_decay.monotone";
    if (bias.size() < 2) {
        mono.applicable = false;
        mono.detail = "insufficient points";
    } else if (max_bias < 1e-8) {
        mono.pass = true;
        mono.detail = "all biases below 1e-8";
    } else {
        mono.pass = true;
        for (std::size_t i = 1; i < bias.size(); ++i)
            if (!(bias[i] < bias[i - 1])) mono.pass = false;
        mono.detail = mono.pass ? "strictly decreasing" : "not strictly decreasing";
    }
    report.verdicts.push_back(mono);

    Verdict ratio;
    ratio.criterion = "bias_decay.ratio";
    if (bias.size() < 2) {
        ratio.applicable = false;
        ratio.detail = "insufficient points";
    } else if (max_bias < 1e-8) {
        ratio.pass = true;
        ratio.detail = "all biases below 1e-8";
    } else {
        const double r = bias.back() / bias.front();
        ratio.pass = r < cfg.bias_ratio_max;
        ratio.detail = "final/initial = " + format_double(r) + " vs " +
                       format_double(cfg.bias_ratio_max);
    }
    report.verdicts.push_back(ratio);
    return report;
}

RunReport run_cov_tail(const ExperimentConfig& cfg) {
    require_theta0(cfg);
    if (cfg.lags.empty()) throw ConfigError("config: missing required field 'lags'");
    if (*std::max_element(cfg.lags.begin(), cfg.lags.end()) < 200)
        throw ConfigError("config: cov_tail needs a lag list reaching t >= 200");
    RunReport report;
    report.experiment = "cov_tail";
    report.config_hash = effective_hash(cfg);
    report.table_columns = {"l", "t", "covariance", "asymptote", "ratio"};

    const SpectralModel& model = cfg.model_config.model;
    bool all_ok = true;
    double worst = 0.0;
    for (int l = 1; l <= model.basis.L; ++l) {
        for (long t : cfg.lags) {
            const double r = covariance_symbol(model, t, l, cfg.theta0, model.quad);
            const double asy = lrd_asymptote(model, t, l, cfg.theta0);
            const double ratio = r / asy;
            const double rel = std::abs(r - asy) / std::max(std::abs(asy), 1e-12);
            report.table_rows.push_back({std::to_string(l), std::to_string(t), format_double(r),
                                         format_double(asy), format_double(ratio)});
            if (t >= cfg.tail_window_start) {
                worst = std::max(worst, rel);
                if (rel >= cfg.cov_tail_rel_tol) all_ok = false;
            }
        }
    }
    Verdict v;
    v.criterion = "cov_tail.ratio";
    v.pass = all_ok;
    v.detail = "max |ratio - 1| over the tail window = " + format_double(worst) + " vs " +
               format_double(cfg.cov_tail_rel_tol);
    report.verdicts.push_back(v);
    return report;
}

RunReport run_mc_consistency(const ExperimentConfig& cfg) {
    require_theta0(cfg);
    if (cfg.T_list.empty()) throw ConfigError("config: missing required field 'T'");
    RunReport report;
    report.experiment = "mc_consistency";
    report.config_hash = effective_hash(cfg);
    report.table_columns = {"T", "replicate", "theta_hat", "abs_error", "status"};

    const SpectralModel& model = cfg.model_config.model;
    if (near_boundary(cfg.theta0, model.theta_domain))
        report.warnings.push_back("theta0 lies on the domain boundary; the argmin may clip");

    const int R = cfg.replicates;
    struct Cell {
        Theta theta_hat;
        double err = std::numeric_limits<double>::quiet_NaN();
        std::string status = "ok";
    };
    std::vector<std::vector<Cell>> cells(cfg.T_list.size(), std::vector<Cell>(R));

    // Outer parallelism over (T, replicate); everything inside runs
    // single-threaded so slot writes keep results order-independent.
    const long n_runs = static_cast<long>(cfg.T_list.size()) * R;
    parallel_for(n_runs, cfg.threads, [&](long run) {
        const std::size_t ti = run / R;
        const int rep = static_cast<int>(run % R);
        Cell& cell = cells[ti][rep];
        try {
            ExperimentConfig one = cfg;
            one.threads = 1;
            const std::uint64_t rep_seed =
                CounterRng::replicate_seed(cfg.seed, static_cast<std::uint64_t>(rep));
            const SamplePath sample = simulate_with(one, cfg.T_list[ti], rep_seed, 1);
            const PeriodogramSet pset = periodogram(fdft(sample));
            OptimizerConfig opt;
            opt.threads = 1;
            const EstimateResult est =
                estimate_theta(pset, model, cfg.model_config.weight, opt,
                               cfg.model_config.estimation_kernel);
            cell.theta_hat = est.theta_hat;
            double err = 0.0;
            for (std::size_t i = 0; i < est.theta_hat.size(); ++i) {
                const double d = est.theta_hat[i] - cfg.theta0[i];
                err += d * d;
            }
            cell.err = std::sqrt(err);
        } catch (const std::exception& e) {
            cell.status = e.what();
        }
    });

    long failures = 0;
    std::vector<double> medians(cfg.T_list.size()), iqr_lo(cfg.T_list.size()),
        iqr_hi(cfg.T_list.size());
    for (std::size_t ti = 0; ti < cfg.T_list.size(); ++ti) {
        std::vector<double> errs;
        for (int rep = 0; rep < R; ++rep) {
            const Cell& cell = cells[ti][rep];
            std::string theta_s;
            for (std::size_t i = 0; i < cell.theta_hat.size(); ++i)
                theta_s += (i ? ";" : "") + format_double(cell.theta_hat[i]);
            report.table_rows.push_back({std::to_string(cfg.T_list[ti]), std::to_string(rep),
                                         theta_s,
                                         std::isnan(cell.err) ? "" : format_double(cell.err),
                                         cell.status});
            if (cell.status == "ok")
                errs.push_back(cell.err);
            else
                ++failures;
        }
        std::sort(errs.begin(), errs.end());
        medians[ti] = quantile(errs, 0.5);
        iqr_lo[ti] = quantile(errs, 0.25);
        iqr_hi[ti] = quantile(errs, 0.75);
    }
    for (std::size_t ti = 0; ti < cfg.T_list.size(); ++ti)
        report.table_rows.push_back({std::to_string(cfg.T_list[ti]), "summary",
                                     "median=" + format_double(medians[ti]),
                                     "iqr=" + format_double(iqr_hi[ti] - iqr_lo[ti]), "ok"});

    if (failures * 10 > n_runs)
        throw NumericalError("mc_consistency: more than 10% of replicates failed");
    if (failures > 0)
        report.warnings.push_back(std::to_string(failures) + " replicate(s) failed; recorded");

    Verdict mono;
    mono.criterion = "mc_consistency.medians_decreasing";
    if (R < 20) {
        mono.applicable = false;
        mono.detail = "insufficient replicates";
    } else if (cfg.T_list.size() < 3) {
        mono.applicable = false;
        mono.detail = "insufficient T points";
    } else {
        mono.pass = true;
        for (std::size_t ti = 1; ti < medians.size(); ++ti)
            if (!(medians[ti] < medians[ti - 1])) mono.pass = false;
        std::string s = "medians:";
        for (double m : medians) s += " " + format_double(m);
        mono.detail = s;
    }
    report.verdicts.push_back(mono);

    Verdict fin;
    fin.criterion = "mc_consistency.final_median";
    if (R < 20) {
        fin.applicable = false;
        fin.detail = "insufficient replicates";
    } else {
        fin.pass = medians.back() < cfg.mc_final_median_max;
        fin.detail = "median(T=" + std::to_string(cfg.T_list.back()) +
                     ") = " + format_double(medians.back()) + " vs " +
                     format_double(cfg.mc_final_median_max);
    }
    report.verdicts.push_back(fin);
    return report;
}

RunReport run_experiment(const ExperimentConfig& cfg) {
    switch (cfg.kind) {
        case ExperimentConfig::Kind::simulate:
            return run_simulate(cfg);
        case ExperimentConfig::Kind::estimate:
            return run_estimate(cfg);
        case ExperimentConfig::Kind::bias_decay:
            return run_bias_decay(cfg);
        case ExperimentConfig::Kind::cov_tail:
            return run_cov_tail(cfg);
        case ExperimentConfig::Kind::mc_consistency:
            return run_mc_consistency(cfg);
    }
    throw ConfigError("config: unknown experiment kind");
}

}  // namespace lrdspec
