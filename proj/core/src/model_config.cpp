#include "lrdspec/model_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lrdspec/errors.hpp"

namespace lrdspec {

namespace {

using nlohmann::json;

const json& require_field(const json& j, const std::string& key, const std::string& where) {
    const auto it = j.find(key);
    if (it == j.end()) throw ConfigError("config: missing required field '" + where + key + "'");
    return *it;
}

double require_number(const json& j, const std::string& key, const std::string& where) {
    const json& v = require_field(j, key, where);
    if (!v.is_number()) throw ConfigError("config: field '" + where + key + "' must be a number");
    return v.get<double>();
}

std::vector<double> number_list(const json& v, const std::string& name) {
    if (!v.is_array()) throw ConfigError("config: field '" + name + "' must be an array");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) throw ConfigError("config: field '" + name + "' must hold numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

Eigen::VectorXd sigma_eigs_from(const json& v, int L) {
    if (v.is_array()) {
        const auto list = number_list(v, "short_memory.sigma_eigs");
        if (static_cast<int>(list.size()) != L)
            throw ConfigError("config: short_memory.sigma_eigs must have L entries");
        return Eigen::Map<const Eigen::VectorXd>(list.data(), L);
    }
    if (v.is_object()) {
        const std::string type = require_field(v, "type", "short_memory.sigma_eigs.").get<std::string>();
        if (type != "power")
            throw ConfigError("config: short_memory.sigma_eigs.type must be 'power' or an array");
        const double expo = require_number(v, "exponent", "short_memory.sigma_eigs.");
        Eigen::VectorXd eigs(L);
        for (int l = 1; l <= L; ++l) eigs[l - 1] = std::pow(static_cast<double>(l), expo);
        return eigs;
    }
    throw ConfigError("config: short_memory.sigma_eigs must be an array or {type, exponent}");
}

std::vector<std::vector<double>> per_component_lists(const json& v, int L, const std::string& name) {
    if (!v.is_array()) throw ConfigError("config: field '" + name + "' must be an array");
    std::vector<std::vector<double>> out;
    if (v.empty() || v[0].is_number()) {
        // A flat list is broadcast to every component.
        const auto one = number_list(v, name);
        out.assign(L, one);
        return out;
    }
    if (static_cast<int>(v.size()) != L)
        throw ConfigError("config: field '" + name + "' must have one list per component");
    for (const auto& e : v) out.push_back(number_list(e, name));
    return out;
}

Eigen::MatrixXd coef_matrix(const json& v, const std::string& name) {
    if (!v.is_array() || v.empty())
        throw ConfigError("config: field '" + name + "' must be a nonempty 2-D array");
    const std::size_t cols = v[0].size();
    Eigen::MatrixXd m(v.size(), cols);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto row = number_list(v[i], name);
        if (row.size() != cols) throw ConfigError("config: field '" + name + "' must be rectangular");
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = row[j];
    }
    return m;
}

ShortMemorySymbol parse_short_memory(const json& j, int L) {
    const std::string variant = require_field(j, "variant", "short_memory.").get<std::string>();
    if (variant == "farima_rational") {
        FarimaRational f;
        f.sigma_eigs = sigma_eigs_from(require_field(j, "sigma_eigs", "short_memory."), L);
        f.ar = per_component_lists(j.value("ar", json::array()), L, "short_memory.ar");
        f.ma = per_component_lists(j.value("ma", json::array()), L, "short_memory.ma");
        return f;
    }
    if (variant == "tapered_rational") {
        TaperedRational t;
        t.p_coef = coef_matrix(require_field(j, "p", "short_memory."), "short_memory.p");
        t.q_coef = coef_matrix(require_field(j, "q", "short_memory."), "short_memory.q");
        const json& lam = require_field(j, "lambda_grid", "short_memory.");
        if (lam.is_array()) {
            t.lambda_grid = number_list(lam, "short_memory.lambda_grid");
            if (static_cast<int>(t.lambda_grid.size()) != L)
                throw ConfigError("config: short_memory.lambda_grid must have L entries");
        } else if (lam.is_object()) {
            const double lo = require_number(lam, "lo", "short_memory.lambda_grid.");
            const double hi = require_number(lam, "hi", "short_memory.lambda_grid.");
            t.lambda_grid.resize(L);
            for (int l = 0; l < L; ++l)
                t.lambda_grid[l] = L == 1 ? lo : lo + (hi - lo) * l / (L - 1);
        } else {
            throw ConfigError("config: short_memory.lambda_grid must be an array or {lo, hi}");
        }
        const std::string taper = j.value("taper", std::string("cosine_squared"));
        if (taper != "cosine_squared")
            throw ConfigError("config: short_memory.taper must be 'cosine_squared'");
        t.taper = TaperedRational::Taper::cosine_squared;
        return t;
    }
    throw ConfigError("config: short_memory.variant must be 'farima_rational' or 'tapered_rational'");
}

}  // namespace

ModelConfig parse_model_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }

    const json& basis_j = require_field(j, "basis", "");
    const int L = static_cast<int>(require_number(basis_j, "L", "basis."));
    std::vector<std::string> labels;
    if (basis_j.contains("labels"))
        for (const auto& s : basis_j["labels"]) labels.push_back(s.get<std::string>());
    BasisSpec basis(L, std::move(labels));

    const json& alpha_j = require_field(j, "alpha", "");
    const std::string family = require_field(alpha_j, "family", "alpha.").get<std::string>();
    LongMemorySymbol alpha;
    if (family == "constant")
        alpha.family = LongMemorySymbol::Family::constant;
    else if (family == "log_decay")
        alpha.family = LongMemorySymbol::Family::log_decay;
    else if (family == "exponential")
        alpha.family = LongMemorySymbol::Family::exponential;
    else
        throw ConfigError("config: alpha.family must be constant, log_decay or exponential");
    if (alpha_j.contains("clamp")) {
        const auto clamp = number_list(alpha_j["clamp"], "alpha.clamp");
        if (clamp.size() != 2) throw ConfigError("config: alpha.clamp must be [lo, hi]");
        alpha.clamp_lo = clamp[0];
        alpha.clamp_hi = clamp[1];
    }

    ShortMemorySymbol short_memory = parse_short_memory(require_field(j, "short_memory", ""), L);

    const std::string kernel_s = require_field(j, "kernel", "").get<std::string>();
    LrdKernel kernel;
    if (kernel_s == "exact_diff")
        kernel = LrdKernel::exact_diff;
    else if (kernel_s == "power_law")
        kernel = LrdKernel::power_law;
    else
        throw ConfigError("config: kernel must be 'exact_diff' or 'power_law'");

    const json& dom_j = require_field(j, "theta_domain", "");
    ThetaDomain domain;
    domain.lower = number_list(require_field(dom_j, "lower", "theta_domain."), "theta_domain.lower");
    domain.upper = number_list(require_field(dom_j, "upper", "theta_domain."), "theta_domain.upper");

    QuadratureSettings quad;
    if (j.contains("quadrature")) {
        const json& q = j["quadrature"];
        quad.omega_min = q.value("omega_min", quad.omega_min);
        quad.panel_ratio = q.value("panel_ratio", quad.panel_ratio);
        quad.nodes_per_panel = q.value("nodes_per_panel", quad.nodes_per_panel);
    }

    SpectralModel model(std::move(basis), alpha, std::move(short_memory), kernel,
                        std::move(domain), quad);

    Eigen::VectorXd wtilde = Eigen::VectorXd::Ones(L);
    double beta = 2.0;
    if (j.contains("weight")) {
        const json& wj = j["weight"];
        beta = wj.value("beta", beta);
        if (wj.contains("wtilde") && wj["wtilde"].is_array()) {
            const auto list = number_list(wj["wtilde"], "weight.wtilde");
            if (static_cast<int>(list.size()) != L)
                throw ConfigError("config: weight.wtilde must have L entries");
            wtilde = Eigen::Map<const Eigen::VectorXd>(list.data(), L);
        }
    }

    StandardizationKernel est_kernel = StandardizationKernel::power_law;
    if (j.contains("estimation_kernel")) {
        const std::string s = j["estimation_kernel"].get<std::string>();
        if (s == "power_law")
            est_kernel = StandardizationKernel::power_law;
        else if (s == "exact_diff")
            est_kernel = StandardizationKernel::exact_diff;
        else
            throw ConfigError("config: estimation_kernel must be 'power_law' or 'exact_diff'");
    }

    return ModelConfig{std::move(model), WeightSymbol(std::move(wtilde), beta), est_kernel};
}

ModelConfig load_model_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open model file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_model_config(ss.str());
}

}  // namespace lrdspec
