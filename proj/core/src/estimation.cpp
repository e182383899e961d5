#include "lrdspec/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lrdspec/errors.hpp"
#include "lrdspec/parallel.hpp"

namespace lrdspec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double standardization_base(StandardizationKernel kernel, double omega) {
    return kernel == StandardizationKernel::power_law ? std::abs(omega)
                                                      : 2.0 * std::abs(std::sin(0.5 * omega));
}

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t quad_kernel_hash(const QuadratureSettings& q, StandardizationKernel kernel) {
    std::uint64_t h = fnv1a(&q.omega_min, sizeof(double));
    h = fnv1a(&q.panel_ratio, sizeof(double), h);
    h = fnv1a(&q.nodes_per_panel, sizeof(int), h);
    const int k = static_cast<int>(kernel);
    return fnv1a(&k, sizeof(int), h);
}

// Closed-form power integrals behind the normalizer bracket:
//   unit(a_out, a_in) = 2 (pi^{1+b-a_out} - 1)/(1+b-a_out) + 2/(1+b-a_in)
// where a_out weights |omega| >= 1 and a_in weights |omega| < 1.
double bracket_unit(double beta, double a_out, double a_in) {
    return 2.0 * (std::pow(kPi, 1.0 + beta - a_out) - 1.0) / (1.0 + beta - a_out) +
           2.0 / (1.0 + beta - a_in);
}

struct MBounds {
    double lo = 0.0, hi = 0.0;
};

MBounds short_memory_bounds(const SpectralModel& model, const PanelRule& rule) {
    MBounds b{std::numeric_limits<double>::infinity(), 0.0};
    for (double w : rule.nodes) {
        for (int l = 1; l <= model.basis.L; ++l) {
            const double m = m_symbol_eval(model, w, l);
            b.lo = std::min(b.lo, m);
            b.hi = std::max(b.hi, m);
        }
    }
    return b;
}

void check_bracket(const SpectralModel& model, const Theta& theta, const WeightSymbol& w,
                   StandardizationKernel kernel, const MBounds& mb,
                   const Eigen::VectorXd& sigma2) {
    double a_lo = 1.0, a_hi = 0.0;
    for (int l = 1; l <= model.basis.L; ++l) {
        const double a = alpha_eval(model, l, theta);
        a_lo = std::min(a_lo, a);
        a_hi = std::max(a_hi, a);
    }
    double lower = mb.lo * w.min_wtilde() * bracket_unit(w.beta, a_hi, a_lo);
    double upper = mb.hi * w.max_wtilde() * bracket_unit(w.beta, a_lo, a_hi);
    if (kernel == StandardizationKernel::exact_diff) {
        // 2 omega / pi <= 2 sin(omega/2) <= omega on [0, pi] widens the upper bound.
        upper *= std::pow(0.5 * kPi, a_hi);
    }
    for (int l = 0; l < model.basis.L; ++l) {
        if (sigma2[l] < lower * (1.0 - 1e-6) || sigma2[l] > upper * (1.0 + 1e-6))
            throw NumericalError("normalizer: sigma^2 escaped its analytic bracket; "
                                 "quadrature accuracy is suspect");
    }
}

}  // namespace

WeightSymbol::WeightSymbol(Eigen::VectorXd wtilde_, double beta_)
    : wtilde(std::move(wtilde_)), beta(beta_) {
    if (wtilde.size() < 1 || (wtilde.array() <= 0.0).any())
        throw ValidationError("weight symbol: wtilde must be positive");
    if (!(beta > 1.0)) throw ValidationError("weight symbol: beta must exceed 1");
}

Normalizer make_normalizer(const SpectralModel& model, const Theta& theta, const WeightSymbol& w,
                           const QuadratureSettings& quad, StandardizationKernel kernel) {
    if (!model.theta_domain.contains(theta))
        throw ValidationError("normalizer: theta outside the declared domain");
    if (w.wtilde.size() != model.basis.L)
        throw ValidationError("normalizer: wtilde must have one entry per component");
    const PanelRule rule = positive_half_rule(quad);
    Eigen::VectorXd sigma2(model.basis.L);
    for (int l = 1; l <= model.basis.L; ++l) {
        const double a = alpha_eval(model, l, theta);
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double omega = rule.nodes[i];
            acc += rule.weights[i] * m_symbol_eval(model, omega, l) *
                   std::pow(standardization_base(kernel, omega), -a) * std::pow(omega, w.beta);
        }
        sigma2[l - 1] = 2.0 * w.wtilde[l - 1] * acc;
        if (!std::isfinite(sigma2[l - 1]) || sigma2[l - 1] <= 0.0)
            throw NumericalError("normalizer: non-finite or non-positive sigma^2");
    }
    check_bracket(model, theta, w, kernel, short_memory_bounds(model, rule), sigma2);
    return Normalizer{theta, std::move(sigma2), quad_kernel_hash(quad, kernel)};
}

double upsilon_symbol(const SpectralModel& model, double omega, int l, const Theta& theta,
                      const Normalizer& norm, StandardizationKernel kernel) {
    if (omega == 0.0) throw ValidationError("upsilon: singular at omega = 0");
    const double a = alpha_eval(model, l, theta);
    return m_symbol_eval(model, omega, l) /
           (std::pow(standardization_base(kernel, omega), a) * norm.sigma2[l - 1]);
}

double log_weight_symbol(const SpectralModel& model, double omega, int l, const Theta& theta,
                         const Normalizer& norm, const WeightSymbol& w,
                         StandardizationKernel kernel) {
    if (omega == 0.0) throw ValidationError("log weight: singular at omega = 0");
    const double a = alpha_eval(model, l, theta);
    const double ln_upsilon = std::log(m_symbol_eval(model, omega, l)) -
                              std::log(norm.sigma2[l - 1]) -
                              a * std::log(standardization_base(kernel, omega));
    return ln_upsilon * w.wtilde[l - 1] * std::pow(std::abs(omega), w.beta);
}

namespace {

double fold(double omega) { return omega <= kPi ? omega : kTwoPi - omega; }

}  // namespace

ContrastRow empirical_contrast(const PeriodogramSet& pset, const SpectralModel& model,
                               const Theta& theta, const Normalizer& norm, const WeightSymbol& w,
                               StandardizationKernel kernel) {
    if (!same_basis(pset.basis, model.basis))
        throw ValidationError("empirical contrast: basis mismatch");
    if (pset.grid.kind != FrequencyGrid::Kind::fourier)
        throw ValidationError("empirical contrast: periodogram must live on a Fourier grid");
    const long T = pset.T;
    ContrastRow row;
    row.values = Eigen::VectorXd::Zero(model.basis.L);
    for (int l = 1; l <= model.basis.L; ++l) {
        double acc = 0.0;
        for (std::size_t j = 0; j < pset.frames.size(); ++j) {
            const double p_kk = pset.frames[j](l - 1, l - 1).real();
            acc += p_kk * log_weight_symbol(model, fold(pset.grid.nodes[j]), l, theta, norm, w,
                                            kernel);
        }
        row.values[l - 1] = -kTwoPi / static_cast<double>(T) * acc;
    }
    row.sup = row.values.maxCoeff();
    return row;
}

ContrastRow theoretical_contrast(const SpectralModel& model, const Theta& theta0,
                                 const Theta& theta, const Normalizer& norm, const WeightSymbol& w,
                                 const QuadratureSettings& quad, StandardizationKernel kernel) {
    if (!model.theta_domain.contains(theta0))
        throw ValidationError("theoretical contrast: theta0 outside the declared domain");
    const PanelRule rule = positive_half_rule(quad);
    ContrastRow row;
    row.values = Eigen::VectorXd::Zero(model.basis.L);
    for (int l = 1; l <= model.basis.L; ++l) {
        const double a0 = alpha_eval(model, l, theta0);
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double omega = rule.nodes[i];
            const double f0 = m_symbol_eval(model, omega, l) *
                              std::pow(standardization_base(kernel, omega), -a0);
            acc += rule.weights[i] * f0 *
                   log_weight_symbol(model, omega, l, theta, norm, w, kernel);
        }
        row.values[l - 1] = -2.0 * acc;
        if (!std::isfinite(row.values[l - 1]))
            throw NumericalError("theoretical contrast: quadrature failure");
    }
    row.sup = row.values.maxCoeff();
    return row;
}

namespace {

// Factored contrast machinery: everything theta-independent is reduced to
// three per-component sums over the Fourier grid and per-node normalizer
// tables, so one objective evaluation costs O(L * grid) exponentials.
class ContrastEvaluator {
  public:
    ContrastEvaluator(const PeriodogramSet& pset, const SpectralModel& model,
                      const WeightSymbol& w, StandardizationKernel kernel)
        : model_(model), w_(w), kernel_(kernel), rule_(positive_half_rule(model.quad)) {
        const int L = model.basis.L;
        const long T = pset.T;
        s_m_.assign(L, 0.0);
        s_1_.assign(L, 0.0);
        s_k_.assign(L, 0.0);
        for (int l = 1; l <= L; ++l) {
            double sm = 0.0, s1 = 0.0, sk = 0.0;
            for (std::size_t j = 0; j < pset.frames.size(); ++j) {
                const double omega = fold(pset.grid.nodes[j]);
                const double p_kk = pset.frames[j](l - 1, l - 1).real();
                const double base = p_kk * w.wtilde[l - 1] * std::pow(omega, w.beta);
                sm += base * std::log(m_symbol_eval(model, omega, l));
                s1 += base;
                sk += base * std::log(standardization_base(kernel, omega));
            }
            const double scale = kTwoPi / static_cast<double>(T);
            s_m_[l - 1] = scale * sm;
            s_1_[l - 1] = scale * s1;
            s_k_[l - 1] = scale * sk;
        }

        const std::size_t n = rule_.nodes.size();
        ln_base_.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            ln_base_[i] = std::log(standardization_base(kernel, rule_.nodes[i]));
        sigma_coef_.assign(L, std::vector<double>(n));
        for (int l = 1; l <= L; ++l)
            for (std::size_t i = 0; i < n; ++i)
                sigma_coef_[l - 1][i] = 2.0 * w.wtilde[l - 1] * rule_.weights[i] *
                                        m_symbol_eval(model, rule_.nodes[i], l) *
                                        std::pow(rule_.nodes[i], w.beta);
        bounds_ = short_memory_bounds(model, rule_);
    }

    // U_{T,theta}(l) for all l plus the sup; throws on non-finite values.
    ContrastRow evaluate(const Theta& theta) const {
        const int L = model_.basis.L;
        ContrastRow row;
        row.values = Eigen::VectorXd::Zero(L);
        Eigen::VectorXd sigma2(L);
        for (int l = 1; l <= L; ++l) {
            const double a = alpha_eval(model_, l, theta);
            const auto& coef = sigma_coef_[l - 1];
            double s2 = 0.0;
            for (std::size_t i = 0; i < coef.size(); ++i)
                s2 += coef[i] * std::exp(-a * ln_base_[i]);
            sigma2[l - 1] = s2;
            row.values[l - 1] =
                -(s_m_[l - 1] - std::log(s2) * s_1_[l - 1] - a * s_k_[l - 1]);
        }
        check_bracket(model_, theta, w_, kernel_, bounds_, sigma2);
        row.sup = row.values.maxCoeff();
        if (!std::isfinite(row.sup)) throw NumericalError("contrast: non-finite objective");
        return row;
    }

  private:
    const SpectralModel& model_;
    const WeightSymbol& w_;
    StandardizationKernel kernel_;
    PanelRule rule_;
    std::vector<double> s_m_, s_1_, s_k_;
    std::vector<double> ln_base_;
    std::vector<std::vector<double>> sigma_coef_;
    MBounds bounds_;
};

Theta clamp_to_box(Theta theta, const ThetaDomain& box) {
    for (std::size_t i = 0; i < theta.size(); ++i)
        theta[i] = std::clamp(theta[i], box.lower[i], box.upper[i]);
    return theta;
}

bool lex_less(const Theta& a, const Theta& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

EstimateResult estimate_theta(const PeriodogramSet& pset, const SpectralModel& model,
                              const WeightSymbol& w, const OptimizerConfig& opt,
                              StandardizationKernel kernel) {
    const ContrastEvaluator eval(pset, model, w, kernel);
    EstimateResult result;

    auto objective = [&](const Theta& theta) -> std::pair<ContrastRow, double> {
        const ContrastRow row = eval.evaluate(theta);
        return {row, row.sup};
    };

    // Coarse grid scan.
    const std::vector<Theta> grid = model.theta_domain.grid(opt.grid_points);
    std::vector<ContrastRow> rows(grid.size());
    std::vector<std::string> failures(grid.size());
    parallel_for(static_cast<long>(grid.size()), opt.threads, [&](long i) {
        try {
            rows[i] = eval.evaluate(grid[i]);
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    });
    std::size_t best = grid.size();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!failures[i].empty())
            throw OptimizerError("estimate: objective failed at a grid point: " + failures[i],
                                 result.trace);
        result.trace.emplace_back(grid[i], rows[i].sup);
        if (best == grid.size() || rows[i].sup < rows[best].sup) best = i;
    }
    result.grid_surface.thetas = grid;
    result.grid_surface.rows = rows;

    // Simplex refinement from the best grid point, projected into the box.
    const int p = model.theta_domain.dim();
    const int n_vertices = p + 1;
    std::vector<Theta> simplex(n_vertices, grid[best]);
    std::vector<double> f_val(n_vertices);
    double width_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < p; ++i)
        width_min = std::min(width_min, model.theta_domain.upper[i] - model.theta_domain.lower[i]);
    const double step =
        opt.grid_points > 1 ? width_min / (opt.grid_points - 1) : 0.1 * width_min;
    for (int i = 0; i < p; ++i) {
        Theta v = grid[best];
        v[i] += (v[i] + step <= model.theta_domain.upper[i]) ? step : -step;
        simplex[i + 1] = clamp_to_box(v, model.theta_domain);
    }
    auto eval_traced = [&](const Theta& theta) {
        try {
            const auto [row, val] = objective(theta);
            result.trace.emplace_back(theta, val);
            return val;
        } catch (const OptimizerError&) {
            throw;
        } catch (const std::exception& e) {
            throw OptimizerError(std::string("estimate: objective failed during refinement: ") +
                                     e.what(),
                                 result.trace);
        }
    };
    for (int i = 0; i < n_vertices; ++i) f_val[i] = eval_traced(simplex[i]);

    auto order = [&] {
        std::vector<int> idx(n_vertices);
        for (int i = 0; i < n_vertices; ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
            if (f_val[a] != f_val[b]) return f_val[a] < f_val[b];
            return lex_less(simplex[a], simplex[b]);
        });
        std::vector<Theta> s(n_vertices);
        std::vector<double> f(n_vertices);
        for (int i = 0; i < n_vertices; ++i) {
            s[i] = simplex[idx[i]];
            f[i] = f_val[idx[i]];
        }
        simplex = std::move(s);
        f_val = std::move(f);
    };

    for (int it = 0; it < opt.max_iterations && width_min > 0.0; ++it) {
        order();
        double diameter = 0.0;
        for (int i = 1; i < n_vertices; ++i)
            for (int k = 0; k < p; ++k)
                diameter = std::max(diameter, std::abs(simplex[i][k] - simplex[0][k]));
        if (diameter < opt.simplex_tol * width_min) break;

        Theta centroid(p, 0.0);
        for (int i = 0; i < n_vertices - 1; ++i)
            for (int k = 0; k < p; ++k) centroid[k] += simplex[i][k] / (n_vertices - 1);

        auto affine = [&](double coef) {
            Theta v(p);
            for (int k = 0; k < p; ++k)
                v[k] = centroid[k] + coef * (simplex[n_vertices - 1][k] - centroid[k]);
            return clamp_to_box(std::move(v), model.theta_domain);
        };

        const Theta reflected = affine(-1.0);
        const double f_r = eval_traced(reflected);
        if (f_r < f_val[0]) {
            const Theta expanded = affine(-2.0);
            const double f_e = eval_traced(expanded);
            if (f_e < f_r) {
                simplex[n_vertices - 1] = expanded;
                f_val[n_vertices - 1] = f_e;
            } else {
                simplex[n_vertices - 1] = reflected;
                f_val[n_vertices - 1] = f_r;
            }
        } else if (f_r < f_val[n_vertices - 2]) {
            simplex[n_vertices - 1] = reflected;
            f_val[n_vertices - 1] = f_r;
        } else {
            const Theta contracted = affine(f_r < f_val[n_vertices - 1] ? -0.5 : 0.5);
            const double f_c = eval_traced(contracted);
            if (f_c < std::min(f_r, f_val[n_vertices - 1])) {
                simplex[n_vertices - 1] = contracted;
                f_val[n_vertices - 1] = f_c;
            } else {  // shrink toward the best vertex
                for (int i = 1; i < n_vertices; ++i) {
                    for (int k = 0; k < p; ++k)
                        simplex[i][k] = 0.5 * (simplex[i][k] + simplex[0][k]);
                    simplex[i] = clamp_to_box(simplex[i], model.theta_domain);
                    f_val[i] = eval_traced(simplex[i]);
                }
            }
        }
    }
    order();

    // The simplex start was the grid optimum, so simplex[0] can only improve
    // on it; ties fall back to the lexicographically smaller theta.
    Theta theta_hat = simplex[0];
    double f_hat = f_val[0];
    if (rows[best].sup < f_hat || (rows[best].sup == f_hat && lex_less(grid[best], theta_hat))) {
        theta_hat = grid[best];
        f_hat = rows[best].sup;
    }
    result.theta_hat = theta_hat;
    result.objective = f_hat;
    result.contrast_at_theta_hat = eval.evaluate(theta_hat);
    return result;
}

}  // namespace lrdspec
