#include "lrdspec/models.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "lrdspec/errors.hpp"
#include "lrdspec/parallel.hpp"

namespace lrdspec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Complex = std::complex<double>;

// p(z) = 1 - sum_j c_j z^j, Horner from the top.
Complex one_minus_poly(const std::vector<double>& c, Complex z) {
    Complex acc(0.0, 0.0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = (acc + *it) * z;
    return Complex(1.0, 0.0) - acc;
}

// Roots of p(z) = 1 - sum_j c_j z^j, as eigenvalues of the companion matrix
// of the monic form. Trailing near-zero coefficients are dropped.
std::vector<Complex> one_minus_poly_roots(const std::vector<double>& c) {
    int deg = static_cast<int>(c.size());
    while (deg > 0 && std::abs(c[deg - 1]) < 1e-14) --deg;
    if (deg == 0) return {};
    const double lead = -c[deg - 1];  // coefficient of z^deg
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
    for (int j = 0; j < deg; ++j) {
        const double a_j = (j == 0) ? 1.0 : -c[j - 1];  // coefficient of z^j
        comp(j, deg - 1) = -a_j / lead;
    }
    for (int j = 1; j < deg; ++j) comp(j, j - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    std::vector<Complex> roots(deg);
    for (int j = 0; j < deg; ++j) roots[j] = es.eigenvalues()[j];
    return roots;
}

double taper_value(TaperedRational::Taper taper, double omega) {
    switch (taper) {
        case TaperedRational::Taper::cosine_squared: {
            const double c = std::cos(0.5 * omega);
            return c * c;
        }
    }
    throw ValidationError("taper: unknown kind");
}

double poly2_eval(const Eigen::MatrixXd& coef, double lambda, double omega) {
    const double w2 = omega * omega;
    double acc = 0.0;
    double lp = 1.0;
    for (Eigen::Index i = 0; i < coef.rows(); ++i) {
        double wp = 1.0;
        for (Eigen::Index j = 0; j < coef.cols(); ++j) {
            acc += coef(i, j) * lp * wp;
            wp *= w2;
        }
        lp *= lambda;
    }
    return acc;
}

}  // namespace

double LongMemorySymbol::raw(int l, const Theta& theta) const {
    switch (family) {
        case Family::constant:
            return theta[0];
        case Family::log_decay:
            return theta[0] + theta[1] / (1.0 + std::log(static_cast<double>(l)));
        case Family::exponential:
            return theta[0] + theta[1] * std::exp(-static_cast<double>(l - 1));
    }
    throw ValidationError("long-memory symbol: unknown family");
}

bool ThetaDomain::contains(const Theta& theta, double slack) const {
    if (theta.size() != lower.size()) return false;
    for (std::size_t i = 0; i < theta.size(); ++i)
        if (theta[i] < lower[i] - slack || theta[i] > upper[i] + slack) return false;
    return true;
}

std::vector<Theta> ThetaDomain::grid(int points) const {
    if (points < 1) throw ValidationError("theta grid: need at least one point per dimension");
    const int p = dim();
    std::vector<Theta> out;
    std::vector<int> idx(p, 0);
    while (true) {
        Theta theta(p);
        for (int i = 0; i < p; ++i) {
            theta[i] = points == 1 ? lower[i]
                                   : lower[i] + (upper[i] - lower[i]) * idx[i] / (points - 1);
        }
        out.push_back(theta);
        int i = p - 1;
        while (i >= 0 && ++idx[i] == points) idx[i--] = 0;
        if (i < 0) break;
    }
    return out;
}

std::vector<Theta> ThetaDomain::corners() const { return grid(2); }

double kernel_base(LrdKernel kernel, double omega) {
    switch (kernel) {
        case LrdKernel::exact_diff:
            return 2.0 * std::abs(std::sin(0.5 * omega));
        case LrdKernel::power_law:
            return std::abs(omega);
    }
    throw ValidationError("kernel: unknown kind");
}

SpectralModel::SpectralModel(BasisSpec basis_, LongMemorySymbol alpha_,
                             ShortMemorySymbol short_memory_, LrdKernel kernel_,
                             ThetaDomain theta_domain_, QuadratureSettings quad_)
    : basis(std::move(basis_)),
      alpha(alpha_),
      short_memory(std::move(short_memory_)),
      kernel(kernel_),
      theta_domain(std::move(theta_domain_)),
      quad(quad_) {
    if (!(alpha.clamp_lo > 0.0) || !(alpha.clamp_lo <= alpha.clamp_hi) || !(alpha.clamp_hi < 1.0))
        throw ValidationError("long-memory clamp bounds: need 0 < lo <= hi < 1");
    if (theta_domain.dim() != alpha.param_dim())
        throw ValidationError("theta domain: dimension must match the alpha family");
    if (theta_domain.lower.size() != theta_domain.upper.size())
        throw ValidationError("theta domain: lower/upper length mismatch");
    for (int i = 0; i < theta_domain.dim(); ++i)
        if (theta_domain.lower[i] > theta_domain.upper[i])
            throw ValidationError("theta domain: lower bound exceeds upper bound");
    if (const auto* f = std::get_if<FarimaRational>(&short_memory)) {
        if (f->sigma_eigs.size() != basis.L)
            throw ValidationError("short-memory symbol: sigma_eigs must have one entry per component");
        if ((f->sigma_eigs.array() <= 0.0).any())
            throw ValidationError("short-memory symbol: sigma_eigs must be positive");
        if (static_cast<int>(f->ar.size()) != basis.L || static_cast<int>(f->ma.size()) != basis.L)
            throw ValidationError("short-memory symbol: need one AR and one MA list per component");
    } else {
        const auto& tr = std::get<TaperedRational>(short_memory);
        if (static_cast<int>(tr.lambda_grid.size()) != basis.L)
            throw ValidationError("short-memory symbol: lambda_grid must have one value per component");
        if (tr.p_coef.size() == 0 || tr.q_coef.size() == 0)
            throw ValidationError("short-memory symbol: empty polynomial coefficients");
    }
}

const FarimaRational& SpectralModel::farima() const {
    if (const auto* f = std::get_if<FarimaRational>(&short_memory)) return *f;
    throw ValidationError("model: operation requires the rational ARMA short-memory variant");
}

double alpha_eval(const SpectralModel& model, int l, const Theta& theta) {
    if (l < 1 || l > model.basis.L) throw ValidationError("alpha: component index out of range");
    if (!model.theta_domain.contains(theta))
        throw ValidationError("alpha: theta outside the declared domain");
    const double a = model.alpha.raw(l, theta);
    if (a < model.alpha.clamp_lo || a > model.alpha.clamp_hi)
        throw ValidationError("long-memory symbol range: alpha(l, theta) escaped [" +
                              std::to_string(model.alpha.clamp_lo) + ", " +
                              std::to_string(model.alpha.clamp_hi) + "]");
    return a;
}

double m_symbol_eval(const SpectralModel& model, double omega, int l) {
    if (l < 1 || l > model.basis.L) throw ValidationError("m_symbol: component index out of range");
    if (const auto* f = std::get_if<FarimaRational>(&model.short_memory)) {
        const Complex z = std::polar(1.0, -omega);
        const Complex num = one_minus_poly(f->ma[l - 1], z);
        const Complex den = one_minus_poly(f->ar[l - 1], z);
        if (std::abs(den) < 1e-12)
            throw ValidationError("short-memory symbol: AR polynomial vanishes on the unit circle");
        return f->sigma_eigs[l - 1] / kTwoPi * std::norm(num / den);
    }
    const auto& tr = std::get<TaperedRational>(model.short_memory);
    const double lambda = tr.lambda_grid[l - 1];
    const double q = poly2_eval(tr.q_coef, lambda, omega);
    if (std::abs(q) < 1e-12)
        throw ValidationError("short-memory symbol: denominator polynomial vanishes");
    return poly2_eval(tr.p_coef, lambda, omega) / q * taper_value(tr.taper, omega);
}

double spectral_density_symbol(const SpectralModel& model, double omega, int l,
                               const Theta& theta) {
    if (omega == 0.0) throw ValidationError("spectral density: singular at omega = 0");
    const double a = alpha_eval(model, l, theta);
    return m_symbol_eval(model, omega, l) * std::pow(kernel_base(model.kernel, omega), -a);
}

namespace {

// Sliver (0, omega_min): f is matched there by C * omega^{-alpha}.
double near_zero_tail(const SpectralModel& model, int l, const Theta& theta,
                      const QuadratureSettings& quad, long t) {
    const double a = alpha_eval(model, l, theta);
    const double c =
        spectral_density_symbol(model, quad.omega_min, l, theta) * std::pow(quad.omega_min, a);
    return 2.0 * c * power_cosine_tail(quad.omega_min, a, static_cast<double>(std::labs(t)));
}

}  // namespace

double covariance_symbol(const SpectralModel& model, long t, int l, const Theta& theta,
                         const QuadratureSettings& quad) {
    const FrequencyGrid grid =
        FrequencyGrid::symmetric_quadrature_refined(quad, static_cast<double>(std::labs(t)));
    Complex acc(0.0, 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double w = grid.nodes[i];
        acc += grid.weights[i] * spectral_density_symbol(model, w, l, theta) *
               std::polar(1.0, w * static_cast<double>(t));
    }
    acc += near_zero_tail(model, l, theta, quad, t);
    if (!std::isfinite(acc.real()) || !std::isfinite(acc.imag()))
        throw NumericalError("covariance quadrature: non-finite value");
    if (std::abs(acc.imag()) > 1e-8 * std::abs(acc.real()) + 1e-10)
        throw NumericalError("covariance quadrature: imaginary part did not cancel");
    return acc.real();
}

std::vector<double> covariance_table(const SpectralModel& model, int l, const Theta& theta,
                                     long max_lag, int threads) {
    auto density = [&](double w) { return spectral_density_symbol(model, w, l, theta); };
    std::vector<double> table = filon_cosine_table(density, model.quad, max_lag, threads);
    for (long t = 0; t <= max_lag; ++t)
        table[t] = 2.0 * table[t] + near_zero_tail(model, l, theta, model.quad, t);
    return table;
}

std::vector<std::vector<double>> covariance_tables(const SpectralModel& model, const Theta& theta,
                                                   long max_lag, int threads) {
    const int L = model.basis.L;
    std::vector<std::vector<double>> tables(L);
    // Components that differ only by the innovation-eigenvalue scale share a
    // unit-scale table; important for the constant-alpha FARIMA fixtures.
    std::map<std::string, int> seen;
    for (int l = 1; l <= L; ++l) {
        std::ostringstream key;
        key.precision(17);
        key << alpha_eval(model, l, theta) << '|';
        double scale = 1.0;
        if (const auto* f = std::get_if<FarimaRational>(&model.short_memory)) {
            scale = f->sigma_eigs[l - 1];
            for (double c : f->ar[l - 1]) key << c << ',';
            key << '|';
            for (double c : f->ma[l - 1]) key << c << ',';
        } else {
            scale = 1.0;
            key << std::get<TaperedRational>(model.short_memory).lambda_grid[l - 1];
        }
        const auto it = seen.find(key.str());
        if (it != seen.end()) {
            const int src = it->second;
            double src_scale = 1.0;
            if (const auto* f = std::get_if<FarimaRational>(&model.short_memory))
                src_scale = f->sigma_eigs[src - 1];
            tables[l - 1] = tables[src - 1];
            const double ratio = scale / src_scale;
            for (double& v : tables[l - 1]) v *= ratio;
        } else {
            tables[l - 1] = covariance_table(model, l, theta, max_lag, threads);
            seen.emplace(key.str(), l);
        }
    }
    return tables;
}

double lrd_asymptote(const SpectralModel& model, long t, int l, const Theta& theta) {
    if (t < 1) throw ValidationError("lrd_asymptote: lag must be >= 1");
    const double a = alpha_eval(model, l, theta);
    if (a >= 1.0) throw ValidationError("lrd_asymptote: alpha >= 1 hits the Gamma pole");
    const double amp = 2.0 * std::tgamma(1.0 - a) * std::sin(0.5 * kPi * a) *
                       m_symbol_eval(model, 1.0 / static_cast<double>(t), l);
    return amp * std::pow(static_cast<double>(t), a - 1.0);
}

std::vector<double> ma_coefficients(const SpectralModel& model, int l, const Theta& theta, int J) {
    const FarimaRational& f = model.farima();
    const auto& ar = f.ar[l - 1];
    const auto& ma = f.ma[l - 1];
    const int p = static_cast<int>(ar.size());
    const int q = static_cast<int>(ma.size());
    if (J < p + q) throw ValidationError("ma_coefficients: truncation must be >= p + q");
    const double d = 0.5 * alpha_eval(model, l, theta);

    std::vector<double> a(J + 1), h(J + 1), b(J + 1, 0.0);
    a[0] = 1.0;
    for (int j = 1; j <= J; ++j) a[j] = a[j - 1] * (j - 1 + d) / j;
    h[0] = 1.0;
    for (int j = 1; j <= J; ++j) {
        double v = (j <= q) ? -ma[j - 1] : 0.0;
        for (int i = 1; i <= std::min(j, p); ++i) v += ar[i - 1] * h[j - i];
        h[j] = v;
    }
    for (int j = 0; j <= J; ++j)
        for (int i = 0; i <= j; ++i) b[j] += a[i] * h[j - i];
    return b;
}

namespace {

void check_integrability(const SpectralModel& model, AssumptionReport& rep) {
    const auto thetas = model.theta_domain.grid(5);
    QuadratureSettings fine = model.quad;
    fine.nodes_per_panel *= 2;
    const PanelRule base = positive_half_rule(model.quad);
    const PanelRule refined = positive_half_rule(fine);
    double max_integral = 0.0, max_change = 0.0;
    for (const Theta& theta : thetas) {
        auto sup_f = [&](double w) {
            double m = 0.0;
            for (int l = 1; l <= model.basis.L; ++l)
                m = std::max(m, spectral_density_symbol(model, w, l, theta));
            return m;
        };
        const double coarse_val = 2.0 * base.integrate(sup_f);
        const double fine_val = 2.0 * refined.integrate(sup_f);
        if (!std::isfinite(coarse_val) || !std::isfinite(fine_val)) {
            rep.failures.push_back("integrability: non-finite spectral-density integral");
            return;
        }
        max_integral = std::max(max_integral, coarse_val);
        max_change = std::max(max_change, std::abs(fine_val - coarse_val) /
                                              std::max(std::abs(coarse_val), 1e-300));
    }
    rep.integral_sup_density = max_integral;
    rep.integral_rel_change = max_change;
    if (max_change > 1e-3)
        rep.failures.push_back("integrability: quadrature unstable under refinement");
}

void check_short_memory_bounds(const SpectralModel& model, AssumptionReport& rep) {
    const PanelRule rule = positive_half_rule(model.quad);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double w : rule.nodes) {
        for (int l = 1; l <= model.basis.L; ++l) {
            const double m = m_symbol_eval(model, w, l);
            lo = std::min(lo, m);
            hi = std::max(hi, m);
        }
    }
    rep.m_emp = lo;
    rep.m_up_emp = hi;
    if (!(lo > 0.0)) rep.failures.push_back("short-memory positivity: M(omega, l) <= 0 on the grid");
    if (!std::isfinite(hi)) rep.failures.push_back("short-memory bounds: M(omega, l) unbounded");
}

void check_roots(const SpectralModel& model, AssumptionReport& rep) {
    const auto* f = std::get_if<FarimaRational>(&model.short_memory);
    if (f == nullptr) {
        rep.min_root_modulus = std::numeric_limits<double>::infinity();
        return;
    }
    double min_mod = std::numeric_limits<double>::infinity();
    for (int l = 0; l < model.basis.L; ++l) {
        const auto ar_roots = one_minus_poly_roots(f->ar[l]);
        const auto ma_roots = one_minus_poly_roots(f->ma[l]);
        for (const auto& r : ar_roots) min_mod = std::min(min_mod, std::abs(r));
        for (const auto& r : ma_roots) min_mod = std::min(min_mod, std::abs(r));
        for (const auto& ra : ar_roots)
            for (const auto& rm : ma_roots)
                if (std::abs(ra - rm) < 1e-8) {
                    rep.failures.push_back("root-location: AR and MA polynomials share a root");
                    break;
                }
    }
    rep.min_root_modulus = min_mod;
    if (min_mod <= 1.0 + 1e-9)
        rep.failures.push_back("root-location: AR/MA root inside or on the unit circle");
}

void check_slow_variation(const SpectralModel& model, AssumptionReport& rep) {
    double max_dev = 0.0;
    for (double w : {1e-2, 1e-3}) {
        for (double xi : {2.0, 5.0}) {
            for (int l = 1; l <= model.basis.L; ++l) {
                const double ratio = m_symbol_eval(model, w / xi, l) / m_symbol_eval(model, w, l);
                max_dev = std::max(max_dev, std::abs(ratio - 1.0));
            }
        }
    }
    rep.slow_variation_max_dev = max_dev;
    if (max_dev > 0.05)
        rep.warnings.push_back("slow variation: short-memory symbol drifts near zero frequency");
}

void check_alpha(const SpectralModel& model, AssumptionReport& rep) {
    const auto thetas = model.theta_domain.grid(5);
    double lo = 1.0, hi = 0.0;
    for (const Theta& theta : thetas) {
        for (int l = 1; l <= model.basis.L; ++l) {
            const double a = model.alpha.raw(l, theta);
            lo = std::min(lo, a);
            hi = std::max(hi, a);
        }
    }
    rep.alpha_min = lo;
    rep.alpha_max = hi;
    if (lo < model.alpha.clamp_lo || hi > model.alpha.clamp_hi)
        rep.failures.push_back("long-memory symbol range: alpha escapes the clamp bounds");
    if (!(lo > 0.0) || !(hi < 1.0))
        rep.failures.push_back("long-memory symbol range: alpha outside (0, 1)");

    bool identifiable = true;
    for (std::size_t i = 0; i < thetas.size() && identifiable; ++i) {
        for (std::size_t j = i + 1; j < thetas.size(); ++j) {
            double max_diff = 0.0, theta_diff = 0.0;
            for (int l = 1; l <= model.basis.L; ++l)
                max_diff = std::max(
                    max_diff, std::abs(model.alpha.raw(l, thetas[i]) - model.alpha.raw(l, thetas[j])));
            for (std::size_t k = 0; k < thetas[i].size(); ++k)
                theta_diff = std::max(theta_diff, std::abs(thetas[i][k] - thetas[j][k]));
            if (theta_diff > 1e-12 && max_diff < 1e-10) {
                identifiable = false;
                break;
            }
        }
    }
    rep.identifiable = identifiable;
    if (!identifiable)
        rep.failures.push_back("identifiability: distinct theta produce the same symbol on l <= L");
}

}  // namespace

AssumptionReport validate_assumptions(const SpectralModel& model) {
    AssumptionReport rep;
    check_alpha(model, rep);
    check_roots(model, rep);
    check_short_memory_bounds(model, rep);
    check_slow_variation(model, rep);
    if (rep.failures.empty()) check_integrability(model, rep);
    rep.ok = rep.failures.empty();
    return rep;
}

void require_valid(const SpectralModel& model) {
    const AssumptionReport rep = validate_assumptions(model);
    if (rep.ok) return;
    std::string msg = "model validation failed:";
    for (const auto& f : rep.failures) msg += " [" + f + "]";
    throw ValidationError(msg);
}

}  // namespace lrdspec
