#pragma once

#include <Eigen/Dense>
#include <string>
#include <variant>
#include <vector>

#include "lrdspec/operator_core.hpp"
#include "lrdspec/quadrature.hpp"

namespace lrdspec {

using Theta = std::vector<double>;

/// Parametric long-memory symbol alpha(l, theta) in (0, 1). Three shipped
/// families:
///   constant     (p = 1)  alpha = theta_1
///   log_decay    (p = 2)  alpha = theta_1 + theta_2 / (1 + ln l)
///   exponential  (p = 2)  alpha = theta_1 + theta_2 * exp(-(l - 1))
/// Values outside [clamp_lo, clamp_hi] are hard validation errors, never
/// silently clamped.
struct LongMemorySymbol {
    enum class Family { constant, log_decay, exponential };

    Family family = Family::constant;
    double clamp_lo = 0.01;
    double clamp_hi = 0.99;

    int param_dim() const { return family == Family::constant ? 1 : 2; }
    double raw(int l, const Theta& theta) const;  // no range check
};

/// Compact box in R^p for the long-memory parameter.
struct ThetaDomain {
    std::vector<double> lower, upper;

    int dim() const { return static_cast<int>(lower.size()); }
    bool contains(const Theta& theta, double slack = 1e-12) const;
    /// Axis-aligned grid with `points` values per dimension, lexicographic order.
    std::vector<Theta> grid(int points) const;
    std::vector<Theta> corners() const;
};

/// Short-memory symbol, per-component rational ARMA form:
///   M(omega, l) = (sigma_eigs[l] / 2 pi) |Psi_l(e^{-i omega}) / Phi_l(e^{-i omega})|^2
/// with Phi_l(z) = 1 - sum_j ar[l][j] z^{j+1} and Psi_l(z) = 1 - sum_j ma[l][j] z^{j+1}.
struct FarimaRational {
    Eigen::VectorXd sigma_eigs;           // innovation covariance eigenvalues, > 0
    std::vector<std::vector<double>> ar;  // one coefficient list per component
    std::vector<std::vector<double>> ma;
};

/// Short-memory symbol from a tapered positive rational function on a
/// lambda-grid:  M(omega, l) = (P / Q)(lambda_l, omega) * h(omega), with the
/// even taper h vanishing at +-pi. Polynomials use even powers of omega so
/// the symbol stays even.
struct TaperedRational {
    enum class Taper { cosine_squared };

    Eigen::MatrixXd p_coef;  // coefficient (i, j) multiplies lambda^i * omega^(2j)
    Eigen::MatrixXd q_coef;
    std::vector<double> lambda_grid;  // one lambda per basis index
    Taper taper = Taper::cosine_squared;
};

using ShortMemorySymbol = std::variant<FarimaRational, TaperedRational>;

enum class LrdKernel { exact_diff, power_law };

/// K(omega): |1 - e^{-i omega}| = 2 sin(|omega|/2) for exact_diff, |omega|
/// for power_law. Both behave like |omega| at zero.
double kernel_base(LrdKernel kernel, double omega);

/// Semiparametric spectral model: f(omega, l, theta) = M(omega, l) * K(omega)^{-alpha(l, theta)}.
struct SpectralModel {
    BasisSpec basis;
    LongMemorySymbol alpha;
    ShortMemorySymbol short_memory;
    LrdKernel kernel = LrdKernel::exact_diff;
    ThetaDomain theta_domain;
    QuadratureSettings quad;

    SpectralModel(BasisSpec basis_, LongMemorySymbol alpha_, ShortMemorySymbol short_memory_,
                  LrdKernel kernel_, ThetaDomain theta_domain_, QuadratureSettings quad_ = {});

    bool is_farima() const { return std::holds_alternative<FarimaRational>(short_memory); }
    const FarimaRational& farima() const;
};

/// alpha(l, theta); errors if theta is outside the domain or the value
/// escapes the declared clamp bounds.
double alpha_eval(const SpectralModel& model, int l, const Theta& theta);

/// Short-memory symbol M(omega, l) > 0 (may vanish at +-pi for tapered models).
double m_symbol_eval(const SpectralModel& model, double omega, int l);

/// f(omega, l, theta); omega = 0 is a singularity error.
double spectral_density_symbol(const SpectralModel& model, double omega, int l, const Theta& theta);

/// r_t(l, theta) = Int e^{i omega t} f(omega, l, theta) d omega, by
/// oscillation-refined quadrature over the symmetric grid (panel width is
/// capped at pi/(4|t|)) plus the analytic sliver below omega_min. The
/// imaginary part must vanish to |Im| < 1e-8 |Re| + 1e-10 and is discarded.
double covariance_symbol(const SpectralModel& model, long t, int l, const Theta& theta,
                         const QuadratureSettings& quad);

/// r_0..r_max_lag for one component via the Filon pass; agrees with
/// covariance_symbol and costs O(panels) per lag independent of t.
std::vector<double> covariance_table(const SpectralModel& model, int l, const Theta& theta,
                                     long max_lag, int threads = 1);

/// Tables for all components. Components whose (alpha, ARMA shape) coincide
/// up to the innovation-eigenvalue scale share one Filon pass.
std::vector<std::vector<double>> covariance_tables(const SpectralModel& model, const Theta& theta,
                                                   long max_lag, int threads = 1);

/// Heavy-tail amplitude 2 Gamma(1-alpha) sin(pi alpha / 2) M(1/t, l) * t^{alpha-1}.
double lrd_asymptote(const SpectralModel& model, long t, int l, const Theta& theta);

/// Fractional coefficients a_j (a_0 = 1, a_j = a_{j-1} (j-1+d)/j with
/// d = alpha/2) convolved with the ARMA impulse response, j = 0..J.
std::vector<double> ma_coefficients(const SpectralModel& model, int l, const Theta& theta, int J);

struct AssumptionReport {
    bool ok = true;
    std::vector<std::string> failures;   // hard failures, by check name
    std::vector<std::string> warnings;   // soft findings (slow variation)

    double integral_sup_density = 0.0;   // max over theta grid of Int sup_l f
    double integral_rel_change = 0.0;    // under doubled per-panel resolution
    double m_emp = 0.0, m_up_emp = 0.0;  // short-memory bounds over the grid
    double min_root_modulus = 0.0;       // smallest AR/MA root modulus (FARIMA)
    double slow_variation_max_dev = 0.0;
    double alpha_min = 0.0, alpha_max = 0.0;
    bool identifiable = true;
};

/// Checks, over the quadrature grid and a theta grid on the domain:
/// integrability of sup_l f and its stability under refinement, positivity
/// bounds of M, AR/MA root locations and common roots, a slow-variation spot
/// check at small omega (warning only), the alpha range, and numerical
/// identifiability of the alpha family.
AssumptionReport validate_assumptions(const SpectralModel& model);

/// Throws ValidationError listing the report's failures, if any.
void require_valid(const SpectralModel& model);

}  // namespace lrdspec
