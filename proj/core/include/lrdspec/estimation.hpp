#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "lrdspec/models.hpp"
#include "lrdspec/spectral.hpp"

namespace lrdspec {

/// Weighting operator W_omega with symbol wtilde[l] * |omega|^beta. The
/// frequency factor tames the periodogram's divergence at zero; beta > 1 is
/// required for the consistency argument and enforced here.
struct WeightSymbol {
    Eigen::VectorXd wtilde;
    double beta = 2.0;

    WeightSymbol(Eigen::VectorXd wtilde_, double beta_);

    double min_wtilde() const { return wtilde.minCoeff(); }
    double max_wtilde() const { return wtilde.maxCoeff(); }
};

/// Kernel used on the estimation side for sigma^2, Upsilon and the log
/// weight. The standardization is |omega|^{-alpha} by default; the
/// difference-kernel variant is available as a configuration switch.
enum class StandardizationKernel { power_law, exact_diff };

/// Normalizing symbol Sigma^2_theta(l) = Int M(omega, l) wtilde[l]
/// K(omega)^{-alpha(l, theta)} |omega|^beta d omega over the symmetric grid.
/// Construction verifies the analytic power-integral bracket implied by the
/// model's empirical short-memory bounds.
struct Normalizer {
    Theta theta;
    Eigen::VectorXd sigma2;
    std::uint64_t quad_hash = 0;
};

Normalizer make_normalizer(const SpectralModel& model, const Theta& theta, const WeightSymbol& w,
                           const QuadratureSettings& quad,
                           StandardizationKernel kernel = StandardizationKernel::power_law);

/// Upsilon(omega, l, theta) = M(omega, l) / (K(omega)^{alpha(l, theta)} Sigma^2_theta(l)).
double upsilon_symbol(const SpectralModel& model, double omega, int l, const Theta& theta,
                      const Normalizer& norm,
                      StandardizationKernel kernel = StandardizationKernel::power_law);

/// log-weight symbol
///   w(omega, l, theta) = [ln M - ln Sigma^2 - alpha ln K(omega)] wtilde[l] |omega|^beta
/// = ln(Upsilon) * W(omega, l).
double log_weight_symbol(const SpectralModel& model, double omega, int l, const Theta& theta,
                         const Normalizer& norm, const WeightSymbol& w,
                         StandardizationKernel kernel = StandardizationKernel::power_law);

/// One row of the contrast surface: the per-component diagonal values and
/// their supremum (the estimation objective).
struct ContrastRow {
    Eigen::VectorXd values;
    double sup = 0.0;
};

/// U_{T,theta}(k) = -(2 pi / T) sum_j p_{omega_j}(k, k) w(omega_j, k, theta).
/// Fourier nodes above pi enter through their folded |omega| in (0, pi].
ContrastRow empirical_contrast(const PeriodogramSet& pset, const SpectralModel& model,
                               const Theta& theta, const Normalizer& norm, const WeightSymbol& w,
                               StandardizationKernel kernel = StandardizationKernel::power_law);

/// U_theta(k) = -Int f0(omega, k) w(omega, k, theta) d omega with
/// f0 = M K^{-alpha(k, theta0)}, the density of the standardized family at
/// theta0 (for power-law models this is the model density itself).
ContrastRow theoretical_contrast(const SpectralModel& model, const Theta& theta0,
                                 const Theta& theta, const Normalizer& norm, const WeightSymbol& w,
                                 const QuadratureSettings& quad,
                                 StandardizationKernel kernel = StandardizationKernel::power_law);

struct ContrastSurface {
    std::vector<Theta> thetas;
    std::vector<ContrastRow> rows;
};

struct OptimizerConfig {
    int grid_points = 21;  // coarse grid per dimension
    int max_iterations = 200;
    double simplex_tol = 1e-5;  // relative to the domain width
    int threads = 1;
};

struct EstimateResult {
    Theta theta_hat;
    double objective = 0.0;
    ContrastRow contrast_at_theta_hat;
    ContrastSurface grid_surface;
    std::vector<std::pair<Theta, double>> trace;  // every objective evaluation
};

/// theta_hat = argmin over the domain box of sup_k U_{T,theta}(k): a coarse
/// grid scan followed by box-projected simplex descent from the best grid
/// point. Ties break toward the lexicographically smallest theta; the
/// normalizer is rebuilt at every theta.
EstimateResult estimate_theta(const PeriodogramSet& pset, const SpectralModel& model,
                              const WeightSymbol& w, const OptimizerConfig& opt,
                              StandardizationKernel kernel = StandardizationKernel::power_law);

}  // namespace lrdspec
