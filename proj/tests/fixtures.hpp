// Shared model fixtures for the test suites.
#pragma once

#include <cmath>

#include "lrdspec/model_config.hpp"
#include "lrdspec/models.hpp"

namespace fixtures {

using namespace lrdspec;

/// Pure fractional noise: FARIMA(0, alpha/2, 0) per component with
/// innovation eigenvalues lambda_l = l^{lambda_exp}, constant alpha family.
inline SpectralModel pure_fractional(int L, LrdKernel kernel, double domain_lo = 0.05,
                                     double domain_hi = 0.95, double lambda_exp = -2.0,
                                     double clamp_lo = 1e-15, double clamp_hi = 0.99) {
    FarimaRational f;
    f.sigma_eigs.resize(L);
    for (int l = 1; l <= L; ++l) f.sigma_eigs[l - 1] = std::pow(static_cast<double>(l), lambda_exp);
    f.ar.assign(L, {});
    f.ma.assign(L, {});
    LongMemorySymbol alpha;
    alpha.family = LongMemorySymbol::Family::constant;
    alpha.clamp_lo = clamp_lo;
    alpha.clamp_hi = clamp_hi;
    return SpectralModel(BasisSpec(L), alpha, f, kernel, ThetaDomain{{domain_lo}, {domain_hi}});
}

/// Same innovation structure with per-component AR/MA coefficient lists.
inline SpectralModel farima(int L, LrdKernel kernel, std::vector<double> ar,
                            std::vector<double> ma, double domain_lo = 0.05,
                            double domain_hi = 0.95) {
    FarimaRational f;
    f.sigma_eigs.resize(L);
    for (int l = 1; l <= L; ++l) f.sigma_eigs[l - 1] = std::pow(static_cast<double>(l), -2.0);
    f.ar.assign(L, ar);
    f.ma.assign(L, ma);
    LongMemorySymbol alpha;
    alpha.family = LongMemorySymbol::Family::constant;
    alpha.clamp_lo = 1e-15;
    alpha.clamp_hi = 0.99;
    return SpectralModel(BasisSpec(L), alpha, f, kernel, ThetaDomain{{domain_lo}, {domain_hi}});
}

/// Two-parameter alpha family over pure fractional noise.
inline SpectralModel two_param(int L, LongMemorySymbol::Family family, LrdKernel kernel,
                               ThetaDomain domain) {
    FarimaRational f;
    f.sigma_eigs.resize(L);
    for (int l = 1; l <= L; ++l) f.sigma_eigs[l - 1] = std::pow(static_cast<double>(l), -2.0);
    f.ar.assign(L, {});
    f.ma.assign(L, {});
    LongMemorySymbol alpha;
    alpha.family = family;
    alpha.clamp_lo = 0.01;
    alpha.clamp_hi = 0.99;
    return SpectralModel(BasisSpec(L), alpha, f, kernel, std::move(domain));
}

/// Tapered rational symbol on a lambda-grid, P/Q both constant by default.
inline SpectralModel tapered(int L, double p0 = 1.0, double q0 = 1.0) {
    TaperedRational t;
    t.p_coef = Eigen::MatrixXd::Constant(1, 1, p0);
    t.q_coef = Eigen::MatrixXd::Constant(1, 1, q0);
    t.lambda_grid.resize(L);
    for (int l = 0; l < L; ++l) t.lambda_grid[l] = 0.5 + (L == 1 ? 0.0 : 1.0 * l / (L - 1));
    LongMemorySymbol alpha;
    alpha.family = LongMemorySymbol::Family::constant;
    alpha.clamp_lo = 0.01;
    alpha.clamp_hi = 0.99;
    return SpectralModel(BasisSpec(L), alpha, t, LrdKernel::power_law,
                         ThetaDomain{{0.05}, {0.9}});
}

}  // namespace fixtures
