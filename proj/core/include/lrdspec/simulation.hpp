#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "lrdspec/models.hpp"

namespace lrdspec {

struct SimMeta {
    Theta theta_true;
    std::uint64_t seed = 0;
    std::string method;
};

/// Observed functional sample in basis coordinates: coeffs(t-1, l-1) = <X_t, phi_l>.
struct SamplePath {
    BasisSpec basis;
    long T = 0;
    Eigen::MatrixXd coeffs;  // T x L
    SimMeta meta;

    SamplePath(BasisSpec basis_, Eigen::MatrixXd coeffs_, SimMeta meta_);
};

enum class SimMethod { circulant, ma_truncation };

struct SimConfig {
    SimMethod method = SimMethod::circulant;
    std::uint64_t seed = 0;
    int J = 0;             // MA truncation length (ma_truncation only), >= 64
    int embed_factor = 8;  // circulant only; power of two, >= 2
    int threads = 1;

    /// Fraction of the circulant spectrum's absolute mass that may sit in
    /// clipped negative eigenvalues before simulation refuses to proceed.
    double negative_mass_tol = 1e-6;
};

/// Exact second-order Gaussian simulation. Components are mutually
/// independent stationary series (the model is diagonal); component l gets
/// the autocovariance r_t(l, theta0) embedded in a circulant of length
/// 2 * embed_factor * T and synthesized through the FFT. Deterministic in
/// (seed, component, index) regardless of threading.
SamplePath simulate_gaussian(const SpectralModel& model, const Theta& theta0, long T,
                             const SimConfig& cfg);

/// Truncated MA(infinity) simulator for cross-validation,
/// X_t(l) = sum_{j<=J} b_j(l) eta_{t-j}(l) with N(0, sigma_eigs[l])
/// innovations; a burn-in of J samples is discarded.
SamplePath simulate_ma(const SpectralModel& model, const Theta& theta0, long T,
                       const SimConfig& cfg);

/// (1/T) sum_t X_{t+lag} (x) X_t over valid t (biased normalization). The
/// result is frame-shaped; it is Hermitian only at lag 0.
Eigen::MatrixXd empirical_covariance(const SamplePath& path, long lag);

}  // namespace lrdspec
