// Test-only oracles: independent reference computations that the library is
// checked against. Everything here is deliberately brute force and stays out
// of the production code path.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "lrdspec/rng.hpp"
#include "lrdspec/simulation.hpp"

namespace oracles {

// Dense singular-value norms. The production routines run a self-adjoint
// eigensolver; Jacobi SVD is an algorithmically independent route to the
// same values for Hermitian input.
inline double trace_norm_eigen(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues().sum();
}
inline double hs_norm_eigen(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return std::sqrt(svd.singularValues().cwiseAbs2().sum());
}
inline double op_norm_eigen(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues().maxCoeff();
}

// Random Hermitian matrix from the counter-based generator.
inline Eigen::MatrixXcd random_hermitian(int n, std::uint64_t seed) {
    const lrdspec::CounterRng rng(seed, 7);
    Eigen::MatrixXcd a(n, n);
    std::uint64_t c = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double re = rng.normal(c);
            const double im = rng.normal(c + 1);
            a(i, j) = {re, im};
            c += 2;
        }
    }
    return 0.5 * (a + a.adjoint()).eval();
}

// O(T L) direct fDFT sum at one frequency, t starting at 1.
inline Eigen::VectorXcd direct_fdft(const Eigen::MatrixXd& coeffs, double omega) {
    const long T = coeffs.rows();
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(coeffs.cols());
    for (long t = 1; t <= T; ++t)
        acc += std::polar(1.0, -omega * t) *
               coeffs.row(t - 1).transpose().cast<std::complex<double>>();
    return acc / std::sqrt(2.0 * M_PI * static_cast<double>(T));
}

// Direct |sum e^{-i t omega}|^2 / T.
inline double direct_fejer(double omega, long T) {
    std::complex<double> s(0.0, 0.0);
    for (long t = 1; t <= T; ++t) s += std::polar(1.0, -omega * t);
    return std::norm(s) / static_cast<double>(T);
}

// Exact autocovariance of the pure fractional model with difference kernel:
// f(w) = (sigma2 / 2 pi) |1 - e^{-iw}|^{-2d}. Gamma-ratio recursion.
inline double fractional_cov_exact(double d, double sigma2, long t) {
    double g = sigma2 * std::tgamma(1.0 - 2.0 * d) /
               (std::tgamma(1.0 - d) * std::tgamma(1.0 - d));
    for (long k = 1; k <= t; ++k) g *= (k - 1.0 + d) / (k - d);
    return g;
}

// a_j = Gamma(j + d) / (Gamma(j + 1) Gamma(d)) by direct log-Gamma.
inline double fractional_coef_direct(double d, long j) {
    if (j == 0) return 1.0;
    return std::exp(std::lgamma(j + d) - std::lgamma(j + 1.0) - std::lgamma(d));
}

// O(T^2 L^2) brute-force biased empirical covariance.
inline Eigen::MatrixXd brute_force_cov(const Eigen::MatrixXd& coeffs, long lag) {
    const long T = coeffs.rows();
    const int L = static_cast<int>(coeffs.cols());
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(L, L);
    for (long t = 0; t + lag < T; ++t)
        for (int k = 0; k < L; ++k)
            for (int m = 0; m < L; ++m) acc(k, m) += coeffs(t + lag, k) * coeffs(t, m);
    return acc / static_cast<double>(T);
}

// Sample autocovariance (biased) of one component at one lag.
inline double sample_acf(const Eigen::MatrixXd& coeffs, int l, long lag) {
    const long T = coeffs.rows();
    double acc = 0.0;
    for (long t = 0; t + lag < T; ++t) acc += coeffs(t + lag, l - 1) * coeffs(t, l - 1);
    return acc / static_cast<double>(T);
}

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double stddev(const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / (static_cast<double>(v.size()) - 1.0));
}

}  // namespace oracles
