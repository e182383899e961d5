#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lrdspec/operator_core.hpp"
#include "lrdspec/simulation.hpp"

namespace lrdspec {

/// Functional DFT of a sample on the Fourier grid omega_j = 2 pi j / T,
/// j = 1..T-1. Row j-1, column l-1 holds
///   X~_{omega_j}(l) = (2 pi T)^{-1/2} sum_{t=1}^{T} X_t(l) e^{-i omega_j t}.
struct FdftFrame {
    BasisSpec basis;
    FrequencyGrid grid;
    Eigen::MatrixXcd values;  // (T-1) x L
    long T = 0;
};

FdftFrame fdft(const SamplePath& path);

/// fDFT coefficient vector at an arbitrary frequency, by the direct sum.
Eigen::VectorXcd fdft_at(const SamplePath& path, double omega);

/// Rank-one periodogram frames p_{omega_j} = X~ (x) conj(X~) per Fourier node.
struct PeriodogramSet {
    BasisSpec basis;
    FrequencyGrid grid;
    std::vector<Eigen::MatrixXcd> frames;
    long T = 0;

    /// Wraps externally assembled frames (diagnostics, mixtures); skips the
    /// rank-one check that production sets satisfy by construction.
    static PeriodogramSet from_frames(BasisSpec basis, FrequencyGrid grid,
                                      std::vector<Eigen::MatrixXcd> frames, long T);

    /// Asserts each frame is Hermitian PSD with second eigenvalue below
    /// 1e-10 times the largest.
    void validate() const;
};

PeriodogramSet periodogram(const FdftFrame& f);

/// Fejer kernel F_T(omega) = sin^2(T omega / 2) / (T sin^2(omega / 2)),
/// with F_T(0) = T.
double fejer(double omega, long T);

/// Expected periodogram at one frequency,
///   F^(T)_omega(l) = (1/2pi) sum_{|u|<T} (1 - |u|/T) r_u(l) e^{-i omega u},
/// assembled from quadrature autocovariances. Values below -1e-10 raise a
/// numerical-consistency error.
DiagonalOperator expected_periodogram(const SpectralModel& model, const Theta& theta, long T,
                                      double omega, const QuadratureSettings& quad);

/// Integrated deviation of the expected periodogram from the spectral
/// density: the Euclidean norm over components of
///   Int |f(omega, l) - F^(T)_omega(l)| d omega,
/// taken over the symmetric grid with the hole (-omega_min, omega_min)
/// excluded from both integrands. The absolute value sits inside the
/// integral: the signed per-component integrals cancel exactly for every T
/// (both sides integrate to r_0(l)), so the integrated absolute deviation is
/// the quantity whose decay carries information.
double integrated_bias(const SpectralModel& model, const Theta& theta0, long T,
                       const QuadratureSettings& quad, int threads = 1);

}  // namespace lrdspec
