#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrdspec/quadrature.hpp"

namespace lrdspec {

/// Truncated orthonormal basis {phi_1..phi_L}. Index l carries the rank-one
/// projection phi_l (x) phi_l, so every model operator in this library is
/// simultaneously diagonal in this basis.
struct BasisSpec {
    int L = 0;
    std::vector<std::string> labels;  // optional, size 0 or L

    explicit BasisSpec(int L_, std::vector<std::string> labels_ = {});
};

bool same_basis(const BasisSpec& a, const BasisSpec& b);

/// Operator diagonal in the fixed basis; `values[l-1]` is the symbol at index l.
struct DiagonalOperator {
    BasisSpec basis;
    Eigen::VectorXd values;

    DiagonalOperator(BasisSpec basis_, Eigen::VectorXd values_, bool require_positive = false);

    Eigen::MatrixXcd to_dense() const;
};

/// Dense complex Hermitian matrix at one frequency. Construction rejects
/// entries farther than 1e-12 (absolute) from their conjugate transpose
/// rather than symmetrizing.
struct HermitianFrame {
    BasisSpec basis;
    Eigen::MatrixXcd entries;

    HermitianFrame(BasisSpec basis_, Eigen::MatrixXcd entries_);

    static constexpr double kHermitianTol = 1e-12;
};

/// Frequency nodes with quadrature weights. Zero is never a node: Fourier
/// grids start at j = 1 and quadrature grids keep the open hole
/// (-omega_min, omega_min).
struct FrequencyGrid {
    enum class Kind { fourier, quadrature };

    Kind kind = Kind::quadrature;
    std::vector<double> nodes;
    std::vector<double> weights;
    long fourier_T = 0;                        // set for Kind::fourier
    std::optional<QuadratureSettings> settings;  // set for Kind::quadrature
    double covered_length = 0.0;

    /// omega_j = 2 pi j / T for j = 1..T-1, each weight 2 pi / T.
    static FrequencyGrid fourier(long T);

    /// Symmetric geometric-panel rule over [-pi, -omega_min] U [omega_min, pi].
    static FrequencyGrid symmetric_quadrature(const QuadratureSettings& s);

    /// Symmetric rule refined so panels resolve e^{i omega t} up to |t| = t_osc.
    static FrequencyGrid symmetric_quadrature_refined(const QuadratureSettings& s, double t_osc);

    std::size_t size() const { return nodes.size(); }
};

/// Sum of singular values; for the Hermitian frames handled here, the sum of
/// absolute eigenvalues.
double trace_norm(const HermitianFrame& f);

/// Frobenius norm of the entries, sqrt(trace_norm(f* f)).
double hs_norm(const HermitianFrame& f);

double op_norm(const DiagonalOperator& d);

/// f * diag(d). The product of a Hermitian and a diagonal matrix need not be
/// Hermitian; downstream code consumes only its diagonal.
Eigen::MatrixXcd compose(const HermitianFrame& f, const DiagonalOperator& d);

/// Weighted sum  sum_j weights[j] * frames[j]  over the grid nodes.
HermitianFrame integrate_frames(std::span<const HermitianFrame> frames, const FrequencyGrid& grid);

}  // namespace lrdspec
