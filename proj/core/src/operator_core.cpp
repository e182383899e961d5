#include "lrdspec/operator_core.hpp"

#include <cmath>
#include <numbers>

#include "lrdspec/errors.hpp"

namespace lrdspec {

namespace {
constexpr double kPi = std::numbers::pi;
}

BasisSpec::BasisSpec(int L_, std::vector<std::string> labels_) : L(L_), labels(std::move(labels_)) {
    if (L < 1) throw ValidationError("BasisSpec: truncation level L must be >= 1");
    if (!labels.empty() && static_cast<int>(labels.size()) != L)
        throw ValidationError("BasisSpec: labels must be empty or have length L");
}

bool same_basis(const BasisSpec& a, const BasisSpec& b) { return a.L == b.L; }

DiagonalOperator::DiagonalOperator(BasisSpec basis_, Eigen::VectorXd values_, bool require_positive)
    : basis(std::move(basis_)), values(std::move(values_)) {
    if (values.size() != basis.L)
        throw ValidationError("DiagonalOperator: values length must equal basis L");
    if (require_positive && (values.array() <= 0.0).any())
        throw ValidationError("DiagonalOperator: positivity requested but some value is <= 0");
}

Eigen::MatrixXcd DiagonalOperator::to_dense() const {
    return values.cast<std::complex<double>>().asDiagonal();
}

HermitianFrame::HermitianFrame(BasisSpec basis_, Eigen::MatrixXcd entries_)
    : basis(std::move(basis_)), entries(std::move(entries_)) {
    if (entries.rows() != basis.L || entries.cols() != basis.L)
        throw ValidationError("HermitianFrame: entries must be L x L");
    const double dev = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    if (dev > kHermitianTol)
        throw ValidationError("HermitianFrame: entries deviate from conjugate transpose by " +
                              std::to_string(dev));
}

FrequencyGrid FrequencyGrid::fourier(long T) {
    if (T < 2) throw ValidationError("FrequencyGrid::fourier: T must be >= 2");
    FrequencyGrid g;
    g.kind = Kind::fourier;
    g.fourier_T = T;
    g.nodes.resize(T - 1);
    g.weights.assign(T - 1, 2.0 * kPi / T);
    for (long j = 1; j < T; ++j) g.nodes[j - 1] = 2.0 * kPi * j / T;
    g.covered_length = 2.0 * kPi * (T - 1) / T;
    return g;
}

namespace {

FrequencyGrid mirror(const PanelRule& half, const QuadratureSettings& s) {
    FrequencyGrid g;
    g.kind = FrequencyGrid::Kind::quadrature;
    g.settings = s;
    const std::size_t n = half.nodes.size();
    g.nodes.resize(2 * n);
    g.weights.resize(2 * n);
    for (std::size_t i = 0; i < n; ++i) {  // negative side, ascending
        g.nodes[i] = -half.nodes[n - 1 - i];
        g.weights[i] = half.weights[n - 1 - i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        g.nodes[n + i] = half.nodes[i];
        g.weights[n + i] = half.weights[i];
    }
    g.covered_length = 2.0 * (kPi - s.omega_min);
    return g;
}

}  // namespace

FrequencyGrid FrequencyGrid::symmetric_quadrature(const QuadratureSettings& s) {
    return mirror(positive_half_rule(s), s);
}

FrequencyGrid FrequencyGrid::symmetric_quadrature_refined(const QuadratureSettings& s,
                                                          double t_osc) {
    return mirror(positive_half_rule_refined(s, t_osc), s);
}

double trace_norm(const HermitianFrame& f) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(f.entries, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

double hs_norm(const HermitianFrame& f) { return f.entries.norm(); }

double op_norm(const DiagonalOperator& d) { return d.values.cwiseAbs().maxCoeff(); }

Eigen::MatrixXcd compose(const HermitianFrame& f, const DiagonalOperator& d) {
    if (!same_basis(f.basis, d.basis)) throw ValidationError("compose: basis mismatch");
    return f.entries * d.values.cast<std::complex<double>>().asDiagonal();
}

HermitianFrame integrate_frames(std::span<const HermitianFrame> frames, const FrequencyGrid& grid) {
    if (frames.size() != grid.size())
        throw ValidationError("integrate_frames: one frame per grid node required");
    if (frames.empty()) throw ValidationError("integrate_frames: empty grid");
    const BasisSpec& basis = frames[0].basis;
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(basis.L, basis.L);
    for (std::size_t j = 0; j < frames.size(); ++j) {
        if (!same_basis(frames[j].basis, basis))
            throw ValidationError("integrate_frames: basis mismatch across frames");
        acc += grid.weights[j] * frames[j].entries;
    }
    return HermitianFrame(basis, std::move(acc));
}

}  // namespace lrdspec
