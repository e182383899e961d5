#include "lrdspec/spectral.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "lrdspec/errors.hpp"
#include "lrdspec/fft.hpp"
#include "lrdspec/parallel.hpp"

namespace lrdspec {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

FdftFrame fdft(const SamplePath& path) {
    const long T = path.T;
    const int L = path.basis.L;
    FdftFrame out{path.basis, FrequencyGrid::fourier(T), Eigen::MatrixXcd(T - 1, L), T};
    const double norm = 1.0 / std::sqrt(kTwoPi * static_cast<double>(T));
    std::vector<std::complex<double>> buf(T);
    for (int l = 0; l < L; ++l) {
        // The sample is indexed t = 1..T, so the FFT over X_{n+1} picks up a
        // phase e^{-i omega_j} relative to the usual 0-based transform.
        for (long n = 0; n < T; ++n) buf[n] = path.coeffs(n, l);
        fft_forward(buf);
        for (long j = 1; j < T; ++j) {
            const double omega = kTwoPi * j / static_cast<double>(T);
            out.values(j - 1, l) = norm * std::polar(1.0, -omega) * buf[j];
        }
    }
    return out;
}

Eigen::VectorXcd fdft_at(const SamplePath& path, double omega) {
    const long T = path.T;
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(path.basis.L);
    for (long t = 1; t <= T; ++t)
        acc += std::polar(1.0, -omega * t) * path.coeffs.row(t - 1).transpose().cast<std::complex<double>>();
    return acc / std::sqrt(kTwoPi * static_cast<double>(T));
}

PeriodogramSet PeriodogramSet::from_frames(BasisSpec basis, FrequencyGrid grid,
                                           std::vector<Eigen::MatrixXcd> frames, long T) {
    if (frames.size() != grid.size())
        throw ValidationError("periodogram set: one frame per grid node required");
    return PeriodogramSet{std::move(basis), std::move(grid), std::move(frames), T};
}

void PeriodogramSet::validate() const {
    for (const auto& frame : frames) {
        const double herm = (frame - frame.adjoint()).cwiseAbs().maxCoeff();
        if (herm > HermitianFrame::kHermitianTol)
            throw ValidationError("periodogram set: frame is not Hermitian");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(frame, Eigen::EigenvaluesOnly);
        const auto& ev = es.eigenvalues();  // ascending
        const double top = ev[ev.size() - 1];
        if (ev[0] < -1e-10 * std::max(top, 1e-300))
            throw ValidationError("periodogram set: frame is not positive semidefinite");
        if (ev.size() > 1 && ev[ev.size() - 2] > 1e-10 * std::max(top, 1e-300))
            throw ValidationError("periodogram set: frame has rank above one");
    }
}

PeriodogramSet periodogram(const FdftFrame& f) {
    std::vector<Eigen::MatrixXcd> frames;
    frames.reserve(f.values.rows());
    for (Eigen::Index j = 0; j < f.values.rows(); ++j) {
        const Eigen::VectorXcd v = f.values.row(j).transpose();
        frames.push_back(v * v.adjoint());
    }
    return PeriodogramSet{f.basis, f.grid, std::move(frames), f.T};
}

double fejer(double omega, long T) {
    if (T < 1) throw ValidationError("fejer: T must be >= 1");
    const double s = std::sin(0.5 * omega);
    if (std::abs(s) < 1e-12) return static_cast<double>(T);
    const double num = std::sin(0.5 * static_cast<double>(T) * omega);
    return num * num / (static_cast<double>(T) * s * s);
}

namespace {

// (1/2pi) [ r_0 + 2 sum_{u=1}^{T-1} (1 - u/T) r_u cos(omega u) ] via the
// cosine recurrence.
double expected_periodogram_value(const std::vector<double>& r, long T, double omega) {
    double acc = r[0];
    const double c1 = std::cos(omega);
    double c_prev = 1.0, c = c1;
    for (long u = 1; u < T; ++u) {
        acc += 2.0 * (1.0 - static_cast<double>(u) / T) * r[u] * c;
        const double c_next = 2.0 * c1 * c - c_prev;
        c_prev = c;
        c = c_next;
    }
    return acc / kTwoPi;
}

}  // namespace

DiagonalOperator expected_periodogram(const SpectralModel& model, const Theta& theta, long T,
                                      double omega, const QuadratureSettings& quad) {
    if (omega == 0.0) throw ValidationError("expected periodogram: omega = 0 excluded");
    if (T < 2) throw ValidationError("expected periodogram: T must be >= 2");
    SpectralModel m = model;
    m.quad = quad;
    const auto tables = covariance_tables(m, theta, T - 1);
    Eigen::VectorXd values(model.basis.L);
    for (int l = 0; l < model.basis.L; ++l) {
        values[l] = expected_periodogram_value(tables[l], T, omega);
        if (values[l] < -1e-10)
            throw NumericalError("expected periodogram: negative diagonal value " +
                                 std::to_string(values[l]));
    }
    return DiagonalOperator(model.basis, std::move(values));
}

double integrated_bias(const SpectralModel& model, const Theta& theta0, long T,
                       const QuadratureSettings& quad, int threads) {
    if (T < 2) throw ValidationError("integrated bias: T must be >= 2");
    SpectralModel m = model;
    m.quad = quad;
    const int L = model.basis.L;
    const auto tables = covariance_tables(m, theta0, T - 1, threads);

    // Group components whose covariance tables are proportional; their
    // integrated differences are the same up to the scale.
    std::vector<int> rep(L, -1);
    std::vector<double> scale(L, 1.0);
    for (int l = 0; l < L; ++l) {
        for (int k = 0; k < l; ++k) {
            if (rep[k] != k) continue;
            const double s = tables[l][0] / tables[k][0];
            bool match = true;
            for (long u : {0L, 1L, 2L, T / 2, T - 1}) {
                if (u < 0 || u >= static_cast<long>(tables[l].size())) continue;
                if (std::abs(tables[l][u] - s * tables[k][u]) >
                    1e-12 * std::max(std::abs(tables[l][u]), 1e-300)) {
                    match = false;
                    break;
                }
            }
            for (double w : {0.5, 1.5, 3.0}) {
                if (std::abs(spectral_density_symbol(m, w, l + 1, theta0) -
                             s * spectral_density_symbol(m, w, k + 1, theta0)) >
                    1e-12 * std::abs(spectral_density_symbol(m, w, l + 1, theta0)))
                    match = false;
            }
            if (match) {
                rep[l] = k;
                scale[l] = s;
                break;
            }
        }
        if (rep[l] < 0) {
            rep[l] = l;
            scale[l] = 1.0;
        }
    }

    // Both integrands on the oscillation-refined symmetric grid (evaluated on
    // the positive half and doubled; everything here is even in omega).
    const PanelRule rule = positive_half_rule_refined(quad, static_cast<double>(T));
    const long n_nodes = static_cast<long>(rule.nodes.size());
    std::vector<double> delta(L, 0.0);
    for (int l = 0; l < L; ++l) {
        if (rep[l] != l) continue;
        std::vector<double> node_vals(n_nodes);
        parallel_for(n_nodes, threads, [&](long i) {
            const double w = rule.nodes[i];
            const double f_val = spectral_density_symbol(m, w, l + 1, theta0);
            const double fT_val = expected_periodogram_value(tables[l], T, w);
            node_vals[i] = rule.weights[i] * std::abs(f_val - fT_val);
        });
        double acc = 0.0;
        for (long i = 0; i < n_nodes; ++i) acc += node_vals[i];
        delta[l] = 2.0 * acc;
    }
    double sq = 0.0;
    for (int l = 0; l < L; ++l) {
        const double d = delta[rep[l]] * scale[l];
        sq += d * d;
    }
    if (!std::isfinite(sq)) throw NumericalError("integrated bias: quadrature failure");
    return std::sqrt(sq);
}

}  // namespace lrdspec
