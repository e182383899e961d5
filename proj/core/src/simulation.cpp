#include "lrdspec/simulation.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <vector>

#include "lrdspec/errors.hpp"
#include "lrdspec/fft.hpp"
#include "lrdspec/parallel.hpp"
#include "lrdspec/rng.hpp"

namespace lrdspec {

SamplePath::SamplePath(BasisSpec basis_, Eigen::MatrixXd coeffs_, SimMeta meta_)
    : basis(std::move(basis_)), T(coeffs_.rows()), coeffs(std::move(coeffs_)), meta(std::move(meta_)) {
    if (T < 2) throw ValidationError("SamplePath: need T >= 2");
    if (coeffs.cols() != basis.L) throw ValidationError("SamplePath: coeffs must be T x L");
    if (!coeffs.allFinite()) throw ValidationError("SamplePath: non-finite coefficient");
}

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void check_theta(const SpectralModel& model, const Theta& theta0) {
    if (!model.theta_domain.contains(theta0))
        throw ValidationError("simulate: theta0 outside the declared domain");
}

}  // namespace

SamplePath simulate_gaussian(const SpectralModel& model, const Theta& theta0, long T,
                             const SimConfig& cfg) {
    if (T < 2) throw ValidationError("simulate: need T >= 2");
    if (cfg.embed_factor < 2 || !is_power_of_two(cfg.embed_factor))
        throw ValidationError("simulate: embed_factor must be a power of two >= 2");
    check_theta(model, theta0);
    require_valid(model);

    const long n_lag = static_cast<long>(cfg.embed_factor) * T;
    const long M = 2 * n_lag;  // circulant size
    const auto tables = covariance_tables(model, theta0, n_lag, cfg.threads);

    const int L = model.basis.L;
    Eigen::MatrixXd coeffs(T, L);
    parallel_for(L, cfg.threads, [&](long lc) {
        const int l = static_cast<int>(lc) + 1;
        const std::vector<double>& r = tables[l - 1];

        std::vector<std::complex<double>> circ(M);
        for (long j = 0; j <= n_lag; ++j) circ[j] = r[j];
        for (long j = n_lag + 1; j < M; ++j) circ[j] = r[M - j];
        fft_forward(circ);

        double neg_mass = 0.0, tot_mass = 0.0;
        std::vector<double> eig(M);
        for (long k = 0; k < M; ++k) {
            eig[k] = circ[k].real();
            tot_mass += std::abs(eig[k]);
            if (eig[k] < 0.0) neg_mass += -eig[k];
        }
        if (neg_mass > cfg.negative_mass_tol * tot_mass)
            throw NumericalError(
                "circulant embedding: negative eigenvalue mass " + std::to_string(neg_mass / tot_mass) +
                " of the spectrum; increase embed_factor or use the ma_truncation method");
        for (long k = 0; k < M; ++k) eig[k] = std::max(eig[k], 0.0);

        // Hermitian complex-Gaussian spectrum: V_{M-k} = conj(V_k).
        const CounterRng rng(cfg.seed, static_cast<std::uint64_t>(l));
        std::vector<std::complex<double>> v(M);
        v[0] = std::sqrt(eig[0]) * rng.normal(0);
        v[M / 2] = std::sqrt(eig[M / 2]) * rng.normal(1);
        for (long k = 1; k < M / 2; ++k) {
            const double s = std::sqrt(0.5 * eig[k]);
            v[k] = std::complex<double>(s * rng.normal(2 * k), s * rng.normal(2 * k + 1));
            v[M - k] = std::conj(v[k]);
        }
        fft_forward(v);
        const double scale = 1.0 / std::sqrt(static_cast<double>(M));
        for (long t = 0; t < T; ++t) coeffs(t, lc) = v[t].real() * scale;
    });

    return SamplePath(model.basis, std::move(coeffs), SimMeta{theta0, cfg.seed, "circulant"});
}

SamplePath simulate_ma(const SpectralModel& model, const Theta& theta0, long T,
                       const SimConfig& cfg) {
    if (T < 2) throw ValidationError("simulate: need T >= 2");
    if (cfg.J < 64) throw ValidationError("simulate: MA truncation length J must be >= 64");
    check_theta(model, theta0);
    require_valid(model);
    const FarimaRational& farima = model.farima();

    const int L = model.basis.L;
    const long J = cfg.J;
    Eigen::MatrixXd coeffs(T, L);
    parallel_for(L, cfg.threads, [&](long lc) {
        const int l = static_cast<int>(lc) + 1;
        const std::vector<double> b = ma_coefficients(model, l, theta0, static_cast<int>(J));
        const double sd = std::sqrt(farima.sigma_eigs[l - 1]);

        const CounterRng rng(cfg.seed, static_cast<std::uint64_t>(l));
        std::vector<double> eta(T + J);
        for (long i = 0; i < T + J; ++i) eta[i] = sd * rng.normal(static_cast<std::uint64_t>(i));

        // Observation t (1-based) sits at innovation index t-1+J; the first J
        // innovations only feed the burn-in.
        for (long t = 0; t < T; ++t) {
            double acc = 0.0;
            const long base = t + J;
            for (long j = 0; j <= J; ++j) acc += b[j] * eta[base - j];
            coeffs(t, lc) = acc;
        }
    });

    return SamplePath(model.basis, std::move(coeffs), SimMeta{theta0, cfg.seed, "ma_truncation"});
}

Eigen::MatrixXd empirical_covariance(const SamplePath& path, long lag) {
    const long T = path.T;
    if (std::labs(lag) >= T) throw ValidationError("empirical covariance: |lag| must be < T");
    if (lag < 0) return empirical_covariance(path, -lag).transpose();
    const long n = T - lag;
    const Eigen::MatrixXd lead = path.coeffs.bottomRows(n);   // rows lag..T-1
    const Eigen::MatrixXd trail = path.coeffs.topRows(n);     // rows 0..T-1-lag
    return (lead.transpose() * trail) / static_cast<double>(T);
}

}  // namespace lrdspec
