#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lrdspec/errors.hpp"
#include "lrdspec/spectral.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace lrdspec;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

SamplePath random_path(const SpectralModel& model, long T, std::uint64_t seed) {
    SimConfig cfg;
    cfg.seed = seed;
    cfg.threads = 2;
    return simulate_gaussian(model, {0.4}, T, cfg);
}
}  // namespace

TEST_CASE("fdft matches the direct transform and is Hermitian in frequency") {
    const auto model = fixtures::pure_fractional(3, LrdKernel::exact_diff);
    const auto path = random_path(model, 16, 4);
    const auto f = fdft(path);
    REQUIRE(f.values.rows() == 15);
    for (long j = 1; j < 16; ++j) {
        const double omega = kTwoPi * j / 16.0;
        const Eigen::VectorXcd want = oracles::direct_fdft(path.coeffs, omega);
        CHECK((f.values.row(j - 1).transpose() - want).cwiseAbs().maxCoeff() < 1e-10);
    }
    // real input: value at omega_j = conj(value at 2 pi - omega_j)
    for (long j = 1; j < 16; ++j) {
        const Eigen::VectorXcd a = f.values.row(j - 1).transpose();
        const Eigen::VectorXcd b = f.values.row(16 - j - 1).transpose().conjugate();
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("fdft of the zero path vanishes") {
    const SamplePath zero(BasisSpec(2), Eigen::MatrixXd::Zero(32, 2), SimMeta{});
    CHECK(fdft(zero).values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("fdft at arbitrary frequencies matches the direct sum") {
    const auto model = fixtures::pure_fractional(2, LrdKernel::exact_diff);
    SimConfig cfg;
    cfg.seed = 12;
    const auto path = simulate_gaussian(model, {0.4}, 48, cfg);
    for (double omega : {0.123, 1.9, -2.4}) {
        const Eigen::VectorXcd got = fdft_at(path, omega);
        const Eigen::VectorXcd want = oracles::direct_fdft(path.coeffs, omega);
        CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("single-term transform has frequency-independent modulus") {
    // with one observation the sum collapses to X_1 e^{-i omega} / sqrt(2 pi)
    Eigen::MatrixXd one(1, 2);
    one << 1.25, -0.5;
    for (double omega : {0.1, 1.0, 2.5}) {
        const Eigen::VectorXcd v = oracles::direct_fdft(one, omega);
        CHECK(std::abs(v[0]) == doctest::Approx(1.25 / std::sqrt(kTwoPi)).epsilon(1e-12));
        CHECK(std::abs(v[1]) == doctest::Approx(0.5 / std::sqrt(kTwoPi)).epsilon(1e-12));
    }
}

TEST_CASE("periodogram frames: rank one, trace, PSD") {
    const auto model = fixtures::pure_fractional(3, LrdKernel::exact_diff);
    const auto path = random_path(model, 64, 5);
    const auto f = fdft(path);
    const auto pset = periodogram(f);
    pset.validate();
    for (std::size_t j = 0; j < pset.frames.size(); ++j) {
        const double trace = pset.frames[j].trace().real();
        CHECK(trace == doctest::Approx(f.values.row(j).squaredNorm()).epsilon(1e-12));
    }
}

TEST_CASE("integrated periodogram identity is exact") {
    const auto model = fixtures::pure_fractional(3, LrdKernel::exact_diff);
    for (long T : {16L, 64L}) {
        const auto path = random_path(model, T, 50 + T);
        const auto pset = periodogram(fdft(path));
        Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(3, 3);
        for (const auto& frame : pset.frames) sum += frame;
        // add the j = 0 frame, never part of the production set
        const Eigen::VectorXcd v0 =
            path.coeffs.colwise().sum().transpose().cast<std::complex<double>>() /
            std::sqrt(kTwoPi * static_cast<double>(T));
        sum += v0 * v0.adjoint();
        sum *= kTwoPi / static_cast<double>(T);

        const Eigen::MatrixXcd want =
            (path.coeffs.transpose() * path.coeffs / static_cast<double>(T))
                .cast<std::complex<double>>();
        CHECK((sum - want).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("fejer kernel: peak, zero, direct sum, mass") {
    CHECK(fejer(0.0, 7) == 7.0);
    CHECK(fejer(kPi, 2) == doctest::Approx(0.0));
    CHECK(fejer(0.3, 8) == doctest::Approx(oracles::direct_fejer(0.3, 8)).epsilon(1e-12));
    const CounterRng rng(1, 1);
    for (int i = 0; i < 50; ++i) {
        const double omega = (rng.uniform(i) * 2.0 - 1.0) * kPi;
        CHECK(fejer(omega, 16) >= 0.0);
        CHECK(fejer(omega, 16) == doctest::Approx(oracles::direct_fejer(omega, 16)).epsilon(1e-9));
    }
    // mass over [-pi, pi] is 2 pi; the grid hole is filled by F_T(0) * 2 omega_min
    QuadratureSettings s;
    const long T = 64;
    const PanelRule rule = positive_half_rule_refined(s, static_cast<double>(T));
    double mass = 2.0 * rule.integrate([&](double w) { return fejer(w, T); });
    mass += 2.0 * s.omega_min * static_cast<double>(T);
    CHECK(mass == doctest::Approx(kTwoPi).epsilon(1e-6));
}

TEST_CASE("expected periodogram: white noise is flat") {
    const auto model = fixtures::pure_fractional(2, LrdKernel::exact_diff, 1e-14, 0.95, -2.0);
    for (long T : {8L, 64L}) {
        for (double omega : {0.5, 2.0}) {
            const auto F = expected_periodogram(model, {1e-14}, T, omega, model.quad);
            CHECK(F.values[0] == doctest::Approx(1.0 / kTwoPi).epsilon(1e-9));
            CHECK(F.values[1] == doctest::Approx(0.25 / kTwoPi).epsilon(1e-9));
        }
    }
}

TEST_CASE("expected periodogram equals the Fejer convolution route") {
    const long T = 64;
    const auto model = fixtures::pure_fractional(2, LrdKernel::exact_diff, 0.05, 0.95, 0.0);
    const Theta theta{0.3};
    for (double omega : {0.7, 1.3, 2.1}) {
        const auto F = expected_periodogram(model, theta, T, omega, model.quad);
        // independent route: (1/2pi) int F_T(omega - xi) f(xi) d xi on a grid
        // that resolves both the kernel peak and the spectral singularity
        const PanelRule half = positive_half_rule_refined(model.quad, static_cast<double>(T));
        double conv = 0.0;
        for (std::size_t i = 0; i < half.nodes.size(); ++i) {
            const double xi = half.nodes[i];
            conv += half.weights[i] *
                    (fejer(omega - xi, T) + fejer(omega + xi, T)) *
                    spectral_density_symbol(model, xi, 1, theta);
        }
        conv /= kTwoPi;
        CHECK(F.values[0] == doctest::Approx(conv).epsilon(1e-4));
    }
}

TEST_CASE("expected periodogram converges to the density pointwise") {
    const auto model = fixtures::pure_fractional(1, LrdKernel::exact_diff, 0.05, 0.95, 0.0);
    const Theta theta{0.4};
    const double omega = 1.0;
    const double f = spectral_density_symbol(model, omega, 1, theta);
    const auto F = expected_periodogram(model, theta, 1024, omega, model.quad);
    CHECK(std::abs(F.values[0] - f) / f < 0.01);
}

TEST_CASE("trace of the periodogram is unbiased for the expected periodogram") {
    const long T = 256;
    const int n_seeds = 200;
    const auto model = fixtures::pure_fractional(3, LrdKernel::exact_diff);
    const Theta theta{0.4};
    SimConfig cfg;
    cfg.threads = 2;
    const std::vector<double> omegas{kTwoPi * 16 / T, kTwoPi * 64 / T, kTwoPi * 100 / T};
    std::vector<std::vector<double>> traces(omegas.size());
    for (int s = 0; s < n_seeds; ++s) {
        cfg.seed = 7000 + s;
        const auto pset = periodogram(fdft(simulate_gaussian(model, theta, T, cfg)));
        for (std::size_t k = 0; k < omegas.size(); ++k) {
            const long j = std::lround(omegas[k] * T / kTwoPi);
            traces[k].push_back(pset.frames[j - 1].trace().real());
        }
    }
    for (std::size_t k = 0; k < omegas.size(); ++k) {
        const auto F = expected_periodogram(model, theta, T, omegas[k], model.quad);
        const double want = F.values.sum();
        const double se = oracles::stddev(traces[k]) / std::sqrt(static_cast<double>(n_seeds));
        CHECK(std::abs(oracles::mean(traces[k]) - want) < 4.0 * se);
    }
}

TEST_CASE("integrated periodogram bias: white noise is exactly unbiased") {
    const auto model = fixtures::pure_fractional(2, LrdKernel::exact_diff, 1e-14, 0.95);
    for (long T : {16L, 128L})
        CHECK(integrated_bias(model, {1e-14}, T, model.quad, 2) < 1e-8);
}

TEST_CASE("integrated periodogram bias decays with the sample size") {
    const auto model = fixtures::pure_fractional(5, LrdKernel::exact_diff);
    const Theta theta{0.4};
    const double b64 = integrated_bias(model, theta, 64, model.quad, 2);
    const double b256 = integrated_bias(model, theta, 256, model.quad, 2);
    CHECK(b256 < b64);
    CHECK(b64 > 0.0);
}

TEST_CASE("expected periodogram rejects omega = 0 and tiny T") {
    const auto model = fixtures::pure_fractional(1, LrdKernel::exact_diff);
    CHECK_THROWS_AS(expected_periodogram(model, {0.4}, 64, 0.0, model.quad), ValidationError);
    CHECK_THROWS_AS(expected_periodogram(model, {0.4}, 1, 0.5, model.quad), ValidationError);
}
