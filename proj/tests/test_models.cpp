#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lrdspec/errors.hpp"
#include "lrdspec/models.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace lrdspec;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("alpha families evaluate as declared") {
    const auto constant = fixtures::pure_fractional(4, LrdKernel::exact_diff);
    for (int l = 1; l <= 4; ++l) CHECK(alpha_eval(constant, l, {0.4}) == 0.4);

    const auto logd = fixtures::two_param(4, LongMemorySymbol::Family::log_decay,
                                          LrdKernel::exact_diff, {{0.1, 0.1}, {0.5, 0.3}});
    CHECK(alpha_eval(logd, 1, {0.2, 0.2}) == doctest::Approx(0.4).epsilon(1e-15));

    const auto expo = fixtures::two_param(4, LongMemorySymbol::Family::exponential,
                                          LrdKernel::exact_diff, {{0.1, 0.1}, {0.5, 0.3}});
    CHECK(alpha_eval(expo, 2, {0.2, 0.3}) ==
          doctest::Approx(0.2 + 0.3 * std::exp(-1.0)).epsilon(1e-15));

    CHECK_THROWS_AS(alpha_eval(constant, 1, {1.5}), ValidationError);  // outside domain
    const auto tight = fixtures::pure_fractional(2, LrdKernel::exact_diff, 0.05, 0.95, -2.0,
                                                 0.2, 0.3);  // clamp narrower than domain
    CHECK_THROWS_AS(alpha_eval(tight, 1, {0.9}), ValidationError);
}

TEST_CASE("short-memory symbol: fractional noise, MA(1), tapered") {
    const auto fn = fixtures::pure_fractional(2, LrdKernel::exact_diff, 0.05, 0.95, 0.0);
    for (double w : {0.0, 0.3, 2.0, kPi}) {
        CHECK(m_symbol_eval(fn, w, 1) == doctest::Approx(1.0 / kTwoPi).epsilon(1e-15));
        CHECK(m_symbol_eval(fn, -w, 1) == m_symbol_eval(fn, w, 1));
    }

    // Psi(z) = 1 - 0.5 z, so Psi(1) = 0.5 and M(0) = |0.5|^2 / (2 pi).
    auto ma1 = fixtures::farima(1, LrdKernel::exact_diff, {}, {0.5});
    std::get<FarimaRational>(ma1.short_memory).sigma_eigs[0] = 1.0;
    CHECK(m_symbol_eval(ma1, 0.0, 1) == doctest::Approx(0.125 / kPi).epsilon(1e-14));

    const auto tap = fixtures::tapered(3);
    CHECK(m_symbol_eval(tap, kPi, 1) == doctest::Approx(0.0));
    CHECK(m_symbol_eval(tap, 1.1, 2) == doctest::Approx(m_symbol_eval(tap, -1.1, 2)));
    CHECK(m_symbol_eval(tap, 0.7, 1) ==
          doctest::Approx(std::cos(0.35) * std::cos(0.35)).epsilon(1e-14));
}

TEST_CASE("spectral density symbol values and kernel agreement near zero") {
    const auto fn = fixtures::pure_fractional(1, LrdKernel::exact_diff, 0.05, 0.95, 0.0);
    CHECK(spectral_density_symbol(fn, kPi, 1, {0.4}) ==
          doctest::Approx(std::pow(2.0, -0.4) / kTwoPi).epsilon(1e-14));

    // alpha near zero: density collapses to the short-memory symbol
    const auto fn0 = fixtures::pure_fractional(1, LrdKernel::exact_diff, 1e-14, 0.95, 0.0);
    CHECK(spectral_density_symbol(fn0, 1.0, 1, {1e-14}) ==
          doctest::Approx(1.0 / kTwoPi).epsilon(1e-12));

    const auto fn_pl = fixtures::pure_fractional(1, LrdKernel::power_law, 0.05, 0.95, 0.0);
    const double ratio = spectral_density_symbol(fn, 0.01, 1, {0.4}) /
                         spectral_density_symbol(fn_pl, 0.01, 1, {0.4});
    CHECK(std::abs(ratio - 1.0) < 1e-4);

    CHECK_THROWS_AS(spectral_density_symbol(fn, 0.0, 1, {0.4}), ValidationError);
}

TEST_CASE("covariance by quadrature: total mass and orthogonality") {
    const auto fn0 = fixtures::pure_fractional(1, LrdKernel::exact_diff, 1e-14, 0.95, 0.0);
    CHECK(covariance_symbol(fn0, 0, 1, {1e-14}, fn0.quad) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(covariance_symbol(fn0, 5, 1, {1e-14}, fn0.quad)) < 1e-10);
}

TEST_CASE("covariance matches the exact Gamma-ratio autocovariance") {
    // Difference-kernel pure fractional noise has a closed-form covariance.
    const auto fn = fixtures::pure_fractional(3, LrdKernel::exact_diff);
    const double alpha = 0.5;
    for (long t : {0L, 1L, 5L, 50L}) {
        const double want = oracles::fractional_cov_exact(alpha / 2.0, 1.0, t);
        const double got = covariance_symbol(fn, t, 1, {alpha}, fn.quad);
        CHECK(got == doctest::Approx(want).epsilon(1e-8));
    }
    // lambda_2 = 2^-2 scales the whole covariance
    CHECK(covariance_symbol(fn, 3, 2, {alpha}, fn.quad) ==
          doctest::Approx(0.25 * covariance_symbol(fn, 3, 1, {alpha}, fn.quad)).epsilon(1e-10));
}

TEST_CASE("covariance symmetry in the lag") {
    const auto fn = fixtures::pure_fractional(2, LrdKernel::power_law);
    for (long t : {1L, 7L, 30L})
        CHECK(covariance_symbol(fn, t, 1, {0.35}, fn.quad) ==
              doctest::Approx(covariance_symbol(fn, -t, 1, {0.35}, fn.quad)).epsilon(1e-12));
}

TEST_CASE("covariance table agrees with per-lag quadrature") {
    for (LrdKernel kernel : {LrdKernel::exact_diff, LrdKernel::power_law}) {
        auto model = fixtures::farima(2, kernel, {0.4}, {-0.3});
        const Theta theta{0.45};
        const auto table = covariance_table(model, 1, theta, 150);
        for (long t : {0L, 1L, 17L, 123L}) {
            const double direct = covariance_symbol(model, t, 1, theta, model.quad);
            CHECK(table[t] == doctest::Approx(direct).epsilon(1e-9));
        }
    }
}

TEST_CASE("covariance tables share work across scaled components") {
    const auto fn = fixtures::pure_fractional(4, LrdKernel::exact_diff);
    const auto tables = covariance_tables(fn, {0.4}, 64);
    for (int l = 2; l <= 4; ++l) {
        const double scale = std::pow(static_cast<double>(l), -2.0);
        for (long t : {0L, 3L, 64L})
            CHECK(tables[l - 1][t] == doctest::Approx(scale * tables[0][t]).epsilon(1e-13));
    }
}

TEST_CASE("power-law covariance approaches the closed asymptote") {
    const auto fn = fixtures::pure_fractional(1, LrdKernel::power_law, 0.05, 0.95, 0.0);
    // amplitude 2 Gamma(1/2) sin(pi/4) / (2 pi) = (2 pi)^{-1/2}
    const double amp = 2.0 * std::tgamma(0.5) * std::sin(kPi / 4.0) / kTwoPi;
    CHECK(amp == doctest::Approx(0.3989422804).epsilon(1e-9));
    const double r100 = covariance_symbol(fn, 100, 1, {0.5}, fn.quad);
    CHECK(r100 == doctest::Approx(amp / 10.0).epsilon(0.05));
}

TEST_CASE("lrd asymptote formula and degenerate limits") {
    const auto fn = fixtures::pure_fractional(1, LrdKernel::power_law, 1e-14, 0.95, 0.0);
    CHECK(lrd_asymptote(fn, 100, 1, {0.5}) ==
          doctest::Approx(0.3989422804 * 0.1).epsilon(1e-8));
    // sin(pi alpha / 2) drags the amplitude to zero with alpha
    CHECK(lrd_asymptote(fn, 100, 1, {1e-6}) < 1e-5);
    CHECK_THROWS_AS(lrd_asymptote(fn, 0, 1, {0.5}), ValidationError);

    // covariance / asymptote ratio approaches one in the tail
    const auto fn_ed = fixtures::pure_fractional(1, LrdKernel::exact_diff, 0.05, 0.95, 0.0);
    for (const auto* m : {&fn, &fn_ed}) {
        const double ratio = covariance_symbol(*m, 400, 1, {0.3}, m->quad) /
                             lrd_asymptote(*m, 400, 1, {0.3});
        CHECK(std::abs(ratio - 1.0) < 0.10);
    }
}

TEST_CASE("fractional MA coefficients") {
    const auto fn = fixtures::pure_fractional(1, LrdKernel::exact_diff);
    SUBCASE("pure fractional: b_j = a_j with a_1 = d") {
        const double alpha = 0.5;  // d = 0.25
        const auto b = ma_coefficients(fn, 1, {alpha}, 12);
        CHECK(b[0] == 1.0);
        CHECK(b[1] == doctest::Approx(0.25).epsilon(1e-15));
        CHECK(b[2] == doctest::Approx(0.15625).epsilon(1e-15));
    }
    SUBCASE("recursion equals the Gamma-ratio formula up to j = 50") {
        const double d = 0.2;  // alpha = 0.4
        const auto b = ma_coefficients(fn, 1, {0.4}, 50);
        for (long j = 0; j <= 50; ++j)
            CHECK(b[j] == doctest::Approx(oracles::fractional_coef_direct(d, j)).epsilon(1e-10));
    }
    SUBCASE("AR(1) impulse response is geometric when d is negligible") {
        const auto ar1 = fixtures::farima(1, LrdKernel::exact_diff, {0.5}, {}, 1e-14, 0.95);
        const auto b = ma_coefficients(ar1, 1, {1e-14}, 20);
        for (int j = 0; j <= 20; ++j)
            CHECK(b[j] == doctest::Approx(std::pow(0.5, j)).epsilon(1e-10));
    }
    SUBCASE("rejects the tapered variant and tiny truncations") {
        const auto tap = fixtures::tapered(2);
        CHECK_THROWS_AS(ma_coefficients(tap, 1, {0.4}, 10), ValidationError);
        const auto arma = fixtures::farima(1, LrdKernel::exact_diff, {0.3}, {0.1});
        CHECK_THROWS_AS(ma_coefficients(arma, 1, {0.4}, 1), ValidationError);
    }
}

TEST_CASE("assumption validation") {
    SUBCASE("pure fractional noise passes; slow variation is flat") {
        const auto fn = fixtures::pure_fractional(3, LrdKernel::exact_diff, 0.05, 0.9);
        const auto rep = validate_assumptions(fn);
        CHECK(rep.ok);
        CHECK(rep.slow_variation_max_dev == doctest::Approx(0.0));
        CHECK(rep.identifiable);
        CHECK(rep.integral_rel_change < 1e-3);
        CHECK(rep.m_emp > 0.0);
    }
    SUBCASE("explosive AR coefficient fails the root check") {
        const auto bad = fixtures::farima(2, LrdKernel::exact_diff, {1.01}, {});
        const auto rep = validate_assumptions(bad);
        CHECK_FALSE(rep.ok);
        bool found = false;
        for (const auto& f : rep.failures) found |= f.find("root-location") != std::string::npos;
        CHECK(found);
        CHECK_THROWS_AS(require_valid(bad), ValidationError);
    }
    SUBCASE("shared AR/MA root fails") {
        const auto bad = fixtures::farima(1, LrdKernel::exact_diff, {0.4}, {0.4});
        CHECK_FALSE(validate_assumptions(bad).ok);
    }
    SUBCASE("clamp bound at 1.0 is rejected outright") {
        CHECK_THROWS_AS(fixtures::pure_fractional(2, LrdKernel::exact_diff, 0.05, 0.95, -2.0,
                                                  0.05, 1.0),
                        ValidationError);
    }
    SUBCASE("domain escaping the clamp fails the range check") {
        const auto tight = fixtures::pure_fractional(2, LrdKernel::exact_diff, 0.05, 0.95, -2.0,
                                                     0.2, 0.5);
        const auto rep = validate_assumptions(tight);
        CHECK_FALSE(rep.ok);
    }
    SUBCASE("tapered symbol validates with a positive grid minimum") {
        const auto tap = fixtures::tapered(3);
        const auto rep = validate_assumptions(tap);
        CHECK(rep.ok);
        CHECK(rep.m_emp > 0.0);  // taper vanishes only at the excluded endpoints
    }
}

TEST_CASE("density is even and positive on the grid") {
    const auto model = fixtures::farima(2, LrdKernel::exact_diff, {0.4}, {-0.2});
    const PanelRule rule = positive_half_rule(model.quad);
    for (std::size_t i = 0; i < rule.nodes.size(); i += 37) {
        const double w = rule.nodes[i];
        const double f = spectral_density_symbol(model, w, 1, {0.45});
        CHECK(f > 0.0);
        CHECK(f == doctest::Approx(spectral_density_symbol(model, -w, 1, {0.45})).epsilon(1e-14));
    }
}

TEST_CASE("partial covariance sums grow at the long-memory rate") {
    const long N = 2048;
    for (double alpha : {0.3, 0.5, 0.7}) {
        const auto fn = fixtures::pure_fractional(1, LrdKernel::power_law, 0.05, 0.95, 0.0);
        const auto table = covariance_table(fn, 1, {alpha}, 2 * N);
        double s_n = 0.0, s_2n = 0.0;
        for (long t = 0; t <= N; ++t) s_n += std::abs(table[t]);
        for (long t = 0; t <= 2 * N; ++t) s_2n += std::abs(table[t]);
        const double want = std::pow(2.0, alpha);
        CHECK(std::abs(s_2n / s_n - want) < 0.2 * want);
    }
}
