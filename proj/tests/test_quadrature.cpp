#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lrdspec/quadrature.hpp"

using namespace lrdspec;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("gauss_legendre reproduces known rules") {
    std::vector<double> x, w;
    gauss_legendre(2, x, w);
    CHECK(x[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-14));

    gauss_legendre(32, x, w);
    double mass = 0.0, quartic = 0.0;
    for (int i = 0; i < 32; ++i) {
        mass += w[i];
        quartic += w[i] * std::pow(x[i], 4);
    }
    CHECK(mass == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(quartic == doctest::Approx(2.0 / 5.0).epsilon(1e-14));
}

TEST_CASE("geometric panels cover [omega_min, pi] exactly") {
    const auto panels = geometric_panels(1e-6, kPi, 2.0);
    CHECK(panels.front().lo == doctest::Approx(1e-6));
    CHECK(panels.back().hi == doctest::Approx(kPi));
    double width = 0.0;
    for (const auto& p : panels) {
        CHECK(p.hi > p.lo);
        width += p.hi - p.lo;
    }
    CHECK(width == doctest::Approx(kPi - 1e-6).epsilon(1e-12));
}

TEST_CASE("positive half rule integrates singular powers") {
    QuadratureSettings s;
    const PanelRule rule = positive_half_rule(s);
    for (double a : {0.3, 0.5, 0.9}) {
        // int_eps^pi w^-a dw = (pi^(1-a) - eps^(1-a)) / (1-a)
        const double got = rule.integrate([&](double w) { return std::pow(w, -a); });
        const double want = (std::pow(kPi, 1.0 - a) - std::pow(s.omega_min, 1.0 - a)) / (1.0 - a);
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("oscillation-refined rule resolves cos(w t)") {
    QuadratureSettings s;
    const long t = 97;
    const PanelRule rule = positive_half_rule_refined(s, static_cast<double>(t));
    const double got = rule.integrate([&](double w) { return std::cos(w * t); });
    const double want = (std::sin(kPi * t) - std::sin(s.omega_min * t)) / t;
    CHECK(got == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("spherical bessel matches closed forms") {
    double j[25];
    for (double z : {0.3, 2.0, 9.5, 40.0, 3000.0}) {
        spherical_bessel(24, z, j);
        CHECK(j[0] == doctest::Approx(std::sin(z) / z).epsilon(1e-12));
        CHECK(j[1] == doctest::Approx(std::sin(z) / (z * z) - std::cos(z) / z).epsilon(1e-11));
        CHECK(j[2] ==
              doctest::Approx((3.0 / (z * z) - 1.0) * std::sin(z) / z - 3.0 * std::cos(z) / (z * z))
                  .epsilon(1e-10));
    }
    spherical_bessel(24, 0.0, j);
    CHECK(j[0] == 1.0);
    CHECK(j[5] == 0.0);
}

TEST_CASE("filon cosine table equals refined quadrature lag by lag") {
    QuadratureSettings s;
    auto f = [](double w) { return std::pow(w, -0.4) * (1.0 + 0.2 * std::cos(w)); };
    const auto table = filon_cosine_table(f, s, 200);
    for (long t : {0L, 1L, 7L, 50L, 200L}) {
        const PanelRule rule = positive_half_rule_refined(s, static_cast<double>(t));
        const double direct = rule.integrate([&](double w) { return f(w) * std::cos(w * t); });
        CHECK(table[t] == doctest::Approx(direct).epsilon(1e-9));
    }
}

TEST_CASE("near-zero power-cosine sliver") {
    // alpha = 0: int_0^z cos(cx) dx = sin(cz)/c
    CHECK(power_cosine_tail(1e-6, 0.0, 50.0) ==
          doctest::Approx(std::sin(50.0 * 1e-6) / 50.0).epsilon(1e-12));
    // t = 0: z^{1-a}/(1-a)
    CHECK(power_cosine_tail(1e-6, 0.7, 0.0) ==
          doctest::Approx(std::pow(1e-6, 0.3) / 0.3).epsilon(1e-12));
}
