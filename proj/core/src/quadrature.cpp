#include "lrdspec/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lrdspec/errors.hpp"
#include "lrdspec/parallel.hpp"

namespace lrdspec {

namespace {
constexpr double kPi = std::numbers::pi;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw ValidationError("gauss_legendre: order must be >= 1");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-angle initial guess, then Newton on P_n.
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

std::vector<Panel> geometric_panels(double lo, double hi, double ratio) {
    if (!(lo > 0.0) || !(hi > lo)) throw ValidationError("geometric_panels: need 0 < lo < hi");
    if (!(ratio > 1.0)) throw ValidationError("geometric_panels: ratio must exceed 1");
    std::vector<Panel> panels;
    double a = lo;
    while (a < hi) {
        const double b = std::min(a * ratio, hi);
        panels.push_back({a, b});
        a = b;
    }
    return panels;
}

PanelRule panel_rule(const std::vector<Panel>& panels, int nodes_per_panel) {
    std::vector<double> gx, gw;
    gauss_legendre(nodes_per_panel, gx, gw);
    PanelRule rule;
    rule.nodes.reserve(panels.size() * nodes_per_panel);
    rule.weights.reserve(panels.size() * nodes_per_panel);
    for (const Panel& p : panels) {
        const double c = 0.5 * (p.lo + p.hi);
        const double h = 0.5 * (p.hi - p.lo);
        for (int k = 0; k < nodes_per_panel; ++k) {
            rule.nodes.push_back(c + h * gx[k]);
            rule.weights.push_back(h * gw[k]);
        }
    }
    return rule;
}

double PanelRule::integrate(const std::function<double(double)>& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
    return acc;
}

PanelRule positive_half_rule(const QuadratureSettings& s) {
    return panel_rule(geometric_panels(s.omega_min, kPi, s.panel_ratio), s.nodes_per_panel);
}

PanelRule positive_half_rule_refined(const QuadratureSettings& s, double t_osc) {
    const auto base = geometric_panels(s.omega_min, kPi, s.panel_ratio);
    if (t_osc <= 0.0) return panel_rule(base, s.nodes_per_panel);
    const double max_width = kPi / (4.0 * t_osc);
    std::vector<Panel> panels;
    for (const Panel& p : base) {
        const double width = p.hi - p.lo;
        const int splits = std::max<int>(1, static_cast<int>(std::ceil(width / max_width)));
        for (int k = 0; k < splits; ++k) {
            panels.push_back({p.lo + width * k / splits, p.lo + width * (k + 1) / splits});
        }
    }
    return panel_rule(panels, s.nodes_per_panel);
}

void spherical_bessel(int m_max, double z, double* out) {
    if (z < 1e-14) {
        out[0] = 1.0;
        std::fill(out + 1, out + m_max + 1, 0.0);
        return;
    }
    if (z > m_max + 2.0) {
        // Oscillatory regime: upward recurrence is stable for m < z.
        double jm1 = std::sin(z) / z;
        out[0] = jm1;
        if (m_max == 0) return;
        double j = jm1 / z - std::cos(z) / z;
        out[1] = j;
        for (int m = 1; m < m_max; ++m) {
            const double jp = (2.0 * m + 1.0) / z * j - jm1;
            jm1 = j;
            j = jp;
            out[m + 1] = j;
        }
        return;
    }
    // Miller downward recurrence, normalized by j_0 = sin(z)/z.
    const int start = m_max + 24 + static_cast<int>(z);
    double jp = 0.0, j = 1e-280;
    std::vector<double> tmp(m_max + 1, 0.0);
    for (int m = start; m >= 1; --m) {
        const double jm = (2.0 * m + 1.0) / z * j - jp;
        jp = j;
        j = jm;
        if (m - 1 <= m_max) tmp[m - 1] = j;
        if (std::abs(j) > 1e250) {  // rescale to dodge overflow
            const double sc = 1e-250;
            j *= sc;
            jp *= sc;
            for (double& v : tmp) v *= sc;
        }
    }
    const double scale = (std::sin(z) / z) / tmp[0];
    for (int m = 0; m <= m_max; ++m) out[m] = tmp[m] * scale;
}

namespace {

// Legendre expansion degree and node count for the Filon pass. Degree 20 on
// ratio-2 geometric panels keeps the relative truncation error of smooth
// symbol factors at the 1e-14 level.
constexpr int kFilonDegree = 20;
constexpr int kFilonNodes = 24;

struct FilonWorkspace {
    std::vector<double> gx, gw;
    // proj(m, k) = (2m+1)/2 * w_k * P_m(x_k)
    std::vector<double> proj;

    FilonWorkspace() {
        gauss_legendre(kFilonNodes, gx, gw);
        proj.assign((kFilonDegree + 1) * kFilonNodes, 0.0);
        for (int k = 0; k < kFilonNodes; ++k) {
            double p0 = 1.0, p1 = 0.0;
            for (int m = 0; m <= kFilonDegree; ++m) {
                proj[m * kFilonNodes + k] = (2.0 * m + 1.0) / 2.0 * gw[k] * p0;
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * m + 1.0) * gx[k] * p1 - m * p2) / (m + 1.0);
            }
        }
    }
};

const FilonWorkspace& filon_workspace() {
    static const FilonWorkspace ws;
    return ws;
}

}  // namespace

std::vector<double> filon_cosine_table(const std::function<double(double)>& f,
                                       const QuadratureSettings& s, long max_lag,
                                       int threads) {
    if (max_lag < 0) throw ValidationError("filon_cosine_table: max_lag must be >= 0");
    const auto& ws = filon_workspace();
    const auto panels = geometric_panels(s.omega_min, kPi, s.panel_ratio);

    // Legendre coefficients of f per panel.
    const std::size_t np = panels.size();
    std::vector<double> coef(np * (kFilonDegree + 1), 0.0);
    std::vector<double> centers(np), halves(np);
    for (std::size_t p = 0; p < np; ++p) {
        centers[p] = 0.5 * (panels[p].lo + panels[p].hi);
        halves[p] = 0.5 * (panels[p].hi - panels[p].lo);
        double fv[kFilonNodes];
        for (int k = 0; k < kFilonNodes; ++k) {
            fv[k] = f(centers[p] + halves[p] * ws.gx[k]);
            if (!std::isfinite(fv[k]))
                throw NumericalError("filon_cosine_table: non-finite integrand value");
        }
        for (int m = 0; m <= kFilonDegree; ++m) {
            double a = 0.0;
            for (int k = 0; k < kFilonNodes; ++k) a += ws.proj[m * kFilonNodes + k] * fv[k];
            coef[p * (kFilonDegree + 1) + m] = a;
        }
    }

    // Int_panel f(w) cos(w t) dw = 2h * Re[ e^{i c t} sum_m a_m i^m j_m(h t) ].
    std::vector<double> table(static_cast<std::size_t>(max_lag) + 1, 0.0);
    parallel_for(max_lag + 1, threads, [&](long t) {
        double bes[kFilonDegree + 1];
        double acc = 0.0;
        for (std::size_t p = 0; p < np; ++p) {
            const double h = halves[p];
            spherical_bessel(kFilonDegree, h * t, bes);
            const double* a = &coef[p * (kFilonDegree + 1)];
            double sr = 0.0, si = 0.0;  // sum over even / odd m with i^m signs
            for (int m = 0; m <= kFilonDegree; m += 4) sr += a[m] * bes[m];
            for (int m = 2; m <= kFilonDegree; m += 4) sr -= a[m] * bes[m];
            for (int m = 1; m <= kFilonDegree; m += 4) si += a[m] * bes[m];
            for (int m = 3; m <= kFilonDegree; m += 4) si -= a[m] * bes[m];
            acc += 2.0 * h * (std::cos(centers[p] * t) * sr - std::sin(centers[p] * t) * si);
        }
        table[t] = acc;
    });
    return table;
}

double power_cosine_tail(double z, double alpha, double c) {
    if (!(z > 0.0)) return 0.0;
    if (alpha >= 1.0) throw ValidationError("power_cosine_tail: alpha must be < 1");
    const double zc = z * c;
    if (std::abs(zc) >= 1.0)
        throw NumericalError("power_cosine_tail: series requires |z*c| < 1");
    // Int_0^z x^{-a} cos(cx) dx = z^{1-a} * sum_k (-1)^k (zc)^{2k} / ((2k)! (2k+1-a))
    double sum = 0.0, term = 1.0;
    for (int k = 0; k < 12; ++k) {
        sum += term / (2 * k + 1 - alpha);
        term *= -zc * zc / ((2 * k + 1) * (2 * k + 2));
        if (std::abs(term) < 1e-18) break;
    }
    return std::pow(z, 1.0 - alpha) * sum;
}

}  // namespace lrdspec
