#pragma once

#include <functional>
#include <vector>

namespace lrdspec {

/// Settings for the frequency-domain quadrature. Panels grow geometrically
/// away from the origin so that the integrable |omega|^{-alpha} singularity
/// at zero frequency is resolved; (0, omega_min) is never covered by nodes.
struct QuadratureSettings {
    double omega_min = 1e-6;
    double panel_ratio = 2.0;
    int nodes_per_panel = 32;

    bool operator==(const QuadratureSettings&) const = default;
};

/// Gauss-Legendre abscissae and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

struct Panel {
    double lo = 0.0;
    double hi = 0.0;
};

/// Geometric panels [lo, lo*r], [lo*r, lo*r^2], ... clipped at hi.
std::vector<Panel> geometric_panels(double lo, double hi, double ratio);

/// Composite rule over a set of panels; nodes are strictly inside each panel.
struct PanelRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    double integrate(const std::function<double(double)>& f) const;
};

PanelRule panel_rule(const std::vector<Panel>& panels, int nodes_per_panel);

/// Rule over [omega_min, pi] with the settings' geometric panel layout.
PanelRule positive_half_rule(const QuadratureSettings& s);

/// Same layout, with every panel further split so that no panel is wider
/// than pi / (4 * t_osc); resolves an e^{i omega t} factor up to |t| = t_osc.
PanelRule positive_half_rule_refined(const QuadratureSettings& s, double t_osc);

/// c_t = Integral_{omega_min}^{pi} f(w) cos(w t) dw for t = 0..max_lag, by a
/// Filon-Legendre pass per panel: f is expanded in Legendre polynomials and
/// the oscillatory moments are spherical Bessel functions, so the cost and
/// the accuracy are uniform in t.
std::vector<double> filon_cosine_table(const std::function<double(double)>& f,
                                       const QuadratureSettings& s, long max_lag,
                                       int threads = 1);

/// Integral_0^z x^{-alpha} cos(x c) dx, evaluated as the analytic series in
/// (z*c)^2 (requires z*c < 1). Accounts for the uncovered sliver (0, omega_min).
double power_cosine_tail(double z, double alpha, double c);

/// Spherical Bessel j_0..j_m_max(z), stable for any z >= 0.
void spherical_bessel(int m_max, double z, double* out);

}  // namespace lrdspec
