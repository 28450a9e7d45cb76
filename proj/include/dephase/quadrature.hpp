#ifndef DEPHASE_QUADRATURE_HPP
#define DEPHASE_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace dephase {

struct QuadratureSettings {
    double rel_tol = 1e-9;
    double abs_tol = 1e-14;
    // Upper integration limit as a multiple of the cutoff frequency.
    // 0 selects the per-family default (40 for Gaussian cutoffs, 200 for
    // exponential ones); explicit values must be >= 10.
    double omega_max_factor = 0.0;
    int max_subdivisions = 10000;

    void validate() const;
};

struct IntegralResult {
    double value = 0.0;
    double error = 0.0; // absolute error estimate, including any recorded truncation bounds
    long evaluations = 0;
    bool converged = true;
};

// Adaptive panel integration with a 15-point Gauss-Kronrod rule.
//
// `edges` is a sorted list of at least two panel boundaries; the integral runs
// over [edges.front(), edges.back()] with the given initial subdivision.  The
// worst panel is bisected until the combined error estimate meets
// max(abs_tol, rel_tol*|value|) or max_subdivisions refinements have been
// spent.  Throws AccuracyError on non-convergence unless `allow_failure`.
IntegralResult integrate_adaptive(const std::function<double(double)>& f,
                                  const std::vector<double>& edges,
                                  const QuadratureSettings& settings,
                                  bool allow_failure = false);

// Single non-adaptive Gauss-Kronrod panel (used by tests and as a building block).
IntegralResult gauss_kronrod_panel(const std::function<double(double)>& f, double a, double b);

// Edge lists for common panel layouts.
//
// Uniform split of [a, b] into panels no wider than max_width, capped at
// max_panels (panels widen if the cap binds).
std::vector<double> uniform_edges(double a, double b, double max_width, std::size_t max_panels = 100000);

// Edges for an oscillatory integrand cos(w t) / sin(w t): one panel per
// half-oscillation of phase rate `t` over [a, b], plus mandatory interior
// breakpoints (e.g. the spectral cutoff).  Degenerates to a small fixed split
// when t is tiny.
std::vector<double> oscillation_edges(double a, double b, double phase_rate,
                                      const std::vector<double>& interior = {},
                                      std::size_t max_panels = 200000);

} // namespace dephase

#endif
