#include "dephase/decoherence.hpp"
#include "dephase/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>

namespace dephase {

namespace {
constexpr double pi = 3.141592653589793238462643383279502884;
}

void PulseSequence::validate() const {
    double prev = 0.0;
    for (double t : times) {
        if (!(t > prev))
            throw ParamError("pulse times must be strictly increasing with t_1 > 0");
        prev = t;
    }
}

double PulseSequence::min_gap() const {
    if (times.empty()) return std::numeric_limits<double>::infinity();
    double gap = times.front();
    for (std::size_t i = 1; i < times.size(); ++i)
        gap = std::min(gap, times[i] - times[i - 1]);
    return gap;
}

std::size_t PulseSequence::pulses_before(double t) const {
    return static_cast<std::size_t>(
        std::lower_bound(times.begin(), times.end(), t) - times.begin());
}

double omega_upper_limit(const BathSpec& bath, const QuadratureSettings& q) {
    double k = q.omega_max_factor;
    if (k == 0.0) k = default_omega_max_factor(bath.model);
    if (bath.model.family == SpectralFamily::tabulated)
        return bath.model.sample_omega.back();
    return k * bath.model.omega_c;
}

double gamma_free(const BathSpec& bath, double t, const QuadratureSettings& q) {
    bath.validate();
    if (t < 0.0) throw DomainError("gamma_free requires t >= 0");
    if (t == 0.0) return 0.0;

    const double upper = omega_upper_limit(bath, q);
    const auto edges = oscillation_edges(0.0, upper, t, {bath.model.omega_c});
    auto f = [&](double w) { return 2.0 * eval_eta(bath, w) * (1.0 - std::cos(w * t)); };
    return integrate_adaptive(f, edges, q).value;
}

double gamma_infinity_free(const BathSpec& bath, const QuadratureSettings& q) {
    bath.validate();
    if (!bath.model.is_supraohmic())
        throw UnsupportedError("Gamma_0(infinity) diverges for ohmic spectral densities");
    const double upper = omega_upper_limit(bath, q);
    const auto edges = oscillation_edges(0.0, upper, 0.0, {bath.model.omega_c});
    auto f = [&](double w) { return 2.0 * eval_eta(bath, w); };
    return integrate_adaptive(f, edges, q).value;
}

double filter_function(const PulseSequence& seq, double total_t, double omega) {
    seq.validate();
    if (omega < 0.0) throw DomainError("filter_function requires omega >= 0");
    if (!seq.times.empty() && seq.times.back() > total_t)
        throw DomainError("pulse beyond total time in filter_function");

    const std::size_t n = seq.times.size();
    std::complex<double> y(1.0, 0.0);
    const double end_sign = (n % 2 == 0) ? -1.0 : 1.0; // (-1)^(n+1)
    y += end_sign * std::polar(1.0, omega * total_t);
    double sign = -1.0; // (-1)^m starting at m = 1
    for (std::size_t m = 0; m < n; ++m) {
        y += 2.0 * sign * std::polar(1.0, omega * seq.times[m]);
        sign = -sign;
    }
    return std::norm(y);
}

double gamma_controlled_direct(const BathSpec& bath, const PulseSequence& seq, double t,
                               const QuadratureSettings& q) {
    bath.validate();
    seq.validate();
    if (t < 0.0) throw DomainError("gamma_controlled_direct requires t >= 0");
    if (t == 0.0) return 0.0;

    PulseSequence prefix;
    prefix.times.assign(seq.times.begin(), seq.times.begin() + seq.pulses_before(t));

    const double upper = omega_upper_limit(bath, q);
    constexpr std::size_t max_panels = 200000;
    if (upper * t / pi > static_cast<double>(max_panels)) {
        static bool warned = false;
        if (!warned) {
            warned = true;
            std::fprintf(stderr,
                         "gamma_controlled_direct: oscillation period below the subdivision "
                         "width at t=%g; prefer the exact Gamma_0 representation\n",
                         t);
        }
    }
    const auto edges = oscillation_edges(0.0, upper, t, {bath.model.omega_c}, max_panels);
    auto f = [&](double w) { return eval_eta(bath, w) * filter_function(prefix, t, w); };
    return integrate_adaptive(f, edges, q).value;
}

namespace {

// Shared implementation of the stroboscopic tan^2 integrals over [lo, hi].
double strobe_integral(const BathSpec& bath, double dt, int n_cycles, double lo, double hi,
                       const QuadratureSettings& q) {
    bath.validate();
    if (!(dt > 0.0)) throw DomainError("dt must be > 0");
    if (n_cycles < 1) throw DomainError("n_cycles must be >= 1");
    if (!(hi > lo)) return 0.0;

    const double w_res = pi / dt;
    const double n = static_cast<double>(n_cycles);
    const double t_half = n * dt; // phase rate of sin^2(w n dt)

    // Panels aligned with the sin^2 zeros (spacing pi/(n dt)); the poles of
    // tan^2 at odd multiples of w_res land exactly on those zeros.  A sliver
    // of half-width `gap` around each pole is excluded; its contribution is
    // bounded by 16 eta(p) n^2 per unit width since sin^2((w-p) n dt) vanishes
    // quadratically where tan^2 diverges.
    const double gap = 1e-8 * w_res;
    std::vector<double> poles;
    for (double p = w_res; p < hi; p += 2.0 * w_res)
        if (p > lo) poles.push_back(p);

    std::vector<double> interior{bath.model.omega_c};
    for (double p : poles) {
        interior.push_back(p - gap);
        interior.push_back(p + gap);
    }
    auto edges = oscillation_edges(lo, hi, t_half, interior);

    auto in_gap = [&](double w) {
        for (double p : poles)
            if (std::abs(w - p) <= gap) return true;
        return false;
    };

    auto f = [&](double w) -> double {
        if (in_gap(w)) return 0.0;
        const double s = std::sin(w * t_half);
        const double ta = std::tan(0.5 * w * dt);
        return 4.0 * eval_eta(bath, w) * s * s * ta * ta;
    };

    // Remove edges that fall strictly inside a pole gap so no panel straddles one.
    edges.erase(std::remove_if(edges.begin(), edges.end(),
                               [&](double w) {
                                   for (double p : poles)
                                       if (std::abs(w - p) < gap) return true;
                                   return false;
                               }),
                edges.end());

    IntegralResult res = integrate_adaptive(f, edges, q, true);
    double sliver_bound = 0.0;
    for (double p : poles)
        sliver_bound += 32.0 * eval_eta(bath, p) * n * n * gap;
    const double err = res.error + sliver_bound;
    if (err > std::max(q.abs_tol, q.rel_tol * std::abs(res.value)) && !res.converged)
        throw AccuracyError("stroboscopic quadrature did not converge", err,
                            std::max(q.abs_tol, q.rel_tol * std::abs(res.value)));
    return res.value;
}

} // namespace

double gamma_pdd_stroboscopic(const BathSpec& bath, double dt, int n_cycles,
                              const QuadratureSettings& q) {
    const double upper = omega_upper_limit(bath, q);
    return strobe_integral(bath, dt, n_cycles, 0.0, upper, q);
}

double gamma_band(const BathSpec& bath, double dt, int n_cycles, Band band,
                  const QuadratureSettings& q) {
    const double w_res = pi / dt;
    switch (band) {
        case Band::small_omega:
            return strobe_integral(bath, dt, n_cycles, 0.0, 0.5 * w_res, q);
        case Band::resonant:
            return strobe_integral(bath, dt, n_cycles, 0.5 * w_res, 1.5 * w_res, q);
    }
    throw DomainError("unknown band");
}

} // namespace dephase
