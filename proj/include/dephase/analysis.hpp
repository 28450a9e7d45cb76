#ifndef DEPHASE_ANALYSIS_HPP
#define DEPHASE_ANALYSIS_HPP

#include "dephase/recursion.hpp"
#include "dephase/sequences.hpp"

#include <optional>
#include <vector>

namespace dephase {

struct TraceGrid {
    double step = 0.0;    // sample spacing; trace includes t = 0 and horizon
    int threads = 1;
};

// Sampled Gamma(t) and |e^{-Gamma}|^2 via the exact representation (prefix
// sums over the memoized Gamma_0).  Deterministic for any thread count.
CoherenceTrace compute_trace(const Gamma0Cache& cache, const PulseSequence& seq,
                             double horizon, const TraceGrid& grid);

// Grid step for a protocol: characteristic_dt / samples_per_dt, or
// tau_c / 10 / samples_scale for free evolution.
double default_trace_step(const ProtocolSpec& spec, const BathSpec& bath,
                          int samples_per_dt = 40);

struct T2Effective {
    double rate = 0.0; // 1/T2_eff = DeltaGamma_inf / dt
    double t2 = 0.0;
};

T2Effective t2_effective(const BathSpec& bath, double dt);

// Predicted off-diagonal density-matrix ratio at the coherence maxima,
//   exp(-Gamma_{n_sat}[(n_sat + 1/2) dt] - (n - n_sat) DeltaGamma_inf),
// n = floor(t / dt); requires t > t_sat.  `simplified` uses exp(-t dG/dt).
double long_time_coherence_model(const Gamma0Cache& cache, double dt, double t,
                                 bool simplified = false);

struct ProtocolEntry {
    ProtocolSpec spec;
    CoherenceTrace trace;
    std::vector<std::pair<double, double>> maxima; // (t, coherence) at local maxima
    double oscillation_amplitude = 0.0;            // late-time peak-to-trough
    std::optional<double> t2_eff;
};

struct ProtocolComparison {
    std::vector<ProtocolEntry> entries;
};

ProtocolComparison compare_protocols(const BathSpec& bath,
                                     const std::vector<ProtocolSpec>& specs, double horizon,
                                     const TraceGrid& grid, const QuadratureSettings& q = {});

// Local coherence maxima on the sampled grid (3-point stencil; optional
// quadratic refinement of the peak position).
std::vector<std::pair<double, double>> find_maxima(const CoherenceTrace& trace,
                                                   double t_min = 0.0,
                                                   double t_max = 0.0,
                                                   bool refine = false);

// Mean peak-to-trough coherence oscillation over the last 20% of the trace.
// Requires >= 3 oscillation periods and >= 10 samples per period.
double readout_robustness(const CoherenceTrace& trace);

// Mean of the maxima values within [t_min, t_max] (comparison metric).
double mean_maxima(const CoherenceTrace& trace, double t_min, double t_max);

} // namespace dephase

#endif
