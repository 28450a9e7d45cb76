#include "dephase/analysis.hpp"
#include "dephase/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

namespace dephase {

namespace {

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    const int nthreads = std::min<int>(threads, static_cast<int>(count));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int w = 0; w < nthreads; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = static_cast<std::size_t>(w); i < count;
                 i += static_cast<std::size_t>(nthreads))
                body(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace

CoherenceTrace compute_trace(const Gamma0Cache& cache, const PulseSequence& seq,
                             double horizon, const TraceGrid& grid) {
    if (!(horizon > 0.0)) throw ParamError("horizon must be > 0");
    if (!(grid.step > 0.0)) throw ParamError("grid step must be > 0");

    CoherenceTrace trace;
    trace.sequence = seq;
    trace.bath_label = to_string(cache.bath().model.family);
    // grid points as single products, so time differences stay on the memo lattice
    const auto count = static_cast<std::size_t>(std::floor(horizon / grid.step * (1.0 + 1e-12)));
    trace.grid.reserve(count + 2);
    for (std::size_t i = 0; i <= count; ++i) trace.grid.push_back(i * grid.step);
    if (trace.grid.back() > horizon) trace.grid.back() = horizon;
    if (trace.grid.back() < horizon * (1.0 - 1e-12)) trace.grid.push_back(horizon);

    const ControlledGamma eval(cache, seq);
    // warm the Gamma_0 memo serially so parallel queries are read-mostly
    if (grid.threads > 1 && !trace.grid.empty()) eval.at(trace.grid.back());

    trace.gamma.assign(trace.grid.size(), 0.0);
    parallel_for(trace.grid.size(), grid.threads,
                 [&](std::size_t i) { trace.gamma[i] = eval.at(trace.grid[i]); });

    trace.coherence.resize(trace.gamma.size());
    for (std::size_t i = 0; i < trace.gamma.size(); ++i)
        trace.coherence[i] = std::exp(-2.0 * trace.gamma[i]);
    return trace;
}

double default_trace_step(const ProtocolSpec& spec, const BathSpec& bath, int samples_per_dt) {
    const double dt = spec.characteristic_dt();
    if (dt > 0.0) return dt / samples_per_dt;
    if (spec.kind == ProtocolKind::udd && spec.pulse_count > 0) {
        // finest UDD gap is the first one; resolved by construction
        return 1.0 / (4.0 * (spec.pulse_count + 1) * samples_per_dt / 40.0);
    }
    const double tau_c = correlation_time(bath.model);
    return tau_c / 10.0 / (samples_per_dt / 4);
}

T2Effective t2_effective(const BathSpec& bath, double dt) {
    const DeltaGammaInfinity dgi = delta_gamma_infinity(bath, dt);
    T2Effective out;
    out.rate = dgi.value / dt;
    out.t2 = out.rate > 0.0 ? 1.0 / out.rate : std::numeric_limits<double>::infinity();
    return out;
}

double long_time_coherence_model(const Gamma0Cache& cache, double dt, double t, bool simplified) {
    const AsymptoticReport rep = saturation_analysis(cache, dt);
    if (!(t > rep.t_sat))
        throw DomainError("long-time model requires t > t_sat");
    const double n = std::floor(t / dt);
    if (simplified) return std::exp(-t * rep.delta_gamma_inf / dt);
    PulseSequence pdd;
    const int n_sat = rep.n_sat;
    for (int k = 1; k <= n_sat; ++k) pdd.times.push_back(k * dt);
    const double g_sat = gamma_controlled_exact(cache, pdd, (n_sat + 0.5) * dt);
    return std::exp(-g_sat - (n - n_sat) * rep.delta_gamma_inf);
}

std::vector<std::pair<double, double>> find_maxima(const CoherenceTrace& trace, double t_min,
                                                   double t_max, bool refine) {
    std::vector<std::pair<double, double>> out;
    if (t_max <= t_min) t_max = trace.grid.empty() ? 0.0 : trace.grid.back();
    for (std::size_t i = 1; i + 1 < trace.grid.size(); ++i) {
        const double t = trace.grid[i];
        if (t < t_min || t > t_max) continue;
        const double c0 = trace.coherence[i - 1];
        const double c1 = trace.coherence[i];
        const double c2 = trace.coherence[i + 1];
        if (c1 >= c0 && c1 >= c2 && (c1 > c0 || c1 > c2)) {
            double tp = t, cp = c1;
            if (refine) {
                const double denom = c0 - 2.0 * c1 + c2;
                if (denom < 0.0) {
                    const double h = trace.grid[i + 1] - trace.grid[i];
                    const double delta = 0.5 * (c0 - c2) / denom;
                    tp = t + delta * h;
                    cp = c1 - 0.25 * (c0 - c2) * delta;
                }
            }
            out.emplace_back(tp, cp);
        }
    }
    return out;
}

double mean_maxima(const CoherenceTrace& trace, double t_min, double t_max) {
    const auto peaks = find_maxima(trace, t_min, t_max);
    if (peaks.empty()) throw DomainError("no coherence maxima in the requested window");
    double sum = 0.0;
    for (const auto& [t, c] : peaks) sum += c;
    return sum / static_cast<double>(peaks.size());
}

double readout_robustness(const CoherenceTrace& trace) {
    if (trace.grid.size() < 8) throw ResolutionError("trace too short for robustness analysis");
    const double horizon = trace.grid.back();
    const double t_lo = 0.8 * horizon;

    std::vector<double> peaks, troughs;
    std::vector<double> peak_times;
    for (std::size_t i = 1; i + 1 < trace.grid.size(); ++i) {
        if (trace.grid[i] < t_lo) continue;
        const double c0 = trace.coherence[i - 1];
        const double c1 = trace.coherence[i];
        const double c2 = trace.coherence[i + 1];
        if (c1 >= c0 && c1 >= c2 && (c1 > c0 || c1 > c2)) {
            peaks.push_back(c1);
            peak_times.push_back(trace.grid[i]);
        }
        if (c1 <= c0 && c1 <= c2 && (c1 < c0 || c1 < c2)) troughs.push_back(c1);
    }
    if (peaks.empty() && troughs.empty()) return 0.0; // constant trace
    if (peaks.size() < 3 || troughs.size() < 3)
        throw ResolutionError("trace must cover at least 3 late-time oscillation periods");
    const double step = trace.grid[1] - trace.grid[0];
    const double period = (peak_times.back() - peak_times.front()) /
                          static_cast<double>(peak_times.size() - 1);
    if (period < 10.0 * step)
        throw ResolutionError("fewer than 10 samples per oscillation period");

    const std::size_t n = std::min(peaks.size(), troughs.size());
    double peak_mean = 0.0, trough_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        peak_mean += peaks[i];
        trough_mean += troughs[i];
    }
    return (peak_mean - trough_mean) / static_cast<double>(n);
}

ProtocolComparison compare_protocols(const BathSpec& bath, const std::vector<ProtocolSpec>& specs,
                                     double horizon, const TraceGrid& grid,
                                     const QuadratureSettings& q) {
    if (!(horizon > 0.0)) throw ParamError("horizon must be > 0");
    ProtocolComparison cmp;
    cmp.entries.reserve(specs.size());

    std::vector<GeneratedSequence> generated;
    generated.reserve(specs.size());
    for (const auto& spec : specs) generated.push_back(generate(spec, horizon));

    double step = grid.step;
    if (!(step > 0.0)) {
        step = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < specs.size(); ++i) {
            step = std::min(step, default_trace_step(specs[i], bath));
            const double gap = generated[i].pulses.min_gap();
            if (std::isfinite(gap)) step = std::min(step, gap / 10.0);
        }
        if (!std::isfinite(step)) step = correlation_time(bath.model) / 40.0;
    }

    for (std::size_t i = 0; i < specs.size(); ++i) {
        const auto& spec = specs[i];
        ProtocolEntry entry;
        entry.spec = spec;
        const GeneratedSequence& gen = generated[i];
        Gamma0Cache cache(bath, q, step / 1024.0);
        TraceGrid g{step, grid.threads};
        entry.trace = compute_trace(cache, gen.pulses, horizon, g);
        entry.maxima = find_maxima(entry.trace);
        try {
            entry.oscillation_amplitude = readout_robustness(entry.trace);
        } catch (const ResolutionError&) {
            entry.oscillation_amplitude = 0.0;
        }
        // effective PDD spacing for the asymptotic rate, where one applies
        double eff_dt = 0.0;
        switch (spec.kind) {
            case ProtocolKind::pdd: eff_dt = spec.dt; break;
            case ProtocolKind::cpdd: eff_dt = 2.0 * spec.dt_cp; break;
            case ProtocolKind::pcdd: eff_dt = spec.level == 2 ? 2.0 * spec.dt : 0.0; break;
            case ProtocolKind::interp_abrupt:
            case ProtocolKind::interp_smooth: eff_dt = spec.dt_min; break;
            default: break;
        }
        if (eff_dt > 0.0) entry.t2_eff = t2_effective(bath, eff_dt).t2;
        cmp.entries.push_back(std::move(entry));
    }
    return cmp;
}

} // namespace dephase
