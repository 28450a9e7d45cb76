#include "dephase/sequences.hpp"
#include "dephase/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace dephase {

namespace {
constexpr double pi = 3.141592653589793238462643383279502884;
constexpr std::int64_t subticks = 1 << 20; // ticks per base delay

bool at_horizon(double t, double horizon) {
    return std::abs(t - horizon) <= 1e-12 * std::max(1.0, std::abs(horizon));
}
} // namespace

PulseSequence TickSequence::to_pulse_sequence(std::optional<double> min_separation) const {
    PulseSequence seq;
    seq.times.reserve(ticks.size());
    for (std::int64_t k : ticks) seq.times.push_back(static_cast<double>(k) * tick);
    seq.min_separation = min_separation;
    seq.label = label;
    seq.validate();
    return seq;
}

std::string to_string(ProtocolKind kind) {
    switch (kind) {
        case ProtocolKind::free_evolution: return "free";
        case ProtocolKind::pdd: return "pdd";
        case ProtocolKind::cpdd: return "cpdd";
        case ProtocolKind::cdd_single: return "cdd";
        case ProtocolKind::pcdd: return "pcdd";
        case ProtocolKind::udd: return "udd";
        case ProtocolKind::interp_abrupt: return "interp-abrupt";
        case ProtocolKind::interp_smooth: return "interp-smooth";
        case ProtocolKind::pulses: return "pulses";
    }
    return "?";
}

ProtocolKind protocol_kind_from_string(std::string_view name) {
    if (name == "free") return ProtocolKind::free_evolution;
    if (name == "pdd") return ProtocolKind::pdd;
    if (name == "cpdd") return ProtocolKind::cpdd;
    if (name == "cdd") return ProtocolKind::cdd_single;
    if (name == "pcdd") return ProtocolKind::pcdd;
    if (name == "udd") return ProtocolKind::udd;
    if (name == "interp-abrupt") return ProtocolKind::interp_abrupt;
    if (name == "interp-smooth") return ProtocolKind::interp_smooth;
    if (name == "pulses") return ProtocolKind::pulses;
    throw ParamError("unknown protocol kind '" + std::string(name) + "'");
}

std::string ProtocolSpec::describe() const {
    if (!label.empty()) return label;
    std::string s = to_string(kind);
    auto num = [](double v) {
        std::string t = std::to_string(v);
        t.erase(t.find_last_not_of('0') + 1);
        if (!t.empty() && t.back() == '.') t.pop_back();
        return t;
    };
    switch (kind) {
        case ProtocolKind::pdd: s += "-dt" + num(dt); break;
        case ProtocolKind::cpdd: s += "-dtcp" + num(dt_cp); break;
        case ProtocolKind::cdd_single: s += "-dt" + num(dt); break;
        case ProtocolKind::pcdd: s += std::to_string(level) + "-dt" + num(dt); break;
        case ProtocolKind::udd: s += "-n" + std::to_string(pulse_count); break;
        case ProtocolKind::interp_abrupt: s += "-dtmin" + num(dt_min); break;
        case ProtocolKind::interp_smooth: s += "-dtmin" + num(dt_min) + "-d2" + num(delta2); break;
        default: break;
    }
    return s;
}

double ProtocolSpec::characteristic_dt() const {
    switch (kind) {
        case ProtocolKind::pdd:
        case ProtocolKind::cdd_single: return dt;
        case ProtocolKind::pcdd: return dt;
        case ProtocolKind::cpdd: return dt_cp;
        case ProtocolKind::interp_abrupt: return dt_min / 2.0;
        case ProtocolKind::interp_smooth: return dt_min / 2.0;
        case ProtocolKind::pulses: {
            if (times.empty()) return 0.0;
            double gap = times.front();
            for (std::size_t i = 1; i < times.size(); ++i)
                gap = std::min(gap, times[i] - times[i - 1]);
            return gap;
        }
        default: return 0.0;
    }
}

TickSequence gen_pdd(double dt, double horizon) {
    if (!(dt > 0.0)) throw ParamError("pdd requires dt > 0");
    TickSequence s;
    s.tick = dt / static_cast<double>(subticks);
    s.label = "pdd";
    for (std::int64_t k = 1;; ++k) {
        const double t = static_cast<double>(k) * dt;
        if (t >= horizon || at_horizon(t, horizon)) break;
        s.ticks.push_back(k * subticks);
    }
    s.horizon_ticks = static_cast<std::int64_t>(std::floor(horizon / s.tick));
    return s;
}

TickSequence gen_cpdd(double dt_cp, double horizon) {
    if (!(dt_cp > 0.0)) throw ParamError("cpdd requires dt_cp > 0");
    TickSequence s;
    s.tick = dt_cp / static_cast<double>(subticks);
    s.label = "cpdd";
    for (std::int64_t k = 1;; k += 2) {
        const double t = static_cast<double>(k) * dt_cp;
        if (t >= horizon || at_horizon(t, horizon)) break;
        s.ticks.push_back(k * subticks);
    }
    s.horizon_ticks = static_cast<std::int64_t>(std::floor(horizon / s.tick));
    return s;
}

namespace {

// S_l pulse offsets in units of dt, built by S_l = X S_{l-1} X S_{l-1} with
// coincident pulse pairs cancelled.
std::vector<std::int64_t> cdd_offsets(int level) {
    std::vector<std::int64_t> cur; // S_0: free evolution, no pulses
    std::int64_t length = 1;
    for (int l = 1; l <= level; ++l) {
        std::map<std::int64_t, int> multi;
        for (std::int64_t k : cur) multi[k] += 1;
        multi[length] += 1; // X between the copies
        for (std::int64_t k : cur) multi[k + length] += 1;
        multi[2 * length] += 1; // leading X (last in time)
        cur.clear();
        for (const auto& [k, count] : multi)
            if (count % 2 == 1) cur.push_back(k);
        length *= 2;
    }
    return cur;
}

} // namespace

TickSequence gen_cdd(double dt, int level) {
    if (!(dt > 0.0)) throw ParamError("cdd requires dt > 0");
    if (level < 0) throw ParamError("cdd level must be >= 0");
    if (level > 30) throw ParamError("cdd level > 30 exceeds the size limit");
    TickSequence s;
    s.tick = dt / static_cast<double>(subticks);
    s.label = "cdd" + std::to_string(level);
    for (std::int64_t k : cdd_offsets(level)) s.ticks.push_back(k * subticks);
    s.horizon_ticks = (std::int64_t{1} << level) * subticks;
    return s;
}

int cdd_min_level(double dt, double horizon) {
    if (!(dt > 0.0) || !(horizon > 0.0)) throw ParamError("cdd requires dt, horizon > 0");
    int level = 0;
    while (std::ldexp(dt, level) < horizon) {
        ++level;
        if (level > 30) throw ParamError("cdd level > 30 exceeds the size limit");
    }
    return level;
}

TickSequence gen_cdd_single(double dt, double horizon) {
    const int level = cdd_min_level(dt, horizon);
    TickSequence full = gen_cdd(dt, level);
    TickSequence s;
    s.tick = full.tick;
    s.label = "cdd" + std::to_string(level);
    for (std::int64_t k : full.ticks) {
        const double t = static_cast<double>(k) * s.tick;
        if (t >= horizon || at_horizon(t, horizon)) break;
        s.ticks.push_back(k);
    }
    s.horizon_ticks = static_cast<std::int64_t>(std::floor(horizon / s.tick));
    return s;
}

TickSequence gen_pcdd(double dt, int level, double horizon) {
    if (level < 1) throw ParamError("pcdd level must be >= 1");
    if (level > 30) throw ParamError("pcdd level > 30 exceeds the size limit");
    if (!(dt > 0.0)) throw ParamError("pcdd requires dt > 0");
    const auto offsets = cdd_offsets(level);
    const std::int64_t cycle = std::int64_t{1} << level; // in dt units

    std::map<std::int64_t, int> multi;
    for (std::int64_t base = 0;; base += cycle) {
        if (static_cast<double>(base) * dt >= horizon) break;
        for (std::int64_t k : offsets) {
            const double t = static_cast<double>(base + k) * dt;
            if (t < horizon && !at_horizon(t, horizon)) multi[base + k] += 1;
        }
    }
    TickSequence s;
    s.tick = dt / static_cast<double>(subticks);
    s.label = "pcdd" + std::to_string(level);
    for (const auto& [k, count] : multi)
        if (count % 2 == 1) s.ticks.push_back(k * subticks);
    s.horizon_ticks = static_cast<std::int64_t>(std::floor(horizon / s.tick));
    return s;
}

PulseSequence gen_udd(int n, double total) {
    if (n < 1) throw ParamError("udd requires n >= 1");
    if (!(total > 0.0)) throw ParamError("udd requires total > 0");
    PulseSequence seq;
    seq.label = "udd" + std::to_string(n);
    seq.times.reserve(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j) {
        const double s = std::sin(pi * j / (2.0 * n + 2.0));
        seq.times.push_back(total * s * s);
    }
    seq.validate();
    return seq;
}

int udd_max_pulses(double total, double dt_min) {
    if (!(total > dt_min) || !(dt_min > 0.0))
        throw ParamError("udd_max_pulses requires total > dt_min > 0");
    auto first_gap = [&](int n) {
        const double s = std::sin(pi / (2.0 * n + 2.0));
        return total * s * s * (1.0 + 1e-12);
    };
    if (first_gap(1) < dt_min) return 0;
    // closed-form estimate, then adjust
    int n = static_cast<int>(pi / (2.0 * std::asin(std::sqrt(dt_min / total)))) + 1;
    while (n >= 1 && first_gap(n) < dt_min) --n;
    while (first_gap(n + 1) >= dt_min) ++n;
    return n;
}

double udd_effective_time(int n, const SpectralModel& model) {
    if (n < 0) throw ParamError("udd_effective_time requires n >= 0");
    const double tau_c = correlation_time(model);
    return (n + 1) * tau_c / (2.0 * pi);
}

namespace {

// Constraint-aware generators keep dt_min of headroom before the horizon so
// the readout margin respects the same bound as the inter-pulse gaps.
bool fits_with_headroom(double t, double horizon, double dt_min) {
    if (t >= horizon || at_horizon(t, horizon)) return false;
    return horizon - t >= dt_min * (1.0 - 1e-12);
}

} // namespace

TickSequence gen_interp_abrupt(double dt_min, double horizon) {
    if (!(dt_min > 0.0)) throw ParamError("interp-abrupt requires dt_min > 0");
    TickSequence s;
    s.tick = dt_min / static_cast<double>(subticks);
    s.label = "interp-abrupt";
    // one CP cycle at dt_min, then CP cycles at dt_min/2:
    // t = dt_min, 3 dt_min, 4.5 dt_min, and +dt_min steps afterwards
    std::vector<std::int64_t> ticks{subticks, 3 * subticks, subticks * 9 / 2};
    while (true) {
        const std::int64_t next = ticks.back() + subticks;
        const double t = static_cast<double>(next) * s.tick;
        if (t >= horizon) break;
        ticks.push_back(next);
    }
    for (std::int64_t k : ticks) {
        const double t = static_cast<double>(k) * s.tick;
        if (fits_with_headroom(t, horizon, dt_min)) s.ticks.push_back(k);
    }
    s.horizon_ticks = static_cast<std::int64_t>(std::floor(horizon / s.tick));
    return s;
}

std::vector<double> interp_smooth_cycle_delays(double dt_min, double delta2, double horizon) {
    if (!(dt_min > 0.0) || !(delta2 > 0.0))
        throw ParamError("interp-smooth requires dt_min, delta2 > 0");
    const double i_pdd_real = dt_min / (2.0 * delta2);
    const double i_pdd = std::round(i_pdd_real);
    if (!(i_pdd >= 1.0) || std::abs(i_pdd_real - i_pdd) > 1e-9 * i_pdd)
        throw ParamError("interp-smooth requires i_PDD = dt_min/(2 delta2) to be a positive integer");
    std::vector<double> delays;
    double start = 0.0;
    for (int j = 1; start < horizon; ++j) {
        const double delay = std::max(dt_min - (j - 1) * delta2, dt_min / 2.0);
        delays.push_back(delay);
        start += 4.0 * delay;
    }
    return delays;
}

TickSequence gen_interp_smooth(double dt_min, double delta2, double horizon) {
    // Carr-Purcell cycles of shrinking delay: cycle i has delay
    // dt_min - (i-1) delta2 down to dt_min/2, then stays there, which settles
    // into PDD spacing dt_min.  Equivalent pulse times:
    //   t_i = dt_min + (i-1) 2 dt_min - (i-1)(i-2) delta2 / 2
    // through the shrinking-cycle region, then t_i = t_{i-1} + dt_min.
    const auto delays = interp_smooth_cycle_delays(dt_min, delta2, horizon);
    TickSequence s;
    s.tick = delta2;
    s.label = "interp-smooth";
    std::int64_t start = 0;
    for (double delay : delays) {
        const std::int64_t d = static_cast<std::int64_t>(std::llround(delay / delta2));
        for (std::int64_t p : {start + d, start + 3 * d}) {
            const double t = static_cast<double>(p) * s.tick;
            if (fits_with_headroom(t, horizon, dt_min)) s.ticks.push_back(p);
        }
        start += 4 * d;
    }
    s.horizon_ticks = static_cast<std::int64_t>(std::floor(horizon / s.tick));
    return s;
}

SequenceReport check_constraint(const PulseSequence& seq, double dt_min, double horizon) {
    seq.validate();
    SequenceReport report;
    report.sequence = seq;
    report.pulse_count = static_cast<int>(seq.times.size());
    if (seq.times.empty()) {
        report.min_gap = horizon;
    } else {
        double gap = seq.times.front();
        for (std::size_t i = 1; i < seq.times.size(); ++i)
            gap = std::min(gap, seq.times[i] - seq.times[i - 1]);
        gap = std::min(gap, horizon - seq.times.back());
        report.min_gap = gap;
    }
    report.constraint_ok = report.min_gap >= dt_min * (1.0 - 1e-12);
    return report;
}

GeneratedSequence generate(const ProtocolSpec& spec, double horizon) {
    if (!(horizon > 0.0)) throw ParamError("horizon must be > 0");
    GeneratedSequence out;
    auto from_ticks = [&](TickSequence t) {
        if (!spec.label.empty()) t.label = spec.label;
        out.pulses = t.to_pulse_sequence(spec.dt_min > 0.0 ? std::optional<double>(spec.dt_min)
                                                           : std::nullopt);
        out.ticks = std::move(t);
    };
    switch (spec.kind) {
        case ProtocolKind::free_evolution:
            out.pulses.label = spec.describe();
            break;
        case ProtocolKind::pdd: from_ticks(gen_pdd(spec.dt, horizon)); break;
        case ProtocolKind::cpdd: from_ticks(gen_cpdd(spec.dt_cp, horizon)); break;
        case ProtocolKind::cdd_single: from_ticks(gen_cdd_single(spec.dt, horizon)); break;
        case ProtocolKind::pcdd: from_ticks(gen_pcdd(spec.dt, spec.level, horizon)); break;
        case ProtocolKind::udd:
            out.pulses = gen_udd(spec.pulse_count, horizon);
            break;
        case ProtocolKind::interp_abrupt:
            from_ticks(gen_interp_abrupt(spec.dt_min, horizon));
            break;
        case ProtocolKind::interp_smooth:
            from_ticks(gen_interp_smooth(spec.dt_min, spec.delta2, horizon));
            break;
        case ProtocolKind::pulses: {
            PulseSequence seq;
            for (double t : spec.times)
                if (t < horizon && !at_horizon(t, horizon)) seq.times.push_back(t);
            seq.label = spec.describe();
            seq.validate();
            out.pulses = std::move(seq);
            break;
        }
    }
    if (out.pulses.label.empty()) out.pulses.label = spec.describe();
    return out;
}

} // namespace dephase
