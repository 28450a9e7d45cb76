#ifndef DEPHASE_SEQUENCES_HPP
#define DEPHASE_SEQUENCES_HPP

#include "dephase/decoherence.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dephase {

// Pulse times as exact integer multiples of a base tick, so coincident-pulse
// cancellation and Magnus coefficients do not depend on floating equality.
struct TickSequence {
    double tick = 0.0;                // time per tick
    std::vector<std::int64_t> ticks;  // strictly increasing, > 0
    std::int64_t horizon_ticks = 0;   // generation horizon (pulses < horizon)
    std::string label;

    PulseSequence to_pulse_sequence(std::optional<double> min_separation = {}) const;
};

struct SequenceReport {
    PulseSequence sequence;
    double min_gap = 0.0; // min over {t_1, inter-pulse gaps, horizon - t_s}
    bool constraint_ok = true;
    int pulse_count = 0;
};

enum class ProtocolKind {
    free_evolution,
    pdd,
    cpdd,
    cdd_single,
    pcdd,
    udd,
    interp_abrupt,
    interp_smooth,
    pulses // explicit pulse list
};

std::string to_string(ProtocolKind kind);
ProtocolKind protocol_kind_from_string(std::string_view name);

struct ProtocolSpec {
    ProtocolKind kind = ProtocolKind::free_evolution;
    double dt = 0.0;       // pdd / cdd_single / pcdd base delay
    double dt_cp = 0.0;    // cpdd cycle delay
    double dt_min = 0.0;   // interpolated sequences
    double delta2 = 0.0;   // interp_smooth decrement
    int level = 0;         // pcdd concatenation level
    int pulse_count = 0;   // udd n
    std::vector<double> times; // explicit pulses
    std::string label;

    std::string describe() const;
    // Characteristic spacing used for trace grids and effective-T2 estimates
    // (0 when none applies, e.g. free evolution).
    double characteristic_dt() const;
};

struct GeneratedSequence {
    PulseSequence pulses;
    std::optional<TickSequence> ticks; // exact representation when available
};

// Protocol generators.  All emit strictly increasing times in (0, horizon);
// a pulse exactly at the horizon is dropped (it cannot affect Gamma before
// readout).
TickSequence gen_pdd(double dt, double horizon);
TickSequence gen_cpdd(double dt_cp, double horizon);

// Level-l concatenated sequence S_l over [0, 2^l dt], built by the recursion
// S_l = X S_{l-1} X S_{l-1} with coincident-XX cancellation.  The pulse at the
// sequence end (odd l) is retained for a standalone cycle.
TickSequence gen_cdd(double dt, int level);

// Single CDD cycle at the minimum level l* with 2^(l*) dt >= horizon,
// truncated at the horizon.
TickSequence gen_cdd_single(double dt, double horizon);
int cdd_min_level(double dt, double horizon);

// Periodic repetition of the S_l supercycle (coincident boundary pulses cancel).
TickSequence gen_pcdd(double dt, int level, double horizon);

// Uhrig sequence t_j = T sin^2(pi j / (2n+2)); irrational fractions, so no
// tick representation.
PulseSequence gen_udd(int n, double total);
int udd_max_pulses(double total, double dt_min);
double udd_effective_time(int n, const SpectralModel& model);

// Interpolated sequences: preparatory Carr-Purcell cycles feeding a PDD train
// at the minimum allowed spacing.
TickSequence gen_interp_abrupt(double dt_min, double horizon);
TickSequence gen_interp_smooth(double dt_min, double delta2, double horizon);

// Carr-Purcell cycle delays of the smooth interpolated sequence (cycle i has
// length 4 * delay_i); exposed for whole-cycle Magnus checks.
std::vector<double> interp_smooth_cycle_delays(double dt_min, double delta2, double horizon);

SequenceReport check_constraint(const PulseSequence& seq, double dt_min, double horizon);

GeneratedSequence generate(const ProtocolSpec& spec, double horizon);

} // namespace dephase

#endif
