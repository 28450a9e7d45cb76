#ifndef DEPHASE_RECURSION_HPP
#define DEPHASE_RECURSION_HPP

#include "dephase/decoherence.hpp"

#include <cstdint>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <unordered_map>

namespace dephase {

// Memoized Gamma_0 evaluations.  Requests are snapped to an integer lattice
// (spacing = lattice()) when they fall within a relative tolerance of a
// lattice point, so the heavily colliding time differences t_m - t_j of
// uniform protocols share a single quadrature; off-lattice times are keyed by
// their bit pattern and computed exactly.  Thread-safe: reads are shared,
// writes exclusive.
class Gamma0Cache {
public:
    // lattice_hint: typically (finest sequence step) / 1024; 0 disables snapping.
    Gamma0Cache(BathSpec bath, QuadratureSettings settings = {}, double lattice_hint = 0.0);

    double gamma0(double t) const;
    double gamma0_infinity() const; // supra-ohmic only

    const BathSpec& bath() const { return bath_; }
    const QuadratureSettings& settings() const { return settings_; }
    double lattice() const { return lattice_; }
    std::size_t size() const;

private:
    BathSpec bath_;
    QuadratureSettings settings_;
    double lattice_;
    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<std::int64_t, double> lattice_memo_;
    mutable std::unordered_map<std::uint64_t, double> exact_memo_;
    mutable bool have_infinity_ = false;
    mutable double infinity_value_ = 0.0;
};

// Exact representation of the controlled decoherence function in terms of the
// free one:
//   Gamma_n(t) = 2 sum_m (-1)^(m+1) Gamma_0(t_m)
//              + 4 sum_m sum_{j<m} (-1)^(m-1+j) Gamma_0(t_m - t_j)
//              + 2 sum_m (-1)^(m+n) Gamma_0(t - t_m)
//              + (-1)^n Gamma_0(t),
// with n the number of pulses at instants < t.  Alternating sums are
// Kahan-compensated.
double gamma_controlled_exact(const Gamma0Cache& cache, const PulseSequence& seq, double t);

// One recursion step: Gamma_n(t) = -Gamma_{n-1}(t) + 2 Gamma_{n-1}(t_n)
// + 2 Gamma_0(t - t_n), where `prefix` holds the first n-1 pulse times.
double gamma_recurrence_step(const Gamma0Cache& cache, std::span<const double> prefix,
                             double t_n, double t);

// Incremental evaluator for repeated Gamma(t) queries against one sequence
// (prefix sums make each query O(n) instead of O(n^2)).
class ControlledGamma {
public:
    ControlledGamma(const Gamma0Cache& cache, PulseSequence seq);
    double at(double t) const;
    const PulseSequence& sequence() const { return seq_; }

private:
    const Gamma0Cache& cache_;
    PulseSequence seq_;
    std::vector<double> prefix_; // A_n + B_n of the t-independent sums
};

struct TwoPulseImprovement {
    double gain = 0.0; // Gamma_0(inf) - Gamma_2(inf) = 2G0(t2) - 2G0(t1) - 4G0(t2-t1)
    bool satisfied = false;
};

// Asymptotic-improvement condition for two pulses on a supra-ohmic bath.
TwoPulseImprovement two_pulse_improvement(const Gamma0Cache& cache, double t1, double t2);

// Differential dephasing Delta Gamma_n = Gamma_n(t_{n+1}) - Gamma_{n-1}(t_n)
// evaluated by the Gamma_0 sum representation.  Requires >= n+1 pulses, n >= 1.
double delta_gamma_n(const Gamma0Cache& cache, const PulseSequence& seq, int n);

// PDD specialization (t_k = k dt):
//   Delta Gamma_n = (-1)^n [G0((n+1)dt) - 3 G0(n dt)] - 4 sum_{k<n} (-1)^k G0(k dt).
double delta_gamma_pdd(const Gamma0Cache& cache, double dt, int n);

// Offset variant Delta Gamma_n(t~) = Gamma_{n+1}(t~ + t_{n+1}) - Gamma_n(t~ + t_n)
// for PDD, 0 <= t~ <= dt.
double delta_gamma_pdd_offset(const Gamma0Cache& cache, double dt, int n, double t_offset);

struct DeltaGammaInfinity {
    double value = 0.0;     // 8 w_res eta(w_res)
    double omega_res = 0.0; // pi / dt
    bool valid = true;      // false when eta(3 w_res)/eta(w_res) > 0.01
    double neglect_ratio = 0.0;
};

DeltaGammaInfinity delta_gamma_infinity(const BathSpec& bath, double dt);

struct TiTdSplit {
    double ti = 0.0; // time-offset-independent part
    double td = 0.0; // (-1)^n [G0(t_n + t~) - G0(t_{n+1} + t~)]
};

// Decomposition Delta Gamma_n(t~) = TI + TD(t~) for PDD.
TiTdSplit ti_td_split(const Gamma0Cache& cache, double dt, int n, double t_offset);

struct AsymptoticReport {
    double dt = 0.0;
    double omega_res = 0.0;       // pi / dt, exact
    double delta_gamma_inf = 0.0; // 8 w_res eta(w_res)
    int n_sat = 0;
    double t_sat = 0.0; // n_sat * dt
    double t_av = 0.0;  // inflection time of Gamma_0 (max dephasing rate)
    bool converged = false;
    bool validity = true; // neglect condition of the asymptotic formula
    double epsilon = 0.0; // threshold actually used
};

// Saturation analysis for PDD with spacing dt.  epsilon <= 0 selects the
// default 0.02 * DeltaGamma_inf.  n_sat is the smallest n such that
// |Gamma_0(n dt) - Gamma_0(inf)| < eps (supra-ohmic baths) and
// |Delta Gamma_m - Delta Gamma_inf| < eps for the next 10 consecutive m;
// ohmic baths use the Delta Gamma criterion alone.
AsymptoticReport saturation_analysis(const Gamma0Cache& cache, double dt, double epsilon = 0.0);

} // namespace dephase

#endif
