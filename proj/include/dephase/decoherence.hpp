#ifndef DEPHASE_DECOHERENCE_HPP
#define DEPHASE_DECOHERENCE_HPP

#include "dephase/quadrature.hpp"
#include "dephase/spectral.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dephase {

// Instantaneous bit-flip pulse instants 0 < t_1 < ... < t_s.
struct PulseSequence {
    std::vector<double> times;
    std::optional<double> min_separation;
    std::string label;

    void validate() const; // strict monotonicity, t_1 > 0
    // Smallest of {t_1, inter-pulse gaps}; the readout margin horizon - t_s is
    // handled by check_constraint, which knows the horizon.
    double min_gap() const;
    std::size_t pulses_before(double t) const; // count of t_m < t
};

struct CoherenceTrace {
    std::vector<double> grid;      // sample times, ascending, grid[0] = 0
    std::vector<double> gamma;     // Gamma(t) per sample
    std::vector<double> coherence; // exp(-2 Gamma) per sample
    PulseSequence sequence;
    std::string bath_label;
};

// Free dephasing Gamma_0(t) = 2 int eta(w) [1 - cos(w t)] dw.
double gamma_free(const BathSpec& bath, double t, const QuadratureSettings& q = {});

// Gamma_0(infinity) = 2 int eta(w) dw; diverges for ohmic baths -> UnsupportedError.
double gamma_infinity_free(const BathSpec& bath, const QuadratureSettings& q = {});

// |y_n(w t)|^2 = |1 + (-1)^(n+1) e^{iwt} + 2 sum_m (-1)^m e^{iw t_m}|^2 with n
// the number of pulses in `seq` (all required to be <= total_t).
double filter_function(const PulseSequence& seq, double total_t, double omega);

// Gamma(t) by direct frequency integration of eta |y_n|^2, with n the number
// of pulses at instants < t.
double gamma_controlled_direct(const BathSpec& bath, const PulseSequence& seq, double t,
                               const QuadratureSettings& q = {});

// Stroboscopically sampled PDD dephasing
//   Gamma_{2n}(2n dt) = int 4 eta(w) sin^2(w n dt) tan^2(w dt / 2) dw,
// with the tan^2 poles at odd multiples of w_res = pi/dt handled by
// oscillation-aligned panel splitting and a truncated sliver around each pole
// (bounded analytically and added to the error estimate).
double gamma_pdd_stroboscopic(const BathSpec& bath, double dt, int n_cycles,
                              const QuadratureSettings& q = {});

enum class Band { small_omega, resonant };

// Same integrand restricted to [0, w_res/2] (small_omega) or
// [w_res/2, 3 w_res/2] (resonant).
double gamma_band(const BathSpec& bath, double dt, int n_cycles, Band band,
                  const QuadratureSettings& q = {});

// Upper integration limit K * w_c for this bath/settings combination.
double omega_upper_limit(const BathSpec& bath, const QuadratureSettings& q);

} // namespace dephase

#endif
