#ifndef DEPHASE_MAGNUS_HPP
#define DEPHASE_MAGNUS_HPP

#include "dephase/sequences.hpp"

#include <cstdint>
#include <vector>

namespace dephase {

// Piecewise-constant sign a(t) of the sigma_z coupling in the control frame:
// starts at +1 and flips at every pulse.  Stored on an integer tick grid when
// one is available (tick > 0), which makes the cancellation checks exact.
struct TogglingProfile {
    double tick = 0.0;                      // 0: breakpoints carry raw times
    std::vector<double> breakpoints;        // 0 = tau_0 < ... < tau_K = T
    std::vector<std::int64_t> break_ticks;  // same, in ticks (empty when tick == 0)
    std::vector<int> signs;                 // +1 / -1 per interval, size K

    std::size_t intervals() const { return signs.size(); }
};

TogglingProfile profile_from_sequence(const PulseSequence& seq, double total);
TogglingProfile profile_from_ticks(const TickSequence& seq, std::int64_t total_ticks);

// First-order Magnus coefficient of the sigma_z x B_z direction:
// c1 = int_0^T a(t) dt = sum_k sign_k (tau_{k+1} - tau_k).
double magnus_a1_coefficient(const TogglingProfile& p);

// Second-order coefficient of the commutator direction, using
// [H(t1), H(t2)] = (a(t1) - a(t2)) [sigma_z x B_z, sigma_0 x B_0]:
// c2 = int_0^T dt1 int_0^t1 dt2 (a(t1) - a(t2))
//    = sum_{k > j} (sign_k - sign_j) len_k len_j.
double magnus_a2_coefficient(const TogglingProfile& p);

struct MagnusCheck {
    double a1 = 0.0;
    double a2 = 0.0;
    std::int64_t a1_ticks = 0;   // exact, when a tick grid is available
    __int128 a2_ticks2 = 0;      // exact, in ticks^2
    bool exact = false;          // integer-tick arithmetic was used
    bool cancels = false;        // a1 == 0 and a2 == 0 (exactly, when exact)
};

// Verifies first- and second-order cancellation for a sequence over [0, total].
MagnusCheck verify_second_order(const TickSequence& seq, std::int64_t total_ticks);
MagnusCheck verify_second_order(const PulseSequence& seq, double total);

} // namespace dephase

#endif
