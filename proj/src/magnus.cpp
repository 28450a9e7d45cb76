#include "dephase/magnus.hpp"
#include "dephase/errors.hpp"

#include <cmath>

namespace dephase {

TogglingProfile profile_from_sequence(const PulseSequence& seq, double total) {
    seq.validate();
    if (!(total > 0.0)) throw ParamError("profile requires total > 0");
    if (!seq.times.empty() && !(seq.times.back() < total))
        throw ParamError("pulses must lie strictly inside (0, total)");
    TogglingProfile p;
    p.breakpoints.push_back(0.0);
    int sign = +1;
    for (double t : seq.times) {
        p.breakpoints.push_back(t);
        p.signs.push_back(sign);
        sign = -sign;
    }
    p.breakpoints.push_back(total);
    p.signs.push_back(sign);
    return p;
}

TogglingProfile profile_from_ticks(const TickSequence& seq, std::int64_t total_ticks) {
    if (!(seq.tick > 0.0)) throw ParamError("tick sequence has no tick size");
    if (total_ticks <= 0) throw ParamError("profile requires total > 0");
    if (!seq.ticks.empty() && seq.ticks.back() >= total_ticks)
        throw ParamError("pulses must lie strictly inside (0, total)");
    TogglingProfile p;
    p.tick = seq.tick;
    p.break_ticks.push_back(0);
    int sign = +1;
    for (std::int64_t k : seq.ticks) {
        if (k <= p.break_ticks.back()) throw ParamError("pulse ticks must be increasing and > 0");
        p.break_ticks.push_back(k);
        p.signs.push_back(sign);
        sign = -sign;
    }
    p.break_ticks.push_back(total_ticks);
    p.signs.push_back(sign);
    p.breakpoints.reserve(p.break_ticks.size());
    for (std::int64_t k : p.break_ticks)
        p.breakpoints.push_back(static_cast<double>(k) * seq.tick);
    return p;
}

double magnus_a1_coefficient(const TogglingProfile& p) {
    if (!p.break_ticks.empty()) {
        std::int64_t acc = 0;
        for (std::size_t k = 0; k < p.signs.size(); ++k)
            acc += p.signs[k] * (p.break_ticks[k + 1] - p.break_ticks[k]);
        return static_cast<double>(acc) * p.tick;
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < p.signs.size(); ++k)
        acc += p.signs[k] * (p.breakpoints[k + 1] - p.breakpoints[k]);
    return acc;
}

namespace {

// c2 = sum_{k>j} (s_k - s_j) L_k L_j, evaluated in O(K) via prefix sums:
// sum_k L_k (s_k * P_{k-1} - Q_{k-1}) with P = sum L, Q = sum s L.
template <typename Len, typename Acc>
Acc a2_sum(const std::vector<int>& signs, const std::vector<Len>& len) {
    Acc prefix_len = 0, prefix_signed = 0, acc = 0;
    for (std::size_t k = 0; k < signs.size(); ++k) {
        const Acc lk = static_cast<Acc>(len[k]);
        acc += lk * (static_cast<Acc>(signs[k]) * prefix_len - prefix_signed);
        prefix_len += lk;
        prefix_signed += static_cast<Acc>(signs[k]) * lk;
    }
    return acc;
}

} // namespace

double magnus_a2_coefficient(const TogglingProfile& p) {
    if (!p.break_ticks.empty()) {
        std::vector<std::int64_t> len(p.signs.size());
        for (std::size_t k = 0; k < len.size(); ++k)
            len[k] = p.break_ticks[k + 1] - p.break_ticks[k];
        const __int128 acc = a2_sum<std::int64_t, __int128>(p.signs, len);
        return static_cast<double>(acc) * p.tick * p.tick;
    }
    std::vector<double> len(p.signs.size());
    for (std::size_t k = 0; k < len.size(); ++k)
        len[k] = p.breakpoints[k + 1] - p.breakpoints[k];
    return a2_sum<double, double>(p.signs, len);
}

MagnusCheck verify_second_order(const TickSequence& seq, std::int64_t total_ticks) {
    const TogglingProfile p = profile_from_ticks(seq, total_ticks);
    MagnusCheck out;
    out.exact = true;
    std::vector<std::int64_t> len(p.signs.size());
    for (std::size_t k = 0; k < len.size(); ++k)
        len[k] = p.break_ticks[k + 1] - p.break_ticks[k];
    for (std::size_t k = 0; k < len.size(); ++k)
        out.a1_ticks += p.signs[k] * len[k];
    out.a2_ticks2 = a2_sum<std::int64_t, __int128>(p.signs, len);
    out.a1 = static_cast<double>(out.a1_ticks) * p.tick;
    out.a2 = static_cast<double>(out.a2_ticks2) * p.tick * p.tick;
    out.cancels = out.a1_ticks == 0 && out.a2_ticks2 == 0;
    return out;
}

MagnusCheck verify_second_order(const PulseSequence& seq, double total) {
    const TogglingProfile p = profile_from_sequence(seq, total);
    MagnusCheck out;
    out.exact = false;
    out.a1 = magnus_a1_coefficient(p);
    out.a2 = magnus_a2_coefficient(p);
    // float path: zero only up to rounding of the time representation
    const double scale1 = total;
    const double scale2 = total * total;
    out.cancels = std::abs(out.a1) <= 1e-12 * scale1 && std::abs(out.a2) <= 1e-12 * scale2;
    return out;
}

} // namespace dephase
