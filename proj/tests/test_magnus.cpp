#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dephase/errors.hpp"
#include "dephase/magnus.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace dephase;

namespace {

// brute-force double sum over interval pairs, independent of the prefix-sum path
double a2_reference(const TogglingProfile& p) {
    double acc = 0.0;
    std::vector<double> len(p.signs.size());
    for (std::size_t k = 0; k < len.size(); ++k)
        len[k] = p.breakpoints[k + 1] - p.breakpoints[k];
    for (std::size_t k = 1; k < len.size(); ++k)
        for (std::size_t j = 0; j < k; ++j)
            acc += (p.signs[k] - p.signs[j]) * len[k] * len[j];
    return acc;
}

} // namespace

TEST_CASE("profiles from sequences") {
    SUBCASE("pdd cycle") {
        PulseSequence seq;
        seq.times = {0.1};
        const auto p = profile_from_sequence(seq, 0.2);
        REQUIRE(p.signs.size() == 2);
        CHECK(p.signs[0] == 1);
        CHECK(p.signs[1] == -1);
    }
    SUBCASE("cp cycle") {
        PulseSequence seq;
        seq.times = {0.1, 0.3};
        const auto p = profile_from_sequence(seq, 0.4);
        REQUIRE(p.signs.size() == 3);
        CHECK(p.signs[0] == 1);
        CHECK(p.signs[1] == -1);
        CHECK(p.signs[2] == 1);
    }
    SUBCASE("empty sequence") {
        const auto p = profile_from_sequence(PulseSequence{}, 1.0);
        REQUIRE(p.signs.size() == 1);
        CHECK(p.signs[0] == 1);
    }
    SUBCASE("pulses at or beyond the total are rejected") {
        PulseSequence seq;
        seq.times = {1.0};
        CHECK_THROWS_AS(profile_from_sequence(seq, 1.0), ParamError);
    }
}

TEST_CASE("first-order coefficient") {
    PulseSequence pdd;
    pdd.times = {0.1};
    CHECK(magnus_a1_coefficient(profile_from_sequence(pdd, 0.2)) == doctest::Approx(0.0));

    PulseSequence cp;
    cp.times = {0.1, 0.3};
    CHECK(magnus_a1_coefficient(profile_from_sequence(cp, 0.4)) == doctest::Approx(0.0));

    PulseSequence third;
    third.times = {1.0 / 3.0};
    CHECK(magnus_a1_coefficient(profile_from_sequence(third, 1.0)) ==
          doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("second-order coefficient") {
    SUBCASE("single pdd cycle") {
        PulseSequence pdd;
        pdd.times = {0.1};
        CHECK(magnus_a2_coefficient(profile_from_sequence(pdd, 0.2)) ==
              doctest::Approx(-2.0 * 0.1 * 0.1).epsilon(1e-13));
    }
    SUBCASE("cp cycle cancels term by term") {
        PulseSequence cp;
        cp.times = {0.1, 0.3};
        CHECK(magnus_a2_coefficient(profile_from_sequence(cp, 0.4)) ==
              doctest::Approx(0.0).epsilon(1e-15));
    }
    SUBCASE("six shrinking cp cycles cancel exactly") {
        const auto ticks = gen_interp_smooth(0.1, 0.01, 100.0);
        // cycle delays 0.10 .. 0.06 then 0.05: six cycles end at t = 1.8
        const std::int64_t total = static_cast<std::int64_t>(std::llround(1.8 / ticks.tick));
        TickSequence head = ticks;
        head.ticks.erase(std::remove_if(head.ticks.begin(), head.ticks.end(),
                                        [&](std::int64_t k) { return k >= total; }),
                         head.ticks.end());
        const auto check = verify_second_order(head, total);
        CHECK(check.exact);
        CHECK(check.a1_ticks == 0);
        CHECK(check.a2_ticks2 == 0);
        CHECK(check.cancels);
    }
}

TEST_CASE("verify_second_order on generated protocols") {
    SUBCASE("one pdd cycle fails at second order") {
        const auto pdd = gen_pdd(0.1, 0.2000001); // pulse at 0.1 and 0.2 inside? keep one pulse
        TickSequence cycle;
        cycle.tick = pdd.tick;
        cycle.ticks = {pdd.ticks.front()};
        const std::int64_t total = 2 * pdd.ticks.front();
        const auto check = verify_second_order(cycle, total);
        CHECK(check.a1_ticks == 0);
        CHECK_FALSE(check.cancels);
        CHECK(check.a2 == doctest::Approx(-2.0 * 0.1 * 0.1).epsilon(1e-12));
    }
    SUBCASE("whole-cycle cpdd cancels") {
        const auto cp = gen_cpdd(0.1, 10.0);
        // whole cycles span multiples of 4 dt_cp
        const std::int64_t cycle_ticks = 4 * cp.ticks.front();
        const std::int64_t total = (cp.ticks.back() / cycle_ticks) * cycle_ticks;
        TickSequence head = cp;
        head.ticks.erase(std::remove_if(head.ticks.begin(), head.ticks.end(),
                                        [&](std::int64_t k) { return k >= total; }),
                         head.ticks.end());
        const auto check = verify_second_order(head, total);
        CHECK(check.cancels);
    }
    SUBCASE("abrupt interpolated sequence cancels over whole cycles") {
        const auto ab = gen_interp_abrupt(0.1, 10.0);
        // first cycle [0, 0.4], then cycles of length 0.2
        const double t_end = 0.4 + 0.2 * 4;
        const std::int64_t total = static_cast<std::int64_t>(std::llround(t_end / ab.tick));
        TickSequence head = ab;
        head.ticks.erase(std::remove_if(head.ticks.begin(), head.ticks.end(),
                                        [&](std::int64_t k) { return k >= total; }),
                         head.ticks.end());
        const auto check = verify_second_order(head, total);
        CHECK(check.cancels);
    }
}

TEST_CASE("time-symmetric profiles have vanishing a2") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.05, 0.4);
    for (int trial = 0; trial < 12; ++trial) {
        // build a symmetric pulse pattern about T/2
        std::vector<double> half;
        double t = 0.0;
        const int k = 1 + trial % 4;
        for (int i = 0; i < k; ++i) half.push_back(t += u(rng));
        const double total = 2.0 * (t + u(rng));
        std::vector<double> times = half;
        for (auto it = half.rbegin(); it != half.rend(); ++it) {
            const double mirrored = total - *it;
            if (mirrored > times.back()) times.push_back(mirrored);
        }
        PulseSequence seq;
        seq.times = times;
        // a(t) = a(T - t) requires an even number of sign flips up to the middle
        const auto p = profile_from_sequence(seq, total);
        bool symmetric = true;
        for (std::size_t i = 0; i < p.signs.size(); ++i)
            if (p.signs[i] != p.signs[p.signs.size() - 1 - i]) symmetric = false;
        if (!symmetric) continue;
        CHECK(magnus_a2_coefficient(p) ==
              doctest::Approx(0.0).scale(total * total).epsilon(1e-12));
    }
}

TEST_CASE("prefix-sum a2 matches the brute-force double sum") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(0.01, 0.5);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> times;
        double t = 0.0;
        const int k = 1 + trial % 9;
        for (int i = 0; i < k; ++i) times.push_back(t += u(rng));
        const double total = t + u(rng);
        PulseSequence seq;
        seq.times = times;
        const auto p = profile_from_sequence(seq, total);
        CHECK(magnus_a2_coefficient(p) ==
              doctest::Approx(a2_reference(p)).epsilon(1e-12).scale(total * total));
    }
}

TEST_CASE("scaling of the coefficients") {
    PulseSequence seq;
    seq.times = {0.013, 0.4, 0.55};
    const double total = 0.9;
    const double lambda = 3.7;
    PulseSequence scaled;
    for (double t : seq.times) scaled.times.push_back(lambda * t);
    const auto p1 = profile_from_sequence(seq, total);
    const auto p2 = profile_from_sequence(scaled, lambda * total);
    CHECK(magnus_a1_coefficient(p2) ==
          doctest::Approx(lambda * magnus_a1_coefficient(p1)).epsilon(1e-12));
    CHECK(magnus_a2_coefficient(p2) ==
          doctest::Approx(lambda * lambda * magnus_a2_coefficient(p1)).epsilon(1e-12));
}

TEST_CASE("concatenation additivity of a2") {
    // c2(concat) = c2(block1) + c2(block2) + cross term from the first block's
    // a1 interacting with the second block's intervals; verified against the
    // direct double sum.
    PulseSequence a;
    a.times = {0.1, 0.25};
    PulseSequence b;
    b.times = {0.05, 0.3};
    const double ta = 0.4, tb = 0.5;
    PulseSequence cat;
    cat.times = a.times;
    // block a ends with an even number of flips, so block b starts at +1 again
    for (double t : b.times) cat.times.push_back(ta + t);
    const auto pa = profile_from_sequence(a, ta);
    const auto pb = profile_from_sequence(b, tb);
    const auto pc = profile_from_sequence(cat, ta + tb);

    double cross = 0.0;
    {
        // sum_{k in b, j in a} (s_k - s_j) L_k L_j
        //   = (sum_b s L) * (sum_a L) - (sum_b L) * (sum_a s L)
        double la = 0.0, sa = 0.0, lb = 0.0, sb = 0.0;
        for (std::size_t k = 0; k < pa.signs.size(); ++k) {
            const double len = pa.breakpoints[k + 1] - pa.breakpoints[k];
            la += len;
            sa += pa.signs[k] * len;
        }
        for (std::size_t k = 0; k < pb.signs.size(); ++k) {
            const double len = pb.breakpoints[k + 1] - pb.breakpoints[k];
            lb += len;
            sb += pb.signs[k] * len;
        }
        cross = sb * la - lb * sa;
    }
    const double expected = magnus_a2_coefficient(pa) + magnus_a2_coefficient(pb) + cross;
    CHECK(magnus_a2_coefficient(pc) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(magnus_a2_coefficient(pc) == doctest::Approx(a2_reference(pc)).epsilon(1e-12));
}
