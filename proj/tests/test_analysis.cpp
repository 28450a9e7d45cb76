#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dephase/analysis.hpp"
#include "dephase/errors.hpp"

#include <cmath>
#include <cstring>

using namespace dephase;

namespace {
QuadratureSettings tight() {
    QuadratureSettings q;
    q.rel_tol = 1e-11;
    q.abs_tol = 1e-15;
    return q;
}
} // namespace

TEST_CASE("effective T2") {
    const auto bath = exciton_gaas_77k();
    SUBCASE("rate definition") {
        const auto t2 = t2_effective(bath, 0.3);
        const double dginf = delta_gamma_infinity(bath, 0.3).value;
        CHECK(t2.rate == doctest::Approx(dginf / 0.3).epsilon(1e-12));
        CHECK(t2.t2 == doctest::Approx(0.3 / dginf).epsilon(1e-12));
    }
    SUBCASE("zero coupling gives zero rate") {
        auto dead = bath;
        dead.model.coupling = 0.0;
        CHECK(t2_effective(dead, 0.2).rate == 0.0);
    }
    SUBCASE("rate grows with dt over the scanned range") {
        double prev = 0.0;
        for (double dt = 0.05; dt <= 0.41; dt += 0.05) {
            const double rate = t2_effective(bath, dt).rate;
            CHECK(rate >= prev);
            prev = rate;
        }
    }
}

TEST_CASE("trace computation") {
    Gamma0Cache cache(exciton_gaas_77k(), tight(), 0.2 / 1024.0);
    PulseSequence seq;
    seq.times = {0.2, 0.4, 0.6, 0.8};
    const auto trace = compute_trace(cache, seq, 1.0, {0.01, 1});
    REQUIRE(!trace.grid.empty());
    CHECK(trace.grid.front() == 0.0);
    CHECK(trace.gamma.front() == 0.0);
    CHECK(trace.coherence.front() == 1.0);
    for (std::size_t i = 0; i < trace.grid.size(); ++i) {
        CHECK(trace.coherence[i] == doctest::Approx(std::exp(-2.0 * trace.gamma[i])));
        CHECK(trace.coherence[i] <= 1.0);
        CHECK(trace.coherence[i] > 0.0);
    }
    SUBCASE("thread count does not change values") {
        const auto parallel = compute_trace(cache, seq, 1.0, {0.01, 4});
        REQUIRE(parallel.gamma.size() == trace.gamma.size());
        for (std::size_t i = 0; i < trace.gamma.size(); ++i)
            CHECK(parallel.gamma[i] == trace.gamma[i]);
    }
}

TEST_CASE("long-time coherence model") {
    Gamma0Cache cache(exciton_gaas_77k(), tight(), 0.2 / 1024.0);
    const double dt = 0.2;
    const auto rep = saturation_analysis(cache, dt);

    SUBCASE("domain guard") {
        CHECK_THROWS_AS(long_time_coherence_model(cache, dt, 0.5 * rep.t_sat), DomainError);
    }
    SUBCASE("matches the exact maxima envelope") {
        PulseSequence pdd;
        for (int k = 1; k * dt < 10.0; ++k) pdd.times.push_back(k * dt);
        for (double t : {5.1, 7.1, 9.1}) {
            const int n = static_cast<int>(std::floor(t / dt));
            const double exact =
                std::exp(-gamma_controlled_exact(cache, pdd, (n + 0.5) * dt));
            const double model = long_time_coherence_model(cache, dt, (n + 0.5) * dt);
            CHECK(model == doctest::Approx(exact).epsilon(0.05));
        }
    }
    SUBCASE("at t just past t_sat the full form reduces to the saturation value") {
        PulseSequence pdd;
        for (int k = 1; k <= rep.n_sat; ++k) pdd.times.push_back(k * dt);
        const double g_sat = gamma_controlled_exact(cache, pdd, (rep.n_sat + 0.5) * dt);
        const double t = (rep.n_sat + 0.5) * dt;
        if (t > rep.t_sat) {
            const double model = long_time_coherence_model(cache, dt, t);
            CHECK(model == doctest::Approx(std::exp(-g_sat)).epsilon(1e-6));
        }
    }
    SUBCASE("halving the increment halves the simplified log-slope") {
        const double t = 4.0 * rep.t_sat;
        const double slope = -std::log(long_time_coherence_model(cache, dt, t, true)) / t;
        CHECK(slope == doctest::Approx(rep.delta_gamma_inf / dt).epsilon(1e-9));
    }
}

TEST_CASE("maxima detection") {
    CoherenceTrace trace;
    for (int i = 0; i <= 400; ++i) {
        const double t = i * 0.01;
        trace.grid.push_back(t);
        const double c = 0.9 + 0.05 * std::cos(2.0 * 3.14159265358979324 * t / 0.5);
        trace.coherence.push_back(c);
        trace.gamma.push_back(-0.5 * std::log(c));
    }
    const auto peaks = find_maxima(trace, 0.1, 3.9);
    REQUIRE(!peaks.empty());
    for (const auto& [t, c] : peaks) {
        const double phase = std::fmod(t, 0.5);
        CHECK((phase < 0.02 || phase > 0.48));
        CHECK(c == doctest::Approx(0.95).epsilon(1e-3));
    }
    CHECK(mean_maxima(trace, 0.1, 3.9) == doctest::Approx(0.95).epsilon(1e-3));
}

TEST_CASE("readout robustness") {
    SUBCASE("constant trace") {
        CoherenceTrace trace;
        for (int i = 0; i <= 100; ++i) {
            trace.grid.push_back(i * 0.1);
            trace.coherence.push_back(0.7);
            trace.gamma.push_back(-0.5 * std::log(0.7));
        }
        CHECK(readout_robustness(trace) == 0.0);
    }
    SUBCASE("oscillation amplitude") {
        CoherenceTrace trace;
        for (int i = 0; i <= 4000; ++i) {
            const double t = i * 0.0025;
            trace.grid.push_back(t);
            trace.coherence.push_back(0.8 + 0.1 * std::sin(2.0 * 3.14159265358979324 * t / 0.1));
        }
        trace.gamma.assign(trace.grid.size(), 0.0);
        CHECK(readout_robustness(trace) == doctest::Approx(0.2).epsilon(1e-2));
    }
    SUBCASE("insufficient sampling raises a resolution error") {
        CoherenceTrace trace;
        for (int i = 0; i <= 200; ++i) {
            const double t = i * 0.05;
            trace.grid.push_back(t);
            trace.coherence.push_back(0.8 + 0.1 * std::sin(2.0 * 3.14159265358979324 * t / 0.2));
        }
        trace.gamma.assign(trace.grid.size(), 0.0);
        CHECK_THROWS_AS(readout_robustness(trace), ResolutionError);
    }
}

TEST_CASE("protocol comparison") {
    const auto bath = exciton_gaas_77k();
    ProtocolSpec pdd;
    pdd.kind = ProtocolKind::pdd;
    pdd.dt = 0.2;
    ProtocolSpec cpdd;
    cpdd.kind = ProtocolKind::cpdd;
    cpdd.dt_cp = 0.1;
    QuadratureSettings q = tight();

    const double horizon = 3.0;
    const auto cmp = compare_protocols(bath, {pdd, cpdd}, horizon, {0.005, 1}, q);
    REQUIRE(cmp.entries.size() == 2);

    SUBCASE("pdd and cpdd coincide halfway between pdd pulses") {
        const auto& tp = cmp.entries[0].trace;
        const auto& tc = cmp.entries[1].trace;
        REQUIRE(tp.grid.size() == tc.grid.size());
        for (int n = 1; n * 0.2 + 0.1 < horizon; ++n) {
            const double t = (n + 0.5) * 0.2;
            const auto it = std::lower_bound(tp.grid.begin(), tp.grid.end(), t - 1e-9);
            const std::size_t i = static_cast<std::size_t>(it - tp.grid.begin());
            REQUIRE(i < tp.grid.size());
            CHECK(tp.gamma[i] == doctest::Approx(tc.gamma[i]).epsilon(1e-8));
        }
    }
    SUBCASE("entries carry maxima between pulses") {
        for (const auto& entry : cmp.entries) {
            REQUIRE(!entry.maxima.empty());
            for (const auto& [t, c] : entry.maxima) {
                CHECK(c > 0.0);
                CHECK(c <= 1.0);
            }
        }
    }
    SUBCASE("deterministic output") {
        const auto again = compare_protocols(bath, {pdd, cpdd}, horizon, {0.005, 1}, q);
        for (std::size_t e = 0; e < cmp.entries.size(); ++e) {
            REQUIRE(again.entries[e].trace.gamma.size() == cmp.entries[e].trace.gamma.size());
            CHECK(std::memcmp(again.entries[e].trace.gamma.data(),
                              cmp.entries[e].trace.gamma.data(),
                              cmp.entries[e].trace.gamma.size() * sizeof(double)) == 0);
        }
    }
}

TEST_CASE("t2_effective matches the recursion-exact maxima envelope") {
    const auto bath = exciton_gaas_77k();
    const double dt = 0.25;
    Gamma0Cache cache(bath, tight(), dt / 40.0 / 1024.0);
    const auto rep = saturation_analysis(cache, dt);
    const double rate = t2_effective(bath, dt).rate;

    PulseSequence pdd;
    for (int k = 1; k * dt < 30.0; ++k) pdd.times.push_back(k * dt);
    double worst = 0.0;
    for (int n = 2 * rep.n_sat; (n + 0.5) * dt < 10.0 * rep.t_sat; n += 7) {
        const double t = (n + 0.5) * dt;
        const double envelope = std::exp(-gamma_controlled_exact(cache, pdd, t));
        const double model = std::exp(-t * rate);
        worst = std::max(worst, std::abs(model / envelope - 1.0));
    }
    CHECK(worst < 0.10);
}

TEST_CASE("pdd maxima sit halfway between pulses past saturation") {
    Gamma0Cache cache(exciton_gaas_77k(), tight(), 0.25 / 1024.0);
    const double dt = 0.25;
    const auto rep = saturation_analysis(cache, dt);
    PulseSequence pdd;
    for (int k = 1; k * dt < 8.0; ++k) pdd.times.push_back(k * dt);
    const double step = dt / 40.0;
    const auto trace = compute_trace(cache, pdd, 8.0, {step, 1});
    const auto peaks = find_maxima(trace, rep.t_sat + dt, 8.0 - dt);
    REQUIRE(!peaks.empty());
    for (const auto& [t, c] : peaks) {
        const double frac = std::fmod(t, dt) / dt;
        CHECK(std::abs(frac - 0.5) <= 1.0 / 40.0 + 1e-9);
    }
}
