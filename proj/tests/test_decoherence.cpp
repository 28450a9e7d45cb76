#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dephase/decoherence.hpp"
#include "dephase/errors.hpp"
#include "dephase/recursion.hpp"

#include <cmath>
#include <random>

using namespace dephase;

namespace {
constexpr double pi = 3.141592653589793238462643383279502884;

QuadratureSettings tight() {
    QuadratureSettings q;
    q.rel_tol = 1e-11;
    q.abs_tol = 1e-15;
    return q;
}

BathSpec fig3_bath() {
    return BathSpec::natural(SpectralModel::natural(SpectralFamily::ohmic_exp, 0.5, 100.0), 1e4,
                             0.5);
}
} // namespace

TEST_CASE("pulse sequence validation") {
    PulseSequence bad;
    bad.times = {0.2, 0.2};
    CHECK_THROWS_AS(bad.validate(), ParamError);
    bad.times = {0.0, 0.1};
    CHECK_THROWS_AS(bad.validate(), ParamError);
    PulseSequence good;
    good.times = {0.1, 0.25, 0.5};
    good.validate();
    CHECK(good.min_gap() == doctest::Approx(0.1));
    CHECK(good.pulses_before(0.25) == 1);
    CHECK(good.pulses_before(0.26) == 2);
}

TEST_CASE("gamma_free basics") {
    const auto bath = exciton_gaas_77k();
    CHECK(gamma_free(bath, 0.0) == 0.0);
    CHECK_THROWS_AS(gamma_free(bath, -1.0), DomainError);

    // frozen arbitrary-precision values for the exciton preset
    CHECK(gamma_free(bath, 0.2, tight()) == doctest::Approx(0.0551842616166306).epsilon(1e-8));
    CHECK(gamma_free(bath, 0.31, tight()) == doctest::Approx(0.124422270102793).epsilon(1e-8));
    CHECK(gamma_free(bath, 1.0, tight()) == doctest::Approx(0.560561972742129).epsilon(1e-8));
}

TEST_CASE("exciton free dephasing saturates") {
    const auto bath = exciton_gaas_77k();
    const double g8 = gamma_free(bath, 8.0, tight());
    const double g10 = gamma_free(bath, 10.0, tight());
    CHECK(std::abs(g8 - g10) / g10 < 1e-3);
}

TEST_CASE("ohmic free dephasing keeps growing") {
    const auto bath = fig3_bath();
    const double tau_c = correlation_time(bath.model);
    const double g5 = gamma_free(bath, 5.0 * tau_c, tight());
    const double g10 = gamma_free(bath, 10.0 * tau_c, tight());
    CHECK(g10 > 1.05 * g5);
}

TEST_CASE("gamma_infinity_free") {
    SUBCASE("zero coupling") {
        auto bath = BathSpec::natural(
            SpectralModel::natural(SpectralFamily::supraohmic_gauss, 0.0, 100.0), 1e4, 0.5);
        CHECK(gamma_infinity_free(bath) == doctest::Approx(0.0));
    }
    SUBCASE("exciton value and long-time cross-check") {
        const auto bath = exciton_gaas_77k();
        const double ginf = gamma_infinity_free(bath, tight());
        CHECK(ginf == doctest::Approx(0.62126812794829743).epsilon(1e-9));
        CHECK(gamma_free(bath, 50.0, tight()) == doctest::Approx(ginf).epsilon(1e-8));
    }
    SUBCASE("frozen natural-unit value") {
        auto bath = BathSpec::natural(
            SpectralModel::natural(SpectralFamily::supraohmic_gauss, 1e-4, 100.0), 1e4, 0.5);
        CHECK(gamma_infinity_free(bath, tight()) ==
              doctest::Approx(177.24612361114318).epsilon(1e-9));
    }
    SUBCASE("ohmic diverges") {
        CHECK_THROWS_AS(gamma_infinity_free(fig3_bath()), UnsupportedError);
    }
}

TEST_CASE("filter function") {
    PulseSequence empty;
    CHECK(filter_function(empty, 1.0, pi) == doctest::Approx(4.0).epsilon(1e-14));

    PulseSequence one;
    one.times = {0.5};
    CHECK(filter_function(one, 1.0, 2.0 * pi) == doctest::Approx(16.0).epsilon(1e-12));

    SUBCASE("zero frequency cancels for any n") {
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int n = 0; n <= 12; ++n) {
            PulseSequence seq;
            std::vector<double> ts;
            for (int i = 0; i < n; ++i) ts.push_back(u(rng));
            std::sort(ts.begin(), ts.end());
            seq.times = ts;
            if (n > 0 && seq.min_gap() <= 0.0) continue;
            CHECK(filter_function(seq, 1.0, 0.0) == doctest::Approx(0.0).epsilon(1e-20));
        }
    }

    SUBCASE("bounds 0 <= |y_n|^2 <= (2n+2)^2") {
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 40; ++trial) {
            const int n = 1 + trial % 8;
            std::vector<double> ts(n);
            for (auto& t : ts) t = u(rng);
            std::sort(ts.begin(), ts.end());
            PulseSequence seq;
            seq.times = ts;
            const double w = 30.0 * u(rng);
            const double v = filter_function(seq, 1.0, w);
            CHECK(v >= 0.0);
            CHECK(v <= (2.0 * n + 2.0) * (2.0 * n + 2.0) * (1.0 + 1e-12));
        }
    }

    PulseSequence beyond;
    beyond.times = {2.0};
    CHECK_THROWS_AS(filter_function(beyond, 1.0, 1.0), DomainError);
}

TEST_CASE("controlled gamma reduces to free for empty sequence") {
    const auto bath = exciton_gaas_77k();
    PulseSequence empty;
    for (double t : {0.3, 1.7}) {
        CHECK(gamma_controlled_direct(bath, empty, t, tight()) ==
              doctest::Approx(gamma_free(bath, t, tight())).epsilon(1e-10));
    }
}

TEST_CASE("controlled gamma is continuous at a pulse time") {
    const auto bath = exciton_gaas_77k();
    PulseSequence seq;
    seq.times = {0.2, 0.31};
    const double t1 = seq.times[0];
    const double below = gamma_controlled_direct(bath, seq, t1, tight());
    const double above =
        gamma_controlled_direct(bath, seq, std::nextafter(t1, 1.0), tight());
    CHECK(below == doctest::Approx(above).epsilon(1e-8));
}

TEST_CASE("direct integral agrees with the exact representation") {
    const auto bath = exciton_gaas_77k();
    PulseSequence seq;
    seq.times = {0.2, 0.31};
    Gamma0Cache cache(bath, tight());
    for (double t : {2.0, 10.0}) {
        const double direct = gamma_controlled_direct(bath, seq, t, tight());
        const double exact = gamma_controlled_exact(cache, seq, t);
        CHECK(direct == doctest::Approx(exact).epsilon(1e-6));
    }
}

TEST_CASE("stroboscopic pdd") {
    SUBCASE("zero coupling") {
        auto bath = BathSpec::natural(
            SpectralModel::natural(SpectralFamily::ohmic_exp, 0.0, 100.0), 1e4, 0.5);
        CHECK(gamma_pdd_stroboscopic(bath, 0.0015, 4) == doctest::Approx(0.0));
    }
    SUBCASE("matches the direct controlled integral") {
        const auto bath = exciton_gaas_77k();
        const double dt = 0.1;
        const int n = 5;
        PulseSequence pdd;
        for (int k = 1; k < 2 * n; ++k) pdd.times.push_back(k * dt);
        const double direct = gamma_controlled_direct(bath, pdd, 2 * n * dt, tight());
        const double strobe = gamma_pdd_stroboscopic(bath, dt, n, tight());
        CHECK(strobe == doctest::Approx(direct).epsilon(1e-6));
    }
    SUBCASE("domain errors") {
        const auto bath = fig3_bath();
        CHECK_THROWS_AS(gamma_pdd_stroboscopic(bath, -0.1, 2), DomainError);
        CHECK_THROWS_AS(gamma_pdd_stroboscopic(bath, 0.1, 0), DomainError);
    }
}

TEST_CASE("band integrals stay below the full integral") {
    const auto bath = fig3_bath();
    const double dt = 0.0015;
    for (int n : {1, 8, 64}) {
        const double full = gamma_pdd_stroboscopic(bath, dt, n, tight());
        const double sm = gamma_band(bath, dt, n, Band::small_omega, tight());
        const double res = gamma_band(bath, dt, n, Band::resonant, tight());
        CHECK(sm >= 0.0);
        CHECK(res >= 0.0);
        CHECK(sm <= full * (1.0 + 1e-9));
        CHECK(res <= full * (1.0 + 1e-9));
        CHECK(sm + res <= full * (1.0 + 1e-9));
    }
}

TEST_CASE("temperature monotonicity of controlled dephasing") {
    auto model = SpectralModel::natural(SpectralFamily::supraohmic_gauss, 1e-3, 5.0);
    PulseSequence seq;
    seq.times = {0.3, 0.8};
    double prev = 0.0;
    for (double temperature : {1.0, 5.0, 25.0, 125.0}) {
        auto bath = BathSpec::natural(model, temperature, 0.5);
        const double g = gamma_controlled_direct(bath, seq, 2.0, tight());
        CHECK(g >= prev);
        prev = g;
    }
}
