"""Smoke tests for the pybind11 module."""

import math

import pytest

import dephase as dp


@pytest.fixture(scope="module")
def bath():
    return dp.exciton_gaas_77k()


@pytest.fixture(scope="module")
def cache(bath):
    return dp.Gamma0Cache(bath, dp.QuadratureSettings(rel_tol=1e-10), 0.1 / 1024.0)


def test_preset_and_units(bath):
    assert bath.alpha == 0.5
    tau_c = dp.correlation_time(bath.model)
    assert abs(tau_c - 2.07) / 2.07 < 0.01


def test_eta_and_density(bath):
    wc = bath.model.omega_c
    iw = dp.eval_spectral_density(bath.model, wc)
    assert iw == pytest.approx(bath.model.coupling * wc**3 * math.exp(-1.0))
    assert dp.eval_eta(bath, wc) > 0.0
    with pytest.raises(dp.DephaseError):
        dp.eval_eta(bath, 0.0)


def test_gamma_free_saturates(bath):
    g8 = dp.gamma_free(bath, 8.0)
    g10 = dp.gamma_free(bath, 10.0)
    assert abs(g8 - g10) / g10 < 1e-3
    assert dp.gamma_free(bath, 0.0) == 0.0


def test_exact_matches_direct(bath, cache):
    times = [0.2, 0.31]
    exact = dp.gamma_controlled_exact(cache, times, 2.0)
    direct = dp.gamma_controlled_direct(bath, times, 2.0)
    assert exact == pytest.approx(direct, rel=1e-6)


def test_two_pulse_asymptote(bath, cache):
    g_inf = cache.gamma0_infinity()
    g2 = (
        g_inf
        - 2.0 * cache.gamma0(0.31)
        + 2.0 * cache.gamma0(0.2)
        + 4.0 * cache.gamma0(0.11)
    )
    assert g2 < g_inf


def test_sequences():
    assert dp.gen_pdd(0.1, 0.35) == pytest.approx([0.1, 0.2, 0.3])
    assert dp.gen_udd(2, 10.0) == pytest.approx([2.5, 7.5])
    assert dp.udd_max_pulses(10.0, 0.1) == 14
    assert dp.gen_cdd(0.1, 2) == pytest.approx([0.1, 0.3])
    report = dp.check_constraint(dp.gen_udd(40, 10.0), 0.1, 10.0)
    assert not report["constraint_ok"]


def test_filter_function():
    assert dp.filter_function([], 1.0, math.pi) == pytest.approx(4.0)
    assert dp.filter_function([0.5], 1.0, 2 * math.pi) == pytest.approx(16.0)


def test_magnus_cancellation():
    cp = [0.1, 0.3]
    out = dp.verify_second_order(cp, 0.4)
    assert out["cancels"]
    pdd = [0.1]
    out = dp.verify_second_order(pdd, 0.2)
    assert not out["cancels"]
    assert out["a2"] == pytest.approx(-2.0 * 0.1 * 0.1)


def test_asymptotics(bath, cache):
    dgi = dp.delta_gamma_infinity(bath, 0.3)
    assert dgi["value"] == pytest.approx(7.27632361741e-5, rel=1e-6)
    rate, t2 = dp.t2_effective(bath, 0.3)
    assert rate == pytest.approx(dgi["value"] / 0.3)
    rep = dp.saturation_analysis(cache, 0.2)
    assert rep["converged"]
    assert rep["omega_res"] == pytest.approx(math.pi / 0.2)


def test_trace(cache):
    grid, gamma, coherence = dp.compute_trace(cache, [0.2, 0.4], 1.0, 0.01)
    assert grid[0] == 0.0
    assert gamma[0] == 0.0
    for g, c in zip(gamma, coherence):
        assert c == pytest.approx(math.exp(-2.0 * g))
