import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from halffourier.errors import DomainError, SimulationError
from halffourier.kernels import (
    Exponential,
    LimitPair,
    SingularExponential,
    Tabulated,
    parse_kernel,
)
from halffourier.memory import (
    ModeParams,
    convolution_weights,
    decay_envelope_experiment,
    decay_forecast,
    kernel_cutoff,
    resolvent_growth_proxy,
    simulate_mode,
    stable_dt,
)
from halffourier.oscquad import QuadConfig

PROXY_GRID = np.geomspace(1e2, 1e5, 20)


# -- forecasts ----------------------------------------------------------------

def test_forecast_p0():
    f = decay_forecast(LimitPair(0.0, 1.0))
    assert (f.resolvent_exponent, f.decay_exponent, f.optimal_at_p0) == (2.0, 0.5, True)


def test_forecast_examples():
    assert decay_forecast(LimitPair(0.5, 1.0)).decay_exponent == pytest.approx(2 / 3)
    near_one = decay_forecast(LimitPair(1 - 1e-9, 1.0))
    assert near_one.decay_exponent == pytest.approx(1.0, abs=1e-8)
    assert not near_one.optimal_at_p0


@given(st.floats(min_value=0.0, max_value=0.999), st.floats(min_value=1e-3, max_value=1e3))
def test_forecast_identities(p, ell):
    f = decay_forecast(LimitPair(p, ell))
    assert f.decay_exponent * f.resolvent_exponent == pytest.approx(1.0, rel=1e-15)
    assert 1 < f.resolvent_exponent <= 2
    assert 0.5 <= f.decay_exponent < 1
    assert f.optimal_at_p0 == (p == 0)
    if f.optimal_at_p0:
        assert f.decay_exponent == 0.5


@pytest.mark.parametrize("ell", [0.0, -1.0])
def test_forecast_needs_positive_ell(ell):
    with pytest.raises(DomainError):
        decay_forecast(LimitPair(0.5, ell))


def test_limit_pair_validation():
    with pytest.raises(DomainError):
        LimitPair(1.0, 1.0)
    with pytest.raises(DomainError):
        LimitPair(0.5, math.inf)


# -- resolvent proxy ---------------------------------------------------------------

@pytest.mark.parametrize("text, exponent", [("exp(delta=1)", 2.0),
                                            ("singexp(p=0.5,delta=1)", 1.5)])
def test_proxy_exponent(text, exponent):
    report = resolvent_growth_proxy(parse_kernel(text), PROXY_GRID)
    assert report.exponent == pytest.approx(exponent, abs=0.05)
    assert len(report.rows) == 20 and report.skipped == ()


def test_proxy_closed_form_values():
    report = resolvent_growth_proxy(SingularExponential(0.5, 1.0), [10.0, 1e3])
    for lam, g in report.rows:
        assert g == pytest.approx(lam / (math.sqrt(math.pi) * (1 + lam ** 2) ** -0.25))


def test_proxy_prefactor():
    report = resolvent_growth_proxy(SingularExponential(0.5, 1.0), [1e4])
    lam, g = report.rows[0]
    assert report.prefactor == pytest.approx(1 / math.sqrt(math.pi))
    assert g * lam ** (0.5 - 2) == pytest.approx(report.prefactor, rel=0.02)


def test_proxy_quadrature_path():
    k = SingularExponential(0.25, 2.0)
    a = resolvent_growth_proxy(k, [1.0, 50.0], QuadConfig(1e-11), closed_form=False)
    b = resolvent_growth_proxy(k, [1.0, 50.0])
    for (_, g1), (_, g2) in zip(a.rows, b.rows):
        assert g1 == pytest.approx(g2, rel=1e-9)


def test_proxy_tabulated_without_limit():
    s = np.geomspace(1e-4, 30.0, 2000)
    report = resolvent_growth_proxy(Tabulated(s, np.exp(-s)), [1.0, 10.0])
    assert math.isnan(report.prefactor)
    assert report.rows[0][1] == pytest.approx(math.sqrt(2), rel=1e-3)


# -- simulator -------------------------------------------------------------------

def test_weights_integrate_kernel():
    k = SingularExponential(0.5, 1.0)
    dt = 0.01
    cutoff = kernel_cutoff(k, dt)
    w = convolution_weights(k, dt, cutoff)
    assert w.sum() == pytest.approx(k.mass(), rel=1e-7)
    # exact for linear functions: int mu(s) s ds = Gamma(1.5) on (0, inf)
    s = dt * np.arange(w.size)
    assert w @ s == pytest.approx(math.gamma(1.5), rel=1e-6)


def test_cutoff_tail_fraction():
    k = Exponential(1.0)
    cutoff = kernel_cutoff(k, 0.01)
    assert k.tail_mass(cutoff) <= 1e-8 * k.mass()


def test_undamped_limit():
    k = parse_kernel("scale(1e-12,exp(delta=1))")
    period = 2 * math.pi
    dt = 0.1 * period / math.sqrt(1 + 1e-12)
    traj = simulate_mode(ModeParams(1.0, k), 100 * period, dt)
    e0 = traj.energy[0]
    assert np.max(np.abs(traj.energy - e0)) <= 1e-6 * e0
    np.testing.assert_allclose(traj.u, np.cos(traj.t), atol=1e-8)


def test_zero_data_stays_zero():
    traj = simulate_mode(ModeParams(1.0, Exponential(1.0), u0=0.0, v0=0.0), 20.0, 0.05)
    assert np.all(traj.u == 0) and np.all(traj.v == 0) and np.all(traj.energy == 0)


def test_trajectory_shape():
    traj = simulate_mode(ModeParams(2.0, Exponential(1.0)), 5.0, 0.1)
    assert traj.t.size == traj.u.size == traj.v.size == traj.energy.size == 51
    assert np.all(np.diff(traj.t) > 0)
    assert np.all(traj.energy >= 0)
    assert traj.kernel_mass == pytest.approx(1.0, rel=1e-7)
    assert traj.samples[0] == (0.0, 1.0, 0.0, traj.energy[0])
    # zero history: the memory term starts at M (u0 - 0)**2 / 2
    assert traj.energy[0] == pytest.approx(0.5 * 2.0 + 0.5 * traj.kernel_mass, rel=1e-12)


@pytest.mark.parametrize("text", ["exp(delta=1)", "singexp(p=0.5,delta=1)",
                                  "sum(exp(delta=2),singexp(p=0.3,delta=0.5))"])
def test_dissipation(text):
    k = parse_kernel(text)
    dt = 0.5 * stable_dt(1.0, k.mass())
    traj = simulate_mode(ModeParams(1.0, k), 50.0, dt)
    assert np.all(np.diff(traj.energy) <= 1e-6 * traj.energy[0])
    assert traj.energy[-1] < 0.5 * traj.energy[0]


@pytest.mark.parametrize("k, order", [(Exponential(1.0), 2.0),
                                      (SingularExponential(0.5, 0.5), 1.5)])
def test_dt_refinement_order(k, order):
    # errors against a fine reference on the shared grid points; the s**-p
    # weight limits the order to 2 - p
    ref = simulate_mode(ModeParams(1.0, k), 20.0, 0.2 / 64)
    errors = []
    for m in (64, 32, 16, 8):
        traj = simulate_mode(ModeParams(1.0, k), 20.0, 0.2 / 64 * m)
        errors.append(np.max(np.abs(traj.u - ref.u[::m])))
    rates = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
    assert np.all(rates > order - 0.25)


def test_history_enters_convolution():
    k = Exponential(1.0)
    rest = simulate_mode(ModeParams(1.0, k, u0=1.0, history=np.ones_like), 10.0, 0.05)
    # a past equal to u0 removes the initial memory energy
    fresh = simulate_mode(ModeParams(1.0, k, u0=1.0), 10.0, 0.05)
    assert rest.energy[0] == pytest.approx(0.5)
    assert rest.energy[0] < fresh.energy[0]
    assert not np.allclose(rest.u, fresh.u)


def test_instability_detected():
    # negative memory feeds energy in; alpha + M = 1 keeps the local part stable
    k = parse_kernel("scale(-1,exp(delta=1))")
    with pytest.raises(SimulationError, match="instability"):
        simulate_mode(ModeParams(2.0, k), 500.0, 0.05)


def test_dt_rule_enforced():
    with pytest.raises(SimulationError, match="resolution"):
        simulate_mode(ModeParams(100.0, Exponential(1.0)), 1.0, 0.1)


def test_negative_stiffness_rejected():
    with pytest.raises(SimulationError):
        simulate_mode(ModeParams(0.5, parse_kernel("scale(-1,exp(delta=1))")), 1.0, 0.01)


def test_mode_params_validation():
    with pytest.raises(DomainError):
        ModeParams(0.0, Exponential(1.0))
    with pytest.raises(DomainError):
        simulate_mode(ModeParams(1.0, Exponential(1.0)), 1.0, 0.0)


# -- envelope -----------------------------------------------------------------------

def test_envelope_singexp():
    res = decay_envelope_experiment(SingularExponential(0.5, 1.0), None,
                                    [1.0, 10.0, 100.0, 1000.0], 200.0, 0.05)
    assert res.bound == pytest.approx(2 / 3)
    assert res.exponent <= res.bound + 0.1
    assert res.envelope[0] == pytest.approx(1.0)
    assert set(res.mode_exponents) == {1.0, 10.0, 100.0, 1000.0}


def test_envelope_exponential_dense_family():
    # a dense family of eigenvalues over three decades
    res = decay_envelope_experiment(Exponential(1.0), None, np.geomspace(1, 1e3, 19), 200.0, 0.05)
    assert res.bound == 0.5
    assert res.exponent <= 0.6
