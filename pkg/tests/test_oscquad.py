import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from halffourier.errors import DomainError, NonSummableError, ToleranceNotReached
from halffourier.kernels import (
    Composite,
    Exponential,
    LimitPair,
    Scaled,
    SingularExponential,
    Sum,
    Tabulated,
    closed_form_transform,
    parse_kernel,
)
from halffourier.oscquad import (
    HalfFourierResult,
    QuadConfig,
    half_fourier,
    interval_transform,
    lemma2_lhs,
    lemma2_rhs,
    singular_model,
)
from halffourier.specfun import asymp_constant

LAMBDAS = [1.0, 10.0, 1e2, 1e3, 1e4]


def qawf(smooth, lam, p=0.0):
    """Reference transform of ``s**-p * smooth(s)`` from QUADPACK: algebraic
    weight on (0, 1], Fourier weight on [1, inf)."""
    re0, _ = integrate.quad(lambda s: smooth(s) * np.cos(lam * s), 0, 1,
                            weight="alg", wvar=(-p, 0), limit=400)
    im0, _ = integrate.quad(lambda s: smooth(s) * np.sin(lam * s), 0, 1,
                            weight="alg", wvar=(-p, 0), limit=400)
    far = lambda s: s ** -p * smooth(s)  # noqa: E731
    re1, _ = integrate.quad(far, 1, np.inf, weight="cos", wvar=lam, limlst=500)
    im1, _ = integrate.quad(far, 1, np.inf, weight="sin", wvar=lam, limlst=500)
    return (re0 + re1) - 1j * (im0 + im1)


def test_exp_example():
    r = half_fourier(parse_kernel("exp(delta=1)"), 10.0, QuadConfig(1e-10))
    assert isinstance(r, HalfFourierResult)
    assert abs(r.value - complex(1 / 101, -10 / 101)) < 1e-10
    assert r.err_est >= 0 and r.tail_cutoff > 0 and r.panels_used > 0


def test_singexp_example():
    r = half_fourier(parse_kernel("singexp(p=0.5,delta=1)"), 10.0, QuadConfig(1e-10))
    expected = math.sqrt(math.pi) * (1 + 10j) ** -0.5
    assert abs(r.value - expected) < 1e-10


@pytest.mark.parametrize("p", [0.0, 0.25, 0.5, 0.75])
@pytest.mark.parametrize("lam", LAMBDAS)
def test_closed_form_equivalence(p, lam):
    cfg = QuadConfig(1e-10)
    k = Exponential(1.0) if p == 0 else SingularExponential(p, 1.0)
    r = half_fourier(k, lam, cfg)
    assert abs(r.value - closed_form_transform(k, lam)) <= max(r.err_est, 10 * cfg.tol)


@pytest.mark.parametrize("text", ["scale(3,singexp(p=0.25,delta=2))",
                                  "sum(singexp(p=0.5,delta=1),singexp(p=0.3,delta=4))",
                                  "sum(exp(delta=0.2),singexp(p=0.9,delta=1))"])
@pytest.mark.parametrize("lam", [0.5, 30.0, 3e3])
def test_combinations_match_closed_form(text, lam):
    k = parse_kernel(text)
    r = half_fourier(k, lam, QuadConfig(1e-10))
    assert abs(r.value - k.closed_form(lam)) <= max(r.err_est, 1e-9)


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=0.05, max_value=0.95), st.floats(min_value=0.1, max_value=10.0),
       st.floats(min_value=0.01, max_value=1e4))
def test_closed_form_equivalence_random(p, delta, lam):
    k = SingularExponential(p, delta)
    r = half_fourier(k, lam, QuadConfig(1e-9))
    assert abs(r.value - k.closed_form(lam)) <= max(r.err_est, 1e-8)


def test_linearity():
    a, b = SingularExponential(0.5, 1.0), Exponential(3.0)
    cfg = QuadConfig(1e-10)
    for lam in (2.0, 200.0):
        ra, rb = half_fourier(a, lam, cfg), half_fourier(b, lam, cfg)
        rs = half_fourier(Sum(a, b), lam, cfg)
        assert abs(rs.value - (ra.value + rb.value)) <= ra.err_est + rb.err_est + rs.err_est


def test_real_part_positive_at_low_frequency():
    r = half_fourier(Exponential(1.0), 0.1)
    assert r.value.real > 0


@pytest.mark.parametrize("k", [Exponential(1.0), SingularExponential(0.5, 1.0)])
def test_riemann_lebesgue(k):
    assert abs(half_fourier(k, 1e4).value) < abs(half_fourier(k, 10.0).value)


@pytest.mark.parametrize("lam", [0.3, 2.0, 15.0])
def test_composite_against_quadpack(lam):
    # s**-0.3 exp(-s) / (1 + s): no closed form; exp tail bound
    f = lambda s: s ** -0.3 * np.exp(-s) / (1 + s)  # noqa: E731
    df = lambda s: f(s) * (-0.3 / s - 1 - 1 / (1 + s))  # noqa: E731
    k = Composite(f, df, limit=LimitPair(0.3, 1.0), tail=lambda t: math.exp(-t) * t ** -0.3)
    r = half_fourier(k, lam, QuadConfig(1e-11))
    assert abs(r.value - qawf(lambda s: np.exp(-s) / (1 + s), lam, p=0.3)) < 1e-9


def test_power_law_tail():
    # 1/(1+s)**2: tail bound 1/(1+T); large-lambda oracle from the series
    # sum_k f^(k)(0) / (i lam)**(k+1)
    k = Composite(lambda s: (1 + s) ** -2.0, lambda s: -2 * (1 + s) ** -3.0,
                  limit=LimitPair(0.0, 1.0), tail=lambda t: 1 / (1 + t))
    lam = 1e3
    series = sum((-1) ** j * math.factorial(j + 1) / (1j * lam) ** (j + 1) for j in range(6))
    r = half_fourier(k, lam, QuadConfig(1e-10))
    assert abs(r.value - series) < 1e-12
    r = half_fourier(k, 1.0, QuadConfig(1e-10))
    assert abs(r.value - qawf(lambda s: (1 + s) ** -2.0, 1.0)) < 1e-9


def test_probed_tail_without_bound():
    f = lambda s: np.exp(-2 * s)  # noqa: E731
    k = Composite(f, lambda s: -2 * f(s))
    r = half_fourier(k, 3.0, QuadConfig(1e-10))
    assert abs(r.value - 1 / (2 + 3j)) < 1e-9


def test_non_summable_detected():
    k = Composite(lambda s: 1 / (1 + s), lambda s: -1 / (1 + s) ** 2)
    with pytest.raises(NonSummableError):
        half_fourier(k, 1.0)


def test_tolerance_not_reached_carries_estimate():
    # square-root kink at s = 2 defeats a small panel budget
    f = lambda s: np.exp(-s) * (1 + np.sqrt(np.abs(s - 2)))  # noqa: E731
    k = Composite(f, lambda s: -f(s), tail=lambda t: 3 * (1 + t) * math.exp(-t))
    with pytest.raises(ToleranceNotReached) as info:
        half_fourier(k, 10.0, QuadConfig(tol=1e-12, max_panels=64))
    best = info.value.estimate
    assert isinstance(best, HalfFourierResult)
    assert best.err_est > 1e-12
    fine = half_fourier(k, 10.0, QuadConfig(tol=1e-6))
    assert abs(best.value - fine.value) < 1e-4


def test_tabulated_kernel():
    s = np.geomspace(1e-6, 40.0, 3000)
    k = Tabulated(s, s ** -0.5 * np.exp(-s), limit=LimitPair(0.5, 1.0))
    exact = SingularExponential(0.5, 1.0).closed_form(5.0)
    r = half_fourier(k, 5.0, QuadConfig(1e-8))
    # interpolation error of the samples dominates
    assert abs(r.value - exact) < 1e-5
    assert r.tail_cutoff == s[-1]


def test_split_point_independence():
    k = SingularExponential(0.5, 1.0)
    values = [half_fourier(k, 50.0, QuadConfig(1e-11, beta=b)).value for b in (0.5, 1.0, 7.0)]
    assert max(abs(v - k.closed_form(50.0)) for v in values) < 1e-10


def test_config_validation():
    with pytest.raises(DomainError):
        QuadConfig(tol=0)
    with pytest.raises(DomainError):
        QuadConfig(beta=-1)
    with pytest.raises(DomainError):
        half_fourier(Exponential(1.0), 0.0)


def test_interval_transform_finite_interval():
    value, err, panels, cutoff = interval_transform(np.cos, 3.0, 1.0, end=4.0, tol=1e-12)
    # int_1^4 exp(-3is) cos(s) ds in closed form
    g = lambda s, w: cmath.exp(1j * w * s) / (1j * w)  # noqa: E731
    exact = 0.5 * sum(g(4.0, w) - g(1.0, w) for w in (-2.0, -4.0))
    assert abs(value - exact) < 1e-12
    assert cutoff == 4.0


# -- singular model ------------------------------------------------------------

@pytest.mark.parametrize("p", [0.1, 0.3, 0.5, 0.7, 0.9])
@pytest.mark.parametrize("beta", [0.5, 1.0, 3.0, 10.0])
@pytest.mark.parametrize("lam", [0.5, 1.0, 5.0, 20.0])
def test_lemma2_grid(p, beta, lam):
    assert abs(lemma2_lhs(p, lam, beta) - lemma2_rhs(p, beta)) < 1e-9


@pytest.mark.parametrize("lam", [1.0, 10.0, 100.0])
def test_lemma2_lambda_independent(lam):
    assert abs(lemma2_lhs(0.5, lam, 1.0) - lemma2_rhs(0.5, 1.0)) < 1e-9


def test_lemma2_rhs_bound():
    gap = abs(lemma2_rhs(0.5, 10.0) - asymp_constant(0.5))
    assert gap <= (1 + 0.5 * 2 / 10) / 10 ** 0.5


def test_lemma2_rhs_large_beta():
    assert abs(lemma2_rhs(0.5, 1e8) - asymp_constant(0.5)) < 2e-4


@pytest.mark.parametrize("p, beta", [(0.25, 3.0), (0.5, 2.0)])
def test_lemma2_against_quadpack(p, beta):
    # int_0^beta exp(-it) t**-p dt with algebraic weight
    re, _ = integrate.quad(np.cos, 0, beta, weight="alg", wvar=(-p, 0))
    im, _ = integrate.quad(np.sin, 0, beta, weight="alg", wvar=(-p, 0))
    assert abs(lemma2_rhs(p, beta) - (re - 1j * im)) < 1e-12


def test_lemma2_domain():
    with pytest.raises(DomainError):
        lemma2_rhs(0.5, 0.0)
    with pytest.raises(DomainError):
        lemma2_lhs(1.0, 1.0, 1.0)


def test_singular_model_zero_frequency():
    assert singular_model(0.5, 0.0, 4.0) == pytest.approx(4.0)


@pytest.mark.parametrize("p", [0.1, 0.5, 0.9])
@pytest.mark.parametrize("beta", [0.2, 0.999])
def test_singular_model_series_matches_identity(p, beta):
    # the small-argument series and the three-term formula agree
    lam = 3.0
    assert abs(singular_model(p, lam, beta / lam) - lam ** (p - 1) * lemma2_rhs(p, beta)) < 1e-13
