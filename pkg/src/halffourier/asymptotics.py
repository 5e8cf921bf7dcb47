"""Quantitative Riemann-Lebesgue asymptotics on the half line.

For ``s**p f(s) -> ell`` the scaled transform ``lam**(1-p) f^(lam)`` tends
to ``ell * m(p)``.  This module measures that convergence on finite
frequency grids and exposes the pieces of the argument behind it as
numerical identities: the integration-by-parts identity on ``[alpha, inf)``,
the ``p = 0`` formula, the three-term split ``I1 + I2 + I3`` and the
staircase cut-point function ``beta(lam)``.
"""
import bisect
import cmath
import math
from dataclasses import dataclass, field
import numpy as np

from halffourier import _quad
from halffourier.errors import DomainError, ToleranceNotReached
from halffourier.kernels.base import LimitPair
from halffourier.oscquad import QuadConfig, half_fourier, interval_transform, lemma2_lhs
from halffourier.specfun import asymp_constant

_EPS = np.finfo(float).eps


def loglog_slope(x, y):
    """Least-squares slope of ``log y`` against ``log x``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2:
        return math.nan
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


@dataclass(frozen=True)
class AsymptoteRow:
    lam: float
    scaled: complex
    deviation: float
    err_est: float = 0.0
    note: str = ""


@dataclass(frozen=True)
class AsymptoteReport:
    """Scaled transforms ``lam**(1-p) f^(lam)`` against ``target = ell m(p)``.

    ``fitted_slope`` is the least-squares slope of log deviation against
    log lambda, ignoring rows whose deviation sits at the rounding floor.
    """

    pair: LimitPair
    rows: tuple
    fitted_slope: float
    target: complex


def verify_theorem1(k, pair=None, lambda_grid=(), cfg=None, *, closed_form=False):
    """Build an :class:`AsymptoteReport` for kernel ``k`` on ``lambda_grid``.

    ``cfg.tol`` is the absolute accuracy asked of the *scaled* value, so the
    transform itself is computed to ``tol * lam**(p-1)``.  With
    ``closed_form=True`` the exact transform is used where available.
    Quadrature failures are recorded in the row's ``note`` and the best
    estimate is kept.
    """
    cfg = cfg or QuadConfig()
    pair = pair or k.limit
    if pair is None:
        raise DomainError("a limit pair is needed (pass one or use identify_limit)")
    p, ell = pair.p, pair.ell
    target = ell * asymp_constant(p)
    rows = []
    for lam in sorted(float(x) for x in lambda_grid):
        weight = lam ** (1.0 - p)
        note = ""
        exact = k.closed_form(lam) if closed_form else None
        if exact is not None:
            value, err = exact, 0.0
        else:
            try:
                res = half_fourier(k, lam, cfg.with_tol(cfg.tol / weight), pair=pair)
            except ToleranceNotReached as exc:
                res = exc.estimate
                note = "tolerance not reached"
            value, err = res.value, res.err_est
        scaled = complex(weight * value)
        rows.append(AsymptoteRow(lam, scaled, abs(scaled - target), weight * err, note))
    floor = 100 * _EPS * max(1.0, abs(target))
    usable = [r for r in rows if r.deviation > floor]
    slope = loglog_slope([r.lam for r in usable], [r.deviation for r in usable])
    return AsymptoteReport(pair, tuple(rows), slope, target)


def _exponent(k):
    return k.limit.p if k.limit is not None else 0.0


def _short_integral(func, lam, start, length, tol):
    """``int_start^(start+length) exp(-i lam s) func(s) ds``."""
    value, *_ = interval_transform(func, lam, start, end=start + length, tol=tol)
    return value


def lemma1_terms(k, lam, alpha, tol=1e-12, p=None):
    """Both sides of the integration-by-parts identity on ``[alpha, inf)``.

    Returns ``(lhs, terms)`` where ``lhs = lam**(1-p) int_alpha^inf
    exp(-i lam s) f`` and ``terms`` are the four right-hand pieces: the
    half-period integral of ``f``, the bracket ``f(alpha+pi/lam) - f(alpha)``,
    and the two integrals of ``f'``.
    """
    if not (lam > 0 and alpha > 0):
        raise DomainError("lambda and alpha must be positive")
    p = _exponent(k) if p is None else p
    lo, hi = k.support
    half = math.pi / lam
    w = lam ** (1.0 - p)
    lp = lam ** p
    itol = tol / (4 * w)
    head = dict(end=hi, scale=k.scale_length, knots=getattr(k, "s", None), tol=itol)
    lhs = w * interval_transform(k._value, lam, alpha, tail_bound=k.tail_mass, **head)[0]
    t1 = 0.5 * w * _short_integral(k._value, lam, alpha, half, itol)
    f_a, f_b = (float(v) for v in k.eval(np.array([alpha, alpha + half])))
    t2 = 1j * cmath.exp(-1j * lam * alpha) / (2 * lp) * (f_b - f_a)
    t3 = -1j / lp * interval_transform(k._deriv, lam, alpha,
                                       tail_bound=k.deriv_tail_mass, **head)[0]
    t4 = 0.5j / lp * _short_integral(k._deriv, lam, alpha, half, itol)
    return lhs, (t1, t2, t3, t4)


def check_lemma1(k, lam, alpha, tol=1e-12):
    """Residual ``|lhs - sum(terms)|`` of :func:`lemma1_terms`."""
    lhs, terms = lemma1_terms(k, lam, alpha, tol)
    return float(abs(lhs - sum(terms)))


def _from_zero(func, lam, tail_bound, scale, tol):
    """``int_0^inf exp(-i lam s) func(s) ds`` for ``func`` bounded at 0."""
    a = min(1.0 / lam, scale)
    near = _quad.singular_oscillatory(func, 0.0, lam, a, scale=scale, refine=1)
    far = interval_transform(func, lam, a, tail_bound=tail_bound, scale=scale, tol=tol)[0]
    return near + far


def p0_formula_terms(k, ell, lam, tol=1e-12):
    """The four terms whose sum equals ``lam f^(lam)`` when ``f(0+) = ell``:

    ``(lam/2) int_0^(pi/lam) e f``, ``(i/2)(f(pi/lam) - ell)``,
    ``-i int_0^inf e f'`` and ``(i/2) int_0^(pi/lam) e f'``, with
    ``e = exp(-i lam s)``.
    """
    if not lam > 0:
        raise DomainError("lambda must be positive")
    half = math.pi / lam
    itol = tol / (4 * max(lam, 1.0))
    t1 = 0.5 * lam * _quad.singular_oscillatory(k.eval, 0.0, lam, half, refine=1)
    t2 = 0.5j * (float(k.eval(half)) - ell)
    t3 = -1j * _from_zero(k.deriv, lam, k.deriv_tail_mass, k.scale_length, itol)
    t4 = 0.5j * _quad.singular_oscillatory(k.deriv, 0.0, lam, half, refine=1)
    return t1, t2, t3, t4


def check_p0_formula(k, ell, lam, tol=1e-12, cfg=None):
    """Residual between ``lam f^(lam)`` (from :func:`half_fourier`) and the
    four-term expression of :func:`p0_formula_terms`."""
    cfg = cfg or QuadConfig(tol=tol / lam)
    direct = lam * half_fourier(k, lam, cfg, pair=LimitPair(0.0, ell)).value
    return float(abs(direct - sum(p0_formula_terms(k, ell, lam, tol))))


@dataclass(frozen=True)
class Decomposition:
    """``lam**(1-p) f^(lam) = I1 + I2 + I3`` with cut point ``beta / lam``.

    ``total`` is the scaled transform computed independently (default
    split), for comparison with the sum of the three pieces.
    """

    I1: complex
    I2: complex
    I3: complex
    lam: float
    beta: float
    total: complex
    total_err: float

    @property
    def residual(self):
        return float(abs(self.I1 + self.I2 + self.I3 - self.total))


def decompose(k, pair, lam, beta, cfg=None):
    """Split the scaled transform at ``beta / lam`` into the singular model
    ``I1``, the near-origin remainder ``I2`` and the tail ``I3``.

    ``I1`` comes from direct graded quadrature, ``I2`` from quadrature of
    ``(s**p f - ell) / s**p``, ``I3`` from the far-field panels; none of
    them uses the closed-form singular integral.
    """
    cfg = cfg or QuadConfig()
    pair = pair or k.limit
    p, ell = pair.p, pair.ell
    if not p > 0:
        raise DomainError("decompose needs p > 0; use check_p0_formula for p = 0")
    if not (lam > 0 and beta > 0):
        raise DomainError("lambda and beta must be positive")
    if k.support[0] > 0:
        raise DomainError("decompose needs a kernel defined down to the origin")
    w = lam ** (1.0 - p)
    a = beta / lam
    i1 = ell * lemma2_lhs(p, lam, beta, tol=cfg.tol)

    def remainder(s):
        return k.weighted(s, p) - ell

    i2 = w * _quad.singular_oscillatory(remainder, p, lam, a, scale=k.scale_length, refine=1)
    i3 = w * interval_transform(k._value, lam, a, end=k.support[1], tail_bound=k.tail_mass,
                                scale=k.scale_length, tol=cfg.tol / w)[0]
    ref_cfg = QuadConfig(cfg.tol / w, cfg.max_panels)
    ref = half_fourier(k, lam, ref_cfg, pair=pair)
    return Decomposition(complex(i1), complex(i2), complex(i3), lam, beta,
                         complex(w * ref.value), w * ref.err_est)


def i2_bound(pair, beta, omega_value):
    """Upper bound ``beta * omega_p(beta/lam) / (1 - p)`` on ``|I2|``."""
    return beta * omega_value / (1.0 - pair.p)


@dataclass(frozen=True)
class BetaSchedule:
    """Staircase ``beta(lam) = n`` for ``lam in [lam_n, lam_(n+1))``.

    ``breakpoints`` holds ``(lam_n, n)`` for ``n = 1..n_max``; ``checks``
    holds ``(n, n * omega(n / lam_n), n / lam_n)``, the two quantities that
    must be at most ``1/n``.
    """

    breakpoints: tuple
    checks: tuple = field(default=(), compare=False)

    @property
    def lambdas(self):
        return [lam for lam, _ in self.breakpoints]

    def __call__(self, lam):
        i = bisect.bisect_right(self.lambdas, lam)
        return 0 if i == 0 else self.breakpoints[i - 1][1]


def build_beta_schedule(omega, n_max, cap=1e18):
    """Breakpoints ``lam_n``: the smallest value ``>= max(n**2, lam_(n-1)+1)``
    with ``omega(n / lam_n) <= 1 / n**2``.

    ``omega`` must be nondecreasing, so the constraint is monotone in
    ``lam`` and bisection applies.  Raises :class:`ToleranceNotReached` when
    no admissible ``lam_n`` exists below ``cap`` (``omega`` does not vanish
    at 0).
    """
    breakpoints = []
    checks = []
    prev = 0.0
    for n in range(1, int(n_max) + 1):
        target = 1.0 / n ** 2

        def ok(lam, n=n, target=target):
            return omega(n / lam) <= target

        lo = max(float(n * n), prev + 1.0)
        if ok(lo):
            lam_n = lo
        else:
            hi = lo
            while not ok(hi):
                lo = hi
                hi *= 2.0
                if hi > cap:
                    raise ToleranceNotReached(
                        f"no lambda_{n} below {cap:g}: omega does not vanish at 0")
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if ok(mid):
                    hi = mid
                else:
                    lo = mid
                if hi - lo <= 1e-12 * hi:
                    break
            lam_n = hi
        breakpoints.append((lam_n, n))
        checks.append((n, n * omega(n / lam_n), n / lam_n))
        prev = lam_n
    return BetaSchedule(tuple(breakpoints), tuple(checks))
