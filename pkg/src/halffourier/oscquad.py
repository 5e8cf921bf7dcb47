"""Half Fourier transforms ``f^(lam) = int_0^inf exp(-i lam s) f(s) ds`` of
kernels with an ``s**(-p)`` singularity at the origin.

Layout of the computation for a kernel with limit pair ``(p, ell)``:

* on ``(0, a]`` with ``a = beta / lam`` the singular model ``ell s**(-p)``
  is integrated in closed form (``lam**(p-1) * lemma2_rhs(p, beta)``) and
  the bounded remainder ``s**(-p) (s**p f(s) - ell)`` by graded quadrature;
* on ``[a, T]`` panels grow geometrically away from ``a``; any panel wider
  than half a period uses Levin collocation;
* beyond ``T`` the analytic tail bound of the kernel is below ``tol / 4``.

The reported ``err_est`` is the difference between two successive
refinements plus the tail bound.  It is an estimate, not a rigorous bound.
"""
import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from halffourier import _quad
from halffourier.errors import DomainError, NonSummableError, ToleranceNotReached
from halffourier.kernels.base import LimitPair
from halffourier.specfun import asymp_constant, check_exponent, tail_integral


@dataclass(frozen=True)
class QuadConfig:
    """Quadrature controls.

    ``split_point`` fixes the end ``a`` of the singular piece; by default it
    is ``beta / lam``.
    """

    tol: float = 1e-10
    max_panels: int = 200_000
    beta: float = 1.0
    split_point: Optional[float] = None

    def __post_init__(self):
        if not self.tol > 0:
            raise DomainError("tol must be positive")
        if not self.beta > 0:
            raise DomainError("beta must be positive")
        if self.split_point is not None and not self.split_point > 0:
            raise DomainError("split_point must be positive")

    def with_tol(self, tol):
        return QuadConfig(tol, self.max_panels, self.beta, self.split_point)


@dataclass(frozen=True)
class HalfFourierResult:
    lam: float
    value: complex
    err_est: float
    panels_used: int
    tail_cutoff: float


def lemma2_rhs(p, beta, tol=1e-13):
    """``m(p) + i exp(-i beta) / beta**p - (i p / beta**p) J(1+p, beta)``
    with ``J(q, beta) = int_1^inf exp(-i beta s) s**(-q) ds``.

    Equals ``int_0^beta exp(-i t) t**(-p) dt``.  ``p = 0`` is accepted (the
    last term vanishes).
    """
    p = check_exponent(p)
    beta = float(beta)
    if not beta > 0:
        raise DomainError("beta must be positive")
    value = asymp_constant(p) + 1j * cmath.exp(-1j * beta) / beta ** p
    if p > 0:
        coef = p / beta ** p
        value -= 1j * coef * tail_integral(1.0 + p, beta, tol / coef)
    return value


def _model_series(p, z, a):
    """``int_0^a exp(-z s) s**(-p) ds = a**(1-p) sum_k (-z a)**k / (k! (k+1-p))``,
    used for ``|z a| <= 1`` where the tail-integral route loses accuracy."""
    total = 0j
    term = 1.0 + 0j
    k = 0
    while True:
        piece = term / (k + 1.0 - p)
        total += piece
        if abs(piece) < 1e-18 * abs(total):
            break
        k += 1
        term *= -z * a / k
    return a ** (1.0 - p) * total


def singular_model(p, lam, a, tol=1e-13):
    """``int_0^a exp(-i lam s) s**(-p) ds`` in closed form."""
    if lam * a <= 1.0:
        return _model_series(p, 1j * lam, a)
    scale = lam ** (p - 1.0)
    return scale * lemma2_rhs(p, lam * a, tol / scale)


def lemma2_lhs(p, lam, beta, tol=1e-12):
    """``lam**(1-p) int_0^(beta/lam) exp(-i lam s) s**(-p) ds`` by direct
    graded quadrature (no use of the closed form)."""
    p = check_exponent(p)
    if not (lam > 0 and beta > 0):
        raise DomainError("lambda and beta must be positive")
    a = beta / lam
    one = np.ones_like
    scale = lam ** (1.0 - p)
    coarse = scale * _quad.singular_oscillatory(one, p, lam, a)
    fine = scale * _quad.singular_oscillatory(one, p, lam, a, refine=1)
    err = abs(fine - coarse)
    if err > tol:
        raise ToleranceNotReached(
            f"lemma2_lhs(p={p}, lam={lam}, beta={beta}) reached {err:.3g}",
            estimate=fine, error=err)
    return fine


def _cutoff(tail_bound, abs_func, start, end, target, scale):
    """Truncation point for ``int_start^inf``; returns ``(T, bound at T)``."""
    if math.isfinite(end):
        return end, 0.0
    if tail_bound is not None and tail_bound(start) is not None:
        t = _quad.find_cutoff(tail_bound, start, target, limit=1e15)
        if t is None:
            raise NonSummableError("tail bound does not fall below the tolerance")
        return t, tail_bound(t)
    # no analytic tail: probe doubling windows (heuristic)
    lo = start
    hi = max(2.0 * start, scale)
    while True:
        piece = float(_quad.gauss_panels(abs_func, _quad.probe_edges(lo, hi, scale)))
        if not np.isfinite(piece):
            raise NonSummableError(f"non-finite mass on [{lo}, {hi}]")
        if piece <= target:
            return hi, piece
        if hi > 1e12:
            raise NonSummableError("integrand mass does not settle; looks non-summable")
        lo, hi = hi, 2.0 * hi


def _far_edges(start, end, scale, knots=None):
    if knots is not None:
        inner = knots[(knots > start) & (knots < end)]
        return np.concatenate(([start], inner, [end]))
    return _quad.graded_edges(start, end, h_max=2.0 * scale, growth=0.25)


def interval_transform(func, lam, start, *, end=math.inf, tail_bound=None, scale=1.0,
                       knots=None, tol=1e-10, max_panels=200_000):
    """``int_start^inf exp(-i lam s) func(s) ds`` for a function smooth on
    ``[start, end]`` and zero (or negligible) beyond.

    Returns ``(value, err_est, panels, cutoff)``; raises
    :class:`ToleranceNotReached` with the best value attached if the
    refinement loop cannot meet ``tol``.
    """
    if not start > 0:
        raise DomainError("start must be positive")
    abs_func = lambda s: np.abs(func(s))  # noqa: E731
    cutoff, bound = _cutoff(tail_bound, abs_func, start, end, 0.25 * tol, scale)
    if cutoff <= start:
        return 0j, bound, 0, cutoff
    edges = _far_edges(start, cutoff, scale, knots)
    value = _quad.oscillatory_panels(func, lam, edges)
    level = 0
    while True:
        level += 1
        fine_edges = _quad.refine_edges(edges, level)
        fine = _quad.oscillatory_panels(func, lam, fine_edges)
        delta = abs(fine - value)
        value = fine
        panels = fine_edges.size - 1
        if delta + bound <= tol or 2 * panels > max_panels:
            break
    err = delta + bound
    if err > tol:
        raise ToleranceNotReached(
            f"oscillatory integral on [{start}, {cutoff}] reached {err:.3g} > {tol:.3g}",
            estimate=value, error=err)
    return value, err, panels, cutoff


def _singular_piece(k, pair, lam, a, tol, max_panels):
    """``int_0^a exp(-i lam s) f(s) ds`` with the ``ell s**(-p)`` model
    subtracted and integrated in closed form."""
    p, ell = pair.p, pair.ell
    model = ell * singular_model(p, lam, a, 0.1 * tol / max(abs(ell), 1.0)) if ell else 0j

    def remainder(s):
        return k.weighted(s, p) - ell

    coarse = _quad.singular_oscillatory(remainder, p, lam, a, scale=k.scale_length)
    level = 0
    while True:
        level += 1
        fine = _quad.singular_oscillatory(remainder, p, lam, a, scale=k.scale_length,
                                          refine=level)
        delta = abs(fine - coarse)
        coarse = fine
        if delta <= 0.5 * tol or level >= 8:
            break
    return model + fine, delta, (_quad.GRADING_LEVELS + 1) * 2 ** level


def _tabulated_head(k, pair, lam, tol):
    """Power-law extension ``c s**(-p)`` below the first sample, matched at
    the first sample."""
    s0 = k.support[0]
    p = pair.p
    c = s0 ** p * float(k.eval(s0))
    return c * singular_model(p, lam, s0, 0.1 * tol / max(abs(c), 1.0))


def half_fourier(k, lam, cfg=None, pair=None):
    """Half Fourier transform of kernel ``k`` at frequency ``lam > 0``.

    ``pair`` defaults to the kernel's own limit metadata; without either,
    the kernel is treated as bounded at the origin (``p = 0``, nothing
    subtracted).

    Raises
    ------
    ToleranceNotReached
        with ``estimate`` set to the best :class:`HalfFourierResult`.
    """
    cfg = cfg or QuadConfig()
    lam = float(lam)
    if not lam > 0:
        raise DomainError(f"lambda must be positive, got {lam!r}")
    if pair is None:
        pair = k.limit if k.limit is not None else LimitPair(0.0, 0.0)
    lo, hi = k.support
    knots = getattr(k, "s", None)
    tol = cfg.tol
    if lo > 0:
        head, head_err, head_panels = _tabulated_head(k, pair, lam, tol), 0.0, 1
        start = lo
    else:
        start = cfg.split_point if cfg.split_point is not None else cfg.beta / lam
        head, head_err, head_panels = _singular_piece(k, pair, lam, start, tol, cfg.max_panels)
    try:
        far, far_err, far_panels, cutoff = interval_transform(
            k._value, lam, start, end=hi, tail_bound=k.tail_mass, scale=k.scale_length,
            knots=knots, tol=max(tol - head_err, 0.5 * tol), max_panels=cfg.max_panels)
    except ToleranceNotReached as exc:
        best = HalfFourierResult(lam, complex(head + exc.estimate), head_err + exc.error,
                                 cfg.max_panels, math.nan)
        raise ToleranceNotReached(str(exc), estimate=best, error=best.err_est) from exc
    return HalfFourierResult(lam, complex(head + far), head_err + far_err,
                             head_panels + far_panels, cutoff)
