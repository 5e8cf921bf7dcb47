"""Checks of the hypotheses placed on a kernel near the origin and at
infinity: blow-up order and amplitude, the modulus ``omega_p``, weighted
summability of ``f'``, and the exponential decay condition
``mu' + delta mu <= 0``.
"""
from dataclasses import dataclass

import numpy as np

from halffourier import _quad
from halffourier.errors import DomainError, NonSummableError
from halffourier.kernels.base import LimitPair, Tabulated


@dataclass(frozen=True)
class LimitFit:
    """Result of :func:`identify_limit`.

    ``table`` rows are ``(s, f(s), fitted)`` with ``fitted = ell * s**(-p)``.
    """

    pair: LimitPair
    residual: float
    raw_p: float
    table: tuple


def identify_limit(k, s_min=1e-6, s_max=1e-3, n=64):
    """Estimate ``(p, ell)`` in ``s**p f(s) -> ell`` from samples near zero.

    Fits ``log f = log ell - p log s`` by least squares on ``n`` log-spaced
    points.  ``p`` is clamped to [0, 1); when clamping happens ``ell`` is
    refitted with ``p`` held fixed.  ``residual`` is the RMS of the log fit.
    """
    if not 0 < s_min < s_max:
        raise DomainError("need 0 < s_min < s_max")
    if n < 16:
        raise DomainError("need at least 16 samples")
    s = np.geomspace(s_min, s_max, n)
    f = np.asarray(k(s), dtype=float)
    if np.any(f <= 0) or not np.all(np.isfinite(f)):
        raise DomainError("identify_limit needs positive finite kernel values")
    x = np.log(s)
    y = np.log(f)
    if np.ptp(x) == 0:
        raise DomainError("degenerate fit: no spread in log s")
    slope, intercept = np.polyfit(x, y, 1)
    raw_p = -slope
    p = min(max(raw_p, 0.0), np.nextafter(1.0, 0.0))
    if p != raw_p:
        intercept = np.mean(y + p * x)
    fitted = intercept - p * x
    residual = float(np.sqrt(np.mean((y - fitted) ** 2)))
    table = tuple(zip(s.tolist(), f.tolist(), np.exp(fitted).tolist()))
    return LimitFit(LimitPair(p, float(np.exp(intercept))), residual, float(raw_p), table)


def _relative_grid(n):
    geometric = 2.0 ** (-np.arange(0, 240) / 4.0)
    return np.unique(np.concatenate((geometric, np.arange(1, n + 1) / n)))


def _sup_rows(k, pair, s, n):
    lo = k.support[0]
    t = s[:, None] * _relative_grid(n)[None, :]
    dev = np.abs(k.weighted(np.clip(t, lo, None), pair.p) - pair.ell)
    dev = np.where(t >= lo, dev, 0.0)
    return dev.max(axis=1)


def omega_p(k, pair, s, n=256):
    """``sup_{0 < t <= s} |t**p f(t) - ell|`` approximated on a grid.

    The grid combines geometric points towards 0 and ``n`` uniform points;
    ``n`` is doubled until the estimate changes by less than 1%.  Array
    input returns a running maximum, so the result is nondecreasing in
    ``s``.  For tabulated kernels only ``t`` within the samples is used.
    """
    scalar = np.ndim(s) == 0
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    if np.any(s_arr <= 0):
        raise DomainError("omega_p needs s > 0")
    order = np.argsort(s_arr)
    ss = s_arr[order]
    est = _sup_rows(k, pair, ss, n)
    for _ in range(6):
        n *= 2
        finer = _sup_rows(k, pair, ss, n)
        done = np.all(np.abs(finer - est) <= 0.01 * np.maximum(finer, 1e-300))
        est = finer
        if done:
            break
    est = np.maximum.accumulate(est)
    out = np.empty_like(est)
    out[order] = est
    return float(out[0]) if scalar else out


class Modulus:
    """``omega_p`` of a kernel as a callable ``s -> omega_p(s)``."""

    def __init__(self, k, pair, n=256):
        self.kernel = k
        self.pair = pair
        self.n = n

    def __call__(self, s):
        return omega_p(self.kernel, self.pair, s, self.n)


def check_dafermos(k, s_grid):
    """Largest ``delta`` with ``mu' + delta mu <= 0`` on the grid.

    Returns ``inf(-mu'/mu)`` over the grid, or 0.0 when that infimum is not
    positive (the condition fails).
    """
    s = np.asarray(s_grid, dtype=float)
    mu = k.eval(s)
    if np.any(mu <= 0):
        raise DomainError("check_dafermos needs a positive kernel on the grid")
    ratio = -k.deriv(s) / mu
    return max(0.0, float(np.min(ratio)))


def _deriv_abs_integral(k, x, tol):
    """``int_x^inf |f'(s)| ds`` with a (known or probed) tail."""
    absd = lambda s: np.abs(k.deriv(s))  # noqa: E731
    if isinstance(k, Tabulated):
        knots = k.s[k.s > x]
        edges = _quad.refine_edges(np.concatenate(([x], knots)), 1)
        return float(_quad.gauss_panels(absd, edges))
    hi = k.support[1]
    scale = min(k.scale_length, 1e6)
    if k.deriv_tail_mass(x) is not None:
        cutoff = _quad.find_cutoff(k.deriv_tail_mass, x, tol, limit=min(hi, 1e15))
        if cutoff is None:
            raise NonSummableError("derivative tail bound never falls below tolerance")
        edges = _quad.graded_edges(x, cutoff, h_max=scale)
        return float(_quad.gauss_panels(absd, edges)) + k.deriv_tail_mass(cutoff)
    # unknown tail: extend until the added pieces become negligible
    total = 0.0
    lo, top = x, max(2 * x, scale)
    while True:
        piece = float(_quad.gauss_panels(absd, _quad.probe_edges(lo, top, scale)))
        if not np.isfinite(piece):
            raise NonSummableError(f"non-finite derivative integral on [{lo}, {top}]")
        total += piece
        if piece <= tol * max(total, 1.0) or top >= hi:
            return total
        if top > 1e12:
            raise NonSummableError("derivative integral does not settle; f' looks non-summable")
        lo, top = top, min(2 * top, hi)


def check_condition_AA(k, pair, x_grid, tol=1e-12):
    """Rows ``(x, x**p * int_x^inf |f'(s)| ds)`` for each ``x`` in the grid.

    Boundedness of the products as ``x`` decreases is the weighted
    summability condition; the caller inspects the sequence.
    """
    rows = []
    for x in x_grid:
        x = float(x)
        if x <= 0:
            raise DomainError("x must be positive")
        integral = _deriv_abs_integral(k, x, tol)
        if not np.isfinite(integral):
            raise NonSummableError(f"derivative integral diverged at x={x}")
        rows.append((x, x ** pair.p * integral))
    return rows
