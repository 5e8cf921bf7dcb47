"""Panel quadrature primitives.

Three building blocks are used throughout the package:

* :func:`gauss_panels` -- composite Gauss-Legendre on a list of panel edges.
* :func:`oscillatory_panels` -- the same edges, but each panel that spans more
  than half a period of ``exp(-i*lam*s)`` is handled by Levin collocation on
  Chebyshev points, which stays accurate (and cheap) for arbitrarily large
  ``lam * width``.
* :func:`singular_oscillatory` -- ``int_0^a exp(-i*lam*s) s**(-p) h(s) ds``
  for smooth ``h`` through the substitution ``s = a * u**(1/(1-p))``, which
  removes the algebraic endpoint singularity.  In the ``s`` variable this is
  the graded mesh ``s_j = a * (u_j)**(1/(1-p))``.

All routines are vectorised over nodes: ``func`` receives a numpy array and
must return an array of the same shape.
"""
from functools import lru_cache

import numpy as np

GL_NODES = 16
LEVIN_NODES = 24
# geometric grading depth towards u = 0 in the singular map
GRADING_LEVELS = 40


@lru_cache(maxsize=None)
def gauss_legendre(n):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=None)
def chebyshev_matrix(n):
    """Chebyshev points of the second kind on [-1, 1] (descending) and the
    spectral differentiation matrix."""
    x = np.cos(np.pi * np.arange(n) / (n - 1))
    c = np.ones(n)
    c[0] = c[-1] = 2.0
    c *= (-1.0) ** np.arange(n)
    dx = x[:, None] - x[None, :]
    d = np.outer(c, 1.0 / c) / (dx + np.eye(n))
    d -= np.diag(d.sum(axis=1))
    x.setflags(write=False)
    d.setflags(write=False)
    return x, d


def refine_edges(edges, times=1):
    """Bisect every panel ``times`` times."""
    edges = np.asarray(edges, dtype=float)
    for _ in range(times):
        mid = 0.5 * (edges[:-1] + edges[1:])
        out = np.empty(2 * edges.size - 1)
        out[0::2] = edges
        out[1::2] = mid
        edges = out
    return edges


def graded_edges(a, b, h_max, ratio=2.0, growth=0.0):
    """Edges on [a, b] (a > 0) growing geometrically from ``a`` until the
    panel width reaches ``h_max``, then uniform; with ``growth > 0`` the
    width is instead ``max(h_max, growth * s)`` once past that point, which
    keeps long power-law tails to logarithmically many panels."""
    if not a > 0:
        raise ValueError("graded_edges needs a > 0")
    edges = [a]
    s = a
    while s < b:
        step = min(s * (ratio - 1.0), max(h_max, growth * s))
        s = s + step
        if s > b or b - s < 1e-3 * step:
            s = b
        edges.append(s)
    return np.array(edges)


def probe_edges(a, b, scale, panels=64):
    """Edges for a non-oscillatory mass probe on [a, b]: the panel width is
    capped at ``scale`` or at ``(b - a) / panels``, whichever is larger, so
    doubling windows cost a bounded number of panels."""
    return graded_edges(a, b, h_max=max(scale, (b - a) / panels))


def _nodes(edges, n):
    x, w = gauss_legendre(n)
    lo = edges[:-1, None]
    half = 0.5 * (edges[1:] - edges[:-1])[:, None]
    return lo + half * (x + 1.0), half * w


def gauss_panels(func, edges, n=GL_NODES):
    """Composite Gauss-Legendre estimate of ``int func`` over the panels."""
    edges = np.asarray(edges, dtype=float)
    if edges.size < 2:
        return 0.0
    s, w = _nodes(edges, n)
    return np.sum(w * func(s))


def _levin(func, lam, lo, hi, n):
    x, d = chebyshev_matrix(n)
    width = hi - lo
    s = lo[:, None] + 0.5 * width[:, None] * (x + 1.0)
    mat = d[None, :, :] * (2.0 / width)[:, None, None] - 1j * lam * np.eye(n)[None]
    rhs = np.asarray(func(s), dtype=complex)
    # F' - i lam F = f, so (F exp(-i lam s))' = f exp(-i lam s)
    big_f = np.linalg.solve(mat, rhs[..., None])[..., 0]
    # x[0] = +1 is the right end
    return np.sum(big_f[:, 0] * np.exp(-1j * lam * hi) - big_f[:, -1] * np.exp(-1j * lam * lo))


def oscillatory_panels(func, lam, edges, n=GL_NODES, levin_n=LEVIN_NODES):
    """``int exp(-i*lam*s) func(s) ds`` over the panels.

    Panels narrower than half a period use Gauss-Legendre on the full
    integrand; wider panels use Levin collocation, whose cost does not grow
    with the frequency.
    """
    edges = np.asarray(edges, dtype=float)
    if edges.size < 2:
        return 0j
    width = np.diff(edges)
    wide = lam * width > np.pi
    total = 0j
    if np.any(~wide):
        lo, hi = edges[:-1][~wide], edges[1:][~wide]
        x, w = gauss_legendre(n)
        half = 0.5 * (hi - lo)[:, None]
        s = lo[:, None] + half * (x + 1.0)
        total += np.sum(half * w * np.exp(-1j * lam * s) * func(s))
    if np.any(wide):
        total += _levin(func, lam, edges[:-1][wide], edges[1:][wide], levin_n)
    return total


def singular_oscillatory(h, p, lam, a, *, scale=np.inf, refine=0, n=GL_NODES,
                         levels=GRADING_LEVELS):
    """``int_0^a exp(-i*lam*s) s**(-p) h(s) ds`` for ``0 <= p < 1``.

    ``scale`` is a length on which ``h`` varies; panels are kept narrower than
    it in ``s`` as well as narrower than half an oscillation period.
    ``refine`` bisects every panel that many times (used for refinement
    deltas).
    """
    if not 0.0 <= p < 1.0:
        raise ValueError(f"singular exponent must lie in [0, 1), got {p}")
    if a <= 0:
        return 0j
    r = 1.0 / (1.0 - p)
    coarse = np.concatenate(([0.0], 2.0 ** -np.arange(levels, -1, -1, dtype=float)))
    pieces = [coarse[:1]]
    for u0, u1 in zip(coarse[:-1], coarse[1:]):
        s0, s1 = a * u0 ** r, a * u1 ** r
        m = max(1, int(np.ceil(lam * (s1 - s0) / np.pi)), int(np.ceil((s1 - s0) / scale)))
        # u**r is steep for p near 1; irrelevant once s is negligible
        m_shape = int(np.ceil(0.5 * r * (u1 - u0) / u1)) if s1 > 1e-16 * a else 1
        if m == 1:
            cuts = np.array([u1])
        else:
            cuts = (np.linspace(s0, s1, m + 1)[1:] / a) ** (1.0 - p)
        if m_shape > 1:
            lows = np.concatenate(([u0], cuts[:-1]))
            cuts = np.concatenate([np.linspace(lo, hi, m_shape + 1)[1:]
                                   for lo, hi in zip(lows, cuts)])
        pieces.append(cuts)
    u_edges = refine_edges(np.concatenate(pieces), refine)
    coef = a ** (1.0 - p) / (1.0 - p)

    def integrand(u):
        s = a * u ** r
        return np.exp(-1j * lam * s) * h(s)

    return coef * gauss_panels(integrand, u_edges, n)


def find_cutoff(bound, start, target, limit=1e12):
    """Smallest-ish ``T >= start`` with ``bound(T) <= target`` (doubling then
    bisection).  ``bound`` must be nonincreasing.  Returns None if no such T
    below ``limit``."""
    t = max(start, 1e-300)
    if bound(t) <= target:
        return t
    lo = t
    hi = 2.0 * t
    while bound(hi) > target:
        lo = hi
        hi *= 2.0
        if hi > limit:
            return None
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if bound(mid) <= target:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-6 * hi:
            break
    return hi
