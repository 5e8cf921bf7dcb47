"""Special functions: Gamma on the real line, the asymptotic constant m(p),
and the oscillatory tail integrals ``int_1^inf exp(-i*beta*s) s**(-q) ds``.
"""
import cmath
import math

import numpy as np

from halffourier import _quad
from halffourier.errors import DomainError, ToleranceNotReached

# integrate by parts until the power exceeds this
_TAIL_POWER = 3.0


def check_exponent(p):
    """Validate a singular exponent ``0 <= p < 1`` and return it as float."""
    p = float(p)
    if not (0.0 <= p < 1.0) or math.isnan(p):
        raise DomainError(f"singular exponent p must satisfy 0 <= p < 1, got {p!r}")
    return p


def gamma_real(x):
    """Euler Gamma function for real ``x > 0``.

    Backed by :func:`math.gamma` (relative error near machine epsilon on the
    range used here).
    """
    x = float(x)
    if not x > 0:
        raise DomainError(f"gamma_real is defined for x > 0 only, got {x!r}")
    return math.gamma(x)


def asymp_constant(p):
    """The limit constant ``m(p) = -i * exp(i*p*pi/2) * Gamma(1 - p)``.

    Its modulus is ``Gamma(1 - p)`` and its argument ``p*pi/2 - pi/2``.
    Built from polar form so that both are exact to rounding.
    """
    p = check_exponent(p)
    return cmath.rect(gamma_real(1.0 - p), 0.5 * math.pi * p - 0.5 * math.pi)


def phase(z):
    """Argument of ``z`` in (-pi, pi]."""
    theta = cmath.phase(complex(z))
    # cmath gives -pi on the negative real axis with a -0.0 imaginary part
    return math.pi if theta == -math.pi else theta


def _quad_tail(q, beta, tol):
    """``int_1^inf exp(-i beta s) s**(-q) ds`` for q > 1, by oscillatory panels
    on [1, T].  Beyond T the leading integration-by-parts term
    ``exp(-i beta T) T**(-q) / (i beta)`` is added; what remains is bounded by
    ``2 q T**(-q-1) / beta**2``."""

    def remainder_bound(t):
        return 2.0 * q * t ** (-q - 1.0) / beta ** 2

    cutoff = _quad.find_cutoff(remainder_bound, 1.0, 0.25 * tol, limit=1e300)
    if cutoff is None:  # pragma: no cover - cannot happen for q > 1
        raise ToleranceNotReached("no tail cutoff found for tail integral")
    edges = _quad.graded_edges(1.0, cutoff, h_max=np.inf, ratio=1.5)

    def f(s):
        return s ** (-q)

    coarse = _quad.oscillatory_panels(f, beta, edges)
    fine = _quad.oscillatory_panels(f, beta, _quad.refine_edges(edges))
    beyond = cmath.exp(-1j * beta * cutoff) * cutoff ** (-q) / (1j * beta)
    return fine + beyond, abs(fine - coarse) + remainder_bound(cutoff)


def tail_integral(q, beta, tol=1e-12, *, return_error=False):
    """``int_1^inf exp(-i*beta*s) * s**(-q) ds`` for ``q >= 0``, ``beta > 0``.

    Uses repeated integration by parts,

        J(q) = exp(-i*beta)/(i*beta) - q/(i*beta) * J(q + 1),

    until the power exceeds 3, then oscillation-resolved panels with an
    analytic remainder bound.  For ``q <= 1`` the integral converges only
    conditionally (``q = 0`` in the Abel sense); the recursion still gives
    the right value.

    Raises
    ------
    ToleranceNotReached
        if the achieved error bound exceeds ``tol``.
    """
    q = float(q)
    beta = float(beta)
    if not beta > 0:
        raise DomainError(f"beta must be positive, got {beta!r}")
    if not q >= 0:
        raise DomainError(f"power q must be nonnegative, got {q!r}")
    boundary = cmath.exp(-1j * beta) / (1j * beta)
    # J(q) = boundary * sum_j c_j + c_k J(q + k), c_0 = 1, c_{j+1} = -c_j (q+j)/(i beta)
    acc = 0j
    coef = 1.0 + 0j
    power = q
    while power <= _TAIL_POWER:
        acc += coef * boundary
        coef *= -power / (1j * beta)
        power += 1.0
        if coef == 0:
            break
    if coef == 0:
        value, err = acc, 0.0
    else:
        remainder, rem_err = _quad_tail(power, beta, tol / max(abs(coef), 1e-300))
        value = acc + coef * remainder
        err = abs(coef) * rem_err
    if err > tol:
        raise ToleranceNotReached(
            f"tail_integral(q={q}, beta={beta}) reached {err:.3g} > tol={tol:.3g}",
            estimate=value, error=err)
    if return_error:
        return value, err
    return value


def mp_by_quadrature(p, tol=1e-10, *, return_error=False):
    """Evaluate ``int_0^inf exp(-i*s) s**(-p) ds`` numerically.

    A cross-check for :func:`asymp_constant`; the two should agree.  The
    piece on (0, 1] is computed with the singularity-removing substitution,
    the piece on [1, inf) with :func:`tail_integral`.
    """
    p = check_exponent(p)

    def one(s):
        return np.ones_like(s)

    head = _quad.singular_oscillatory(one, p, 1.0, 1.0)
    head_fine = _quad.singular_oscillatory(one, p, 1.0, 1.0, refine=1)
    tail, tail_err = tail_integral(p, 1.0, 0.5 * tol, return_error=True)
    value = head_fine + tail
    err = abs(head_fine - head) + tail_err
    if err > tol:
        raise ToleranceNotReached(
            f"mp_by_quadrature(p={p}) reached {err:.3g} > tol={tol:.3g}",
            estimate=value, error=err)
    if return_error:
        return value, err
    return value
