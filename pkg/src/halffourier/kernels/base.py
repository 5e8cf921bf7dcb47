"""Memory kernel representations.

Every kernel is real-valued on (0, inf), immutable, and evaluates on numpy
arrays.  Besides values and derivatives a kernel knows what it can about
itself: the limit pair ``(p, ell)`` with ``s**p f(s) -> ell``, bounds on the
tail masses of ``|f|`` and ``|f'|`` (used to truncate integrals), a length
scale on which it varies, and its half Fourier transform when that has a
closed form.
"""
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import integrate, interpolate, special

from halffourier.errors import DomainError
from halffourier.specfun import check_exponent, gamma_real

_TINY = np.finfo(float).tiny


@dataclass(frozen=True)
class LimitPair:
    """Exponent and amplitude of the blow-up at the origin:
    ``lim_{s->0} s**p f(s) = ell``."""

    p: float
    ell: float

    def __post_init__(self):
        object.__setattr__(self, "p", check_exponent(self.p))
        ell = float(self.ell)
        if not math.isfinite(ell):
            raise DomainError(f"ell must be finite, got {self.ell!r}")
        object.__setattr__(self, "ell", ell)


class MemoryKernel:
    """Base class.  Subclasses implement ``_value``, ``_deriv`` and
    ``render``; the rest has conservative defaults."""

    limit: Optional[LimitPair] = None
    support = (0.0, math.inf)
    scale_length = 1.0

    def __call__(self, s):
        return self.eval(s)

    def eval(self, s):
        s = self._check(s)
        return self._value(s)

    def deriv(self, s):
        s = self._check(s)
        return self._deriv(s)

    def weighted(self, s, p):
        """``s**p * f(s)``, evaluated so that it stays finite as ``s -> 0``
        where the kernel allows it."""
        s = np.maximum(np.asarray(s, dtype=float), _TINY)
        return s ** p * self._value(s)

    def tail_mass(self, t):
        """Upper bound on ``int_t^inf |f|``, or None if unknown."""
        return None

    def deriv_tail_mass(self, t):
        """Upper bound on ``int_t^inf |f'|``, or None if unknown."""
        return None

    def mass(self, t=math.inf):
        """``int_0^t f``, or None if unknown."""
        return None

    def closed_form(self, lam):
        """Half Fourier transform at ``lam``, or None."""
        return None

    def _check(self, s):
        arr = np.asarray(s, dtype=float)
        lo, hi = self.support
        if np.any(arr <= 0) or np.any(np.isnan(arr)):
            raise DomainError("kernels are evaluated at s > 0 only")
        if lo > 0 or math.isfinite(hi):
            # relative slack for round trips through the panel maps
            if np.any(arr < lo * (1 - 1e-12)) or np.any(arr > hi * (1 + 1e-12)):
                raise DomainError(f"s outside the tabulated range [{lo}, {hi}]")
            arr = np.clip(arr, lo, hi)
        return arr

    def _value(self, s):
        raise NotImplementedError

    def _deriv(self, s):
        raise NotImplementedError

    def render(self):
        raise NotImplementedError

    def __repr__(self):
        try:
            return f"<{type(self).__name__} {self.render()}>"
        except (NotImplementedError, ValueError):
            return f"<{type(self).__name__}>"


def _positive(name, value):
    value = float(value)
    if not value > 0 or not math.isfinite(value):
        raise DomainError(f"{name} must be a positive finite number, got {value!r}")
    return value


class Exponential(MemoryKernel):
    """``f(s) = exp(-delta s)``."""

    def __init__(self, delta):
        self.delta = _positive("delta", delta)
        self.limit = LimitPair(0.0, 1.0)
        self.scale_length = 1.0 / self.delta

    def _value(self, s):
        return np.exp(-self.delta * s)

    def _deriv(self, s):
        return -self.delta * np.exp(-self.delta * s)

    def weighted(self, s, p):
        s = np.asarray(s, dtype=float)
        return s ** p * np.exp(-self.delta * s)

    def tail_mass(self, t):
        return math.exp(-self.delta * t) / self.delta

    def deriv_tail_mass(self, t):
        return math.exp(-self.delta * t)

    def mass(self, t=math.inf):
        return -math.expm1(-self.delta * t) / self.delta

    def closed_form(self, lam):
        return 1.0 / complex(self.delta, lam)

    def render(self):
        return f"exp(delta={self.delta!r})"


class SingularExponential(MemoryKernel):
    """``f(s) = s**(-p) exp(-delta s)``, the standard benchmark kernel."""

    def __init__(self, p, delta):
        self.p = check_exponent(p)
        self.delta = _positive("delta", delta)
        self.limit = LimitPair(self.p, 1.0)
        self.scale_length = 1.0 / self.delta

    def _value(self, s):
        return s ** (-self.p) * np.exp(-self.delta * s)

    def _deriv(self, s):
        return -(self.delta + self.p / s) * self._value(s)

    def weighted(self, s, p):
        s = np.asarray(s, dtype=float)
        return s ** (p - self.p) * np.exp(-self.delta * s)

    def _gamma_scale(self):
        return gamma_real(1.0 - self.p) * self.delta ** (self.p - 1.0)

    def tail_mass(self, t):
        return self._gamma_scale() * special.gammaincc(1.0 - self.p, self.delta * t)

    def deriv_tail_mass(self, t):
        # f is decreasing to 0
        return float(self._value(np.float64(t)))

    def mass(self, t=math.inf):
        if math.isinf(t):
            return self._gamma_scale()
        return self._gamma_scale() * special.gammainc(1.0 - self.p, self.delta * t)

    def closed_form(self, lam):
        # principal branch of the complex power
        return gamma_real(1.0 - self.p) * complex(self.delta, lam) ** (self.p - 1.0)

    def render(self):
        return f"singexp(p={self.p!r},delta={self.delta!r})"


class Scaled(MemoryKernel):
    """``c * k(s)``."""

    def __init__(self, factor, kernel):
        factor = float(factor)
        if not math.isfinite(factor):
            raise DomainError(f"scale factor must be finite, got {factor!r}")
        self.factor = factor
        self.kernel = kernel
        self.support = kernel.support
        self.scale_length = kernel.scale_length
        if kernel.limit is not None:
            self.limit = LimitPair(kernel.limit.p, factor * kernel.limit.ell)

    def _value(self, s):
        return self.factor * self.kernel._value(s)

    def _deriv(self, s):
        return self.factor * self.kernel._deriv(s)

    def weighted(self, s, p):
        return self.factor * self.kernel.weighted(s, p)

    def tail_mass(self, t):
        inner = self.kernel.tail_mass(t)
        return None if inner is None else abs(self.factor) * inner

    def deriv_tail_mass(self, t):
        inner = self.kernel.deriv_tail_mass(t)
        return None if inner is None else abs(self.factor) * inner

    def mass(self, t=math.inf):
        inner = self.kernel.mass(t)
        return None if inner is None else self.factor * inner

    def closed_form(self, lam):
        inner = self.kernel.closed_form(lam)
        return None if inner is None else self.factor * inner

    def render(self):
        return f"scale({self.factor!r},{self.kernel.render()})"


def _combine_limits(a, b):
    if a is None or b is None:
        return None
    if a.p == b.p:
        return LimitPair(a.p, a.ell + b.ell)
    return a if a.p > b.p else b


class Sum(MemoryKernel):
    """``k1(s) + k2(s)``."""

    def __init__(self, first, second):
        self.first = first
        self.second = second
        lo = max(first.support[0], second.support[0])
        hi = min(first.support[1], second.support[1])
        if not lo < hi:
            raise DomainError("summands have disjoint supports")
        self.support = (lo, hi)
        self.scale_length = min(first.scale_length, second.scale_length)
        self.limit = _combine_limits(first.limit, second.limit)

    def _value(self, s):
        return self.first._value(s) + self.second._value(s)

    def _deriv(self, s):
        return self.first._deriv(s) + self.second._deriv(s)

    def weighted(self, s, p):
        return self.first.weighted(s, p) + self.second.weighted(s, p)

    def _both(self, name, t):
        a = getattr(self.first, name)(t)
        b = getattr(self.second, name)(t)
        return None if a is None or b is None else a + b

    def tail_mass(self, t):
        return self._both("tail_mass", t)

    def deriv_tail_mass(self, t):
        return self._both("deriv_tail_mass", t)

    def mass(self, t=math.inf):
        return self._both("mass", t)

    def closed_form(self, lam):
        return self._both("closed_form", lam)

    def render(self):
        return f"sum({self.first.render()},{self.second.render()})"


class Tabulated(MemoryKernel):
    """Kernel given by samples ``(s_j, f_j)``.

    Values come from the monotone cubic (PCHIP) interpolant and derivatives
    from its exact derivative, so the two stay consistent.  The kernel is
    treated as supported on ``[s_0, s_last]``: transforms truncate at the
    last sample.
    """

    scale_length = math.inf

    def __init__(self, s, values, *, path=None, limit=None):
        s = np.asarray(s, dtype=float)
        values = np.asarray(values, dtype=float)
        if s.ndim != 1 or s.shape != values.shape or s.size < 2:
            raise DomainError("tabulated kernel needs matching 1-d arrays of length >= 2")
        if not np.all(np.isfinite(s)) or not np.all(np.isfinite(values)):
            raise DomainError("tabulated samples must be finite")
        if s[0] <= 0:
            raise DomainError("tabulated abscissae must be positive")
        if np.any(np.diff(s) <= 0):
            raise DomainError("tabulated abscissae must be strictly increasing")
        self.s = s
        self.values = values
        self.path = path
        self.limit = limit
        self.support = (float(s[0]), float(s[-1]))
        self._interp = interpolate.PchipInterpolator(s, values, extrapolate=False)
        self._slope = self._interp.derivative()
        self.trapezoid_mass = float(integrate.trapezoid(values, s))

    def _value(self, s):
        return self._interp(s)

    def _deriv(self, s):
        return self._slope(s)

    def tail_mass(self, t):
        return 0.0 if t >= self.support[1] else None

    def deriv_tail_mass(self, t):
        return 0.0 if t >= self.support[1] else None

    def mass(self, t=math.inf):
        """Mass of the interpolant on ``[s_0, min(t, s_last)]``."""
        lo, hi = self.support
        return float(self._interp.integrate(lo, min(max(t, lo), hi)))

    def render(self):
        if self.path is None:
            raise ValueError("tabulated kernel built from arrays has no textual form")
        return f"table:{self.path}"


class Composite(MemoryKernel):
    """Kernel from user-supplied vectorised callables.

    ``tail`` and ``deriv_tail``, when given, must return upper bounds on
    ``int_t^inf |f|`` and ``int_t^inf |f'|``.
    """

    def __init__(self, func: Callable, deriv: Callable, *, limit=None, tail=None,
                 deriv_tail=None, scale_length=1.0, name="composite"):
        self._func = func
        self._dfunc = deriv
        self.limit = limit
        self._tail = tail
        self._deriv_tail = deriv_tail
        self.scale_length = float(scale_length)
        self.name = name

    def _value(self, s):
        return np.asarray(self._func(s), dtype=float)

    def _deriv(self, s):
        return np.asarray(self._dfunc(s), dtype=float)

    def tail_mass(self, t):
        return None if self._tail is None else float(self._tail(t))

    def deriv_tail_mass(self, t):
        return None if self._deriv_tail is None else float(self._deriv_tail(t))

    def render(self):
        raise ValueError(f"composite kernel {self.name!r} has no textual form")


def eval_kernel(k, s):
    return k.eval(s)


def eval_deriv(k, s):
    return k.deriv(s)


def closed_form_transform(k, lam):
    """Closed-form half Fourier transform ``int_0^inf exp(-i lam s) k(s) ds``.

    Available for exponential and singular-exponential kernels and their
    scalings and sums; None otherwise.
    """
    lam = float(lam)
    if lam < 0:
        raise DomainError("lambda must be nonnegative")
    return k.closed_form(lam)
