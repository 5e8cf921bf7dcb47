"""Equations with memory: rate predictions and a scalar-mode simulator.

A mode of ``u'' + A u + int_0^inf mu(s) [u(t) - u(t-s)] ds = 0`` with
``A u = alpha u`` reads

    u'' = -(alpha + M) u + int_0^inf mu(s) u(t - s) ds,    M = int mu.

The growth of ``lam / |mu^(lam)|`` and the blow-up order ``p`` of the
kernel at the origin determine the resolvent growth exponent ``2 - p`` and
the lower bound ``t**(-1/(2-p))`` on the decay of smooth solutions.
"""
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from halffourier import _quad
from halffourier.asymptotics import loglog_slope
from halffourier.errors import DomainError, SimulationError, ToleranceNotReached
from halffourier.kernels.base import LimitPair, MemoryKernel
from halffourier.oscquad import QuadConfig, half_fourier
from halffourier.specfun import gamma_real

TAIL_FRACTION = 1e-8
BLOWUP = 1e6


@dataclass(frozen=True)
class DecayForecast:
    pair: LimitPair
    resolvent_exponent: float
    decay_exponent: float
    optimal_at_p0: bool


def decay_forecast(pair):
    """Resolvent growth exponent ``2 - p`` and decay bound exponent
    ``1/(2-p)``; at ``p = 0`` the bound ``t**(-1/2)`` is also attained."""
    if not pair.ell > 0:
        raise DomainError(f"decay forecast needs ell > 0, got {pair.ell!r}")
    p = pair.p
    return DecayForecast(pair, 2.0 - p, 1.0 / (2.0 - p), p == 0.0)


@dataclass(frozen=True)
class ProxyReport:
    """Rows ``(lam, lam / |mu^(lam)|)`` and the fitted growth exponent.

    ``prefactor`` is the predicted limit of ``g * lam**(p-2)``, namely
    ``1 / (ell * Gamma(1-p))``.  ``skipped`` lists frequencies where the
    transform vanished.
    """

    pair: Optional[LimitPair]
    rows: tuple
    exponent: float
    prefactor: float
    skipped: tuple = ()


def resolvent_growth_proxy(k, lambda_grid, cfg=None, *, closed_form=True):
    """``g(lam) = lam / |mu^(lam)|`` on a grid, with its log-log slope.

    The transform is taken in closed form when the kernel has one and
    ``closed_form`` is set, otherwise from :func:`half_fourier`.
    """
    cfg = cfg or QuadConfig()
    pair = k.limit
    rows, skipped = [], []
    for lam in sorted(float(x) for x in lambda_grid):
        mu_hat = k.closed_form(lam) if closed_form else None
        if mu_hat is None:
            try:
                mu_hat = half_fourier(k, lam, cfg).value
            except ToleranceNotReached as exc:
                mu_hat = exc.estimate.value
        if mu_hat == 0:
            skipped.append(lam)
            continue
        rows.append((lam, lam / abs(mu_hat)))
    exponent = loglog_slope([r[0] for r in rows], [r[1] for r in rows])
    prefactor = math.nan
    if pair is not None and pair.ell > 0:
        prefactor = 1.0 / (pair.ell * gamma_real(1.0 - pair.p))
    return ProxyReport(pair, tuple(rows), exponent, prefactor, tuple(skipped))


def zero_history(s):
    return np.zeros_like(np.asarray(s, dtype=float))


@dataclass(frozen=True)
class ModeParams:
    """One mode: eigenvalue ``alpha > 0``, kernel, past history
    ``s -> u(-s)`` for ``s > 0``, and ``u(0)``, ``u'(0)``."""

    alpha: float
    kernel: MemoryKernel
    u0: float = 1.0
    v0: float = 0.0
    history: Callable = zero_history

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError("alpha must be positive")


@dataclass(frozen=True)
class ModeTrajectory:
    t: np.ndarray
    u: np.ndarray
    v: np.ndarray
    energy: np.ndarray
    dt: float
    kernel_mass: float
    cutoff: float

    @property
    def samples(self):
        return list(zip(self.t.tolist(), self.u.tolist(), self.v.tolist(),
                        self.energy.tolist()))

    def max_energy_increase(self):
        """Largest single-step increase of the energy (0 if none)."""
        if self.energy.size < 2:
            return 0.0
        return max(0.0, float(np.max(np.diff(self.energy))))


def _values(k, s):
    """Kernel values, extended as ``c s**(-p)`` below a tabulated range."""
    lo = k.support[0]
    s = np.asarray(s, dtype=float)
    if lo <= 0:
        return k._value(s)
    p = k.limit.p if k.limit is not None else 0.0
    inside = k._value(np.clip(s, lo, None))
    edge = float(k._value(np.float64(lo)))
    return np.where(s >= lo, inside, edge * (np.maximum(s, 1e-300) / lo) ** (-p))


def kernel_cutoff(k, dt):
    """Truncation point ``S`` with tail mass below ``1e-8`` of the total."""
    if math.isfinite(k.support[1]):
        return k.support[1]
    total = k.mass()
    if total is None or k.tail_mass(dt) is None:
        raise DomainError("the simulator needs a kernel with known mass and tail bound")
    cutoff = _quad.find_cutoff(k.tail_mass, dt, TAIL_FRACTION * abs(total), limit=1e9)
    if cutoff is None:
        raise DomainError("kernel tail does not fall below the truncation threshold")
    return cutoff


def _cell_weights(k, dt, cutoff):
    """Per-cell weights ``(left, right)``: on ``[j dt, (j+1) dt]`` the product
    trapezoid rule is ``left[j] g(j dt) + right[j] g((j+1) dt)``."""
    n = int(math.ceil(cutoff / dt - 1e-9))
    p = k.limit.p if k.limit is not None else 0.0
    # first cell carries the singularity
    if k.support[0] > 0:
        a0 = float(_quad.gauss_panels(lambda s: _values(k, s), np.array([0.0, dt])))
        b0 = float(_quad.gauss_panels(lambda s: _values(k, s) * s / dt, np.array([0.0, dt])))
    else:
        a0 = _quad.singular_oscillatory(lambda s: k.weighted(s, p), p, 0.0, dt).real
        b0 = _quad.singular_oscillatory(lambda s: k.weighted(s, p) * s / dt, p, 0.0, dt).real
    x, w = _quad.gauss_legendre(_quad.GL_NODES)
    left = dt * np.arange(1, n)[:, None]
    s = left + 0.5 * dt * (x + 1.0)
    mu = _values(k, s)
    frac = 0.5 * (x + 1.0)
    a = np.concatenate(([a0], 0.5 * dt * (mu * w).sum(axis=1)))
    b = np.concatenate(([b0], 0.5 * dt * (mu * w * frac).sum(axis=1)))
    return a - b, b


def convolution_weights(k, dt, cutoff):
    """Weights ``w_j`` with ``int_0^S mu(s) g(s) ds ~ sum_j w_j g(j dt)`` for
    piecewise-linear ``g`` (product trapezoid rule; exact in ``mu``)."""
    left, right = _cell_weights(k, dt, cutoff)
    weights = np.zeros(left.size + 1)
    weights[:-1] += left
    weights[1:] += right
    return weights


def stable_dt(alpha, mass):
    """Largest step allowed: a tenth of the mode's natural period."""
    if not alpha + mass > 0:
        raise SimulationError(f"alpha + M = {alpha + mass:.6g} must be positive")
    return 0.1 * 2.0 * math.pi / math.sqrt(alpha + mass)


def simulate_mode(params, t_max, dt):
    """Integrate one mode with Strang splitting.

    The local part ``u'' = -(alpha + M) u`` is advanced by its exact flow
    (a rotation), the history convolution by half kicks on either side, so
    the scheme reduces to the exact oscillator when ``mu = 0``.  The
    convolution uses product trapezoid weights; ``u(t - s)`` comes from the
    stored trajectory for ``s <= t`` and from ``params.history`` beyond.
    The jump from ``history(0)`` to ``u0`` at ``t = 0`` is kept exact in the
    cell starting at ``s = t``, which keeps the scheme second order for
    incompatible initial data (order ``2 - p`` for singular kernels).

    The recorded energy is

        E = v**2/2 + alpha u**2/2 + 1/2 int_0^S mu(s) (u(t) - u(t-s))**2 ds.
    """
    k = params.kernel
    alpha = float(params.alpha)
    dt = float(dt)
    if not (dt > 0 and t_max > 0):
        raise DomainError("dt and t_max must be positive")
    cutoff = kernel_cutoff(k, dt)
    left, right = _cell_weights(k, dt, cutoff)
    weights = np.zeros(left.size + 1)
    weights[:-1] += left
    weights[1:] += right
    mass = float(weights.sum())
    limit = stable_dt(alpha, mass)
    if dt > limit * (1 + 1e-12):
        raise SimulationError(
            f"dt={dt} exceeds the resolution limit {limit:.6g} "
            f"(a tenth of the period for alpha={alpha}, M={mass:.6g})")
    n_hist = weights.size - 1
    steps = int(round(t_max / dt))
    omega = math.sqrt(alpha + mass)
    c, s = math.cos(omega * dt), math.sin(omega * dt)

    past = np.asarray(params.history(dt * np.arange(n_hist, 0, -1)), dtype=float)
    # u jumps from history(0) to u0 at t = 0; the cell starting at s = t sees
    # the history value at its left end, not the stored u0
    jump = float(np.asarray(params.history(np.zeros(1)), dtype=float)[0]) - float(params.u0)
    buf = np.empty(n_hist + steps + 1)
    buf[:n_hist] = past
    rev = weights[::-1].copy()
    u = float(params.u0)
    v = float(params.v0)
    buf[n_hist] = u
    scale = max(abs(u), abs(v) / omega, float(np.max(np.abs(past), initial=0.0)), 1e-300)

    t_out = dt * np.arange(steps + 1)
    u_out = np.empty(steps + 1)
    v_out = np.empty(steps + 1)
    e_out = np.empty(steps + 1)

    def conv(j):
        total = float(rev @ buf[j:j + n_hist + 1])
        if j < left.size:
            total += left[j] * jump
        return total

    def energy(j, u, v):
        eta = u - buf[j:j + n_hist + 1]
        hist = float(rev @ (eta * eta))
        if j < left.size:
            stored = u - params.u0
            hist += left[j] * ((stored - jump) ** 2 - stored ** 2)
        return 0.5 * v * v + 0.5 * alpha * u * u + 0.5 * hist

    force = conv(0)
    u_out[0], v_out[0], e_out[0] = u, v, energy(0, u, v)
    for j in range(steps):
        v += 0.5 * dt * force
        u, v = c * u + (s / omega) * v, -omega * s * u + c * v
        buf[n_hist + j + 1] = u
        force = conv(j + 1)
        v += 0.5 * dt * force
        if not abs(u) <= BLOWUP * scale:
            raise SimulationError(f"instability at t={t_out[j + 1]:.6g}: |u|={abs(u):.3g}")
        u_out[j + 1], v_out[j + 1] = u, v
        e_out[j + 1] = energy(j + 1, u, v)
    return ModeTrajectory(t_out, u_out, v_out, e_out, dt, mass, cutoff)


@dataclass(frozen=True)
class EnvelopeResult:
    """Envelope ``env(t) = max_alpha sqrt(2 E_alpha(t))``, normalised to 1
    at ``t = 0``, and its fitted decay exponent over the tail window.

    ``bound`` is ``1/(2-p)``; the exponent should not exceed it by more than
    discretisation noise.  ``mode_exponents`` are the same fit per mode.
    """

    exponent: float
    bound: float
    t: np.ndarray
    envelope: np.ndarray
    mode_exponents: dict


def decay_envelope_experiment(kernel, pair, alphas, t_max, dt, *, tail=0.5, samples=400):
    """Simulate modes ``u0 = 1/alpha``, ``v0 = 0``, zero history and fit
    ``log env`` against ``log t`` on ``[(1 - tail) t_max, t_max]``.

    Each mode uses ``min(dt, stable_dt)``.  The modes are independent, so
    a finite family can only decay *slower* than the operator bound.
    """
    pair = pair or kernel.limit
    forecast = decay_forecast(pair)
    t_common = np.linspace(0.0, t_max, samples + 1)
    amplitudes = {}
    mode_exponents = {}
    window = t_common >= (1.0 - tail) * t_max
    window[0] = False
    for alpha in alphas:
        mass = kernel.mass()
        if mass is None:
            mass = float(convolution_weights(kernel, dt, kernel_cutoff(kernel, dt)).sum())
        step = min(dt, stable_dt(alpha, mass) * 0.999)
        traj = simulate_mode(ModeParams(alpha, kernel, u0=1.0 / alpha), t_max, step)
        amp = np.sqrt(2.0 * np.maximum(np.interp(t_common, traj.t, traj.energy), 0.0))
        amplitudes[alpha] = amp
        mode_exponents[alpha] = -loglog_slope(t_common[window], amp[window])
    env = np.max(np.vstack(list(amplitudes.values())), axis=0)
    env = env / env[0]
    exponent = -loglog_slope(t_common[window], env[window])
    return EnvelopeResult(exponent, forecast.decay_exponent, t_common, env, mode_exponents)
