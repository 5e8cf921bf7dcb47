"""Command-line front end.

Every subcommand writes CSV or ``key=value`` text to standard output (or
``--out``).  Exit status is 0 on success, 2 for usage errors (bad flags,
malformed kernel expressions) and 1 when a computation fails (tolerance
not reached, unstable simulation).
"""
import argparse
import contextlib
import io
import sys

import numpy as np

from halffourier.asymptotics import (
    AsymptoteReport,
    check_lemma1,
    check_p0_formula,
    decompose,
    verify_theorem1,
)
from halffourier.errors import (
    DomainError,
    KernelSpecError,
    NonSummableError,
    SimulationError,
    ToleranceNotReached,
)
from halffourier.kernels import LimitPair, identify_limit, parse_kernel
from halffourier.memory import (
    ModeParams,
    ModeTrajectory,
    ProxyReport,
    decay_envelope_experiment,
    decay_forecast,
    resolvent_growth_proxy,
    simulate_mode,
)
from halffourier.oscquad import HalfFourierResult, QuadConfig, half_fourier, lemma2_lhs, lemma2_rhs


class UsageError(Exception):
    pass


def fmt(x):
    """Fixed 17-significant-digit scientific notation (exact round trip)."""
    return format(float(x), ".16e")


def _csv(header, rows):
    out = io.StringIO()
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(fmt(x) for x in row) + "\n")
    return out.getvalue()


def render_report(report):
    """CSV text for a report object.

    Accepts an :class:`AsymptoteReport`, a :class:`ProxyReport`, a
    :class:`ModeTrajectory`, or a sequence of :class:`HalfFourierResult`.
    Rows are sorted by the independent variable.
    """
    if isinstance(report, AsymptoteReport):
        rows = sorted((r.lam, r.scaled.real, r.scaled.imag, r.deviation) for r in report.rows)
        return _csv(["lambda", "scaled_re", "scaled_im", "deviation"], rows)
    if isinstance(report, ProxyReport):
        return _csv(["lambda", "g"], sorted(report.rows))
    if isinstance(report, ModeTrajectory):
        return _csv(["t", "u", "v", "energy"], zip(report.t, report.u, report.v, report.energy))
    items = list(report)
    if all(isinstance(r, HalfFourierResult) for r in items):
        rows = sorted((r.lam, r.value.real, r.value.imag, r.err_est) for r in items)
        return _csv(["lambda", "re", "im", "err_est"], rows)
    raise TypeError(f"cannot render {type(report).__name__}")


def _lambda_grid(args):
    if args.lam is not None:
        if args.lambda_min is not None or args.lambda_max is not None:
            raise UsageError("use either --lambda or --lambda-min/--lambda-max, not both")
        return [args.lam]
    if args.lambda_min is None or args.lambda_max is None:
        raise UsageError("a frequency is required: --lambda or --lambda-min/--lambda-max")
    if not 0 < args.lambda_min <= args.lambda_max:
        raise UsageError("need 0 < --lambda-min <= --lambda-max")
    if args.points < 1:
        raise UsageError("--points must be at least 1")
    if args.points == 1:
        return [args.lambda_min]
    return np.geomspace(args.lambda_min, args.lambda_max, args.points).tolist()


def _need(args, *names):
    missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
    if missing:
        raise UsageError("missing required flag(s): " + ", ".join("--" + n for n in missing))


def _kernel(args):
    _need(args, "kernel")
    return parse_kernel(args.kernel)


def _pair(args, kernel):
    if args.p is not None:
        return LimitPair(args.p, 1.0 if args.ell is None else args.ell)
    if kernel.limit is None:
        raise UsageError("kernel has no known (p, ell); pass --p and --ell")
    if args.ell is not None:
        return LimitPair(kernel.limit.p, args.ell)
    return kernel.limit


def _cfg(args):
    return QuadConfig(tol=args.tol, beta=1.0 if args.beta is None else args.beta)


def cmd_transform(args, err):
    k = _kernel(args)
    cfg = _cfg(args)
    return render_report([half_fourier(k, lam, cfg) for lam in _lambda_grid(args)])


def cmd_asymptote(args, err):
    k = _kernel(args)
    report = verify_theorem1(k, _pair(args, k), _lambda_grid(args), _cfg(args))
    err.write(f"fitted_slope={report.fitted_slope!r}\n")
    return render_report(report)


def cmd_identify(args, err):
    k = _kernel(args)
    fit = identify_limit(k, args.s_min, args.s_max, args.n)
    return f"p={fit.pair.p!r} ell={fit.pair.ell!r} residual={fit.residual!r}\n"


def cmd_lemma_check(args, err):
    which = args.which
    if which == "lemma2":
        _need(args, "p", "lam", "beta")
        r = abs(lemma2_lhs(args.p, args.lam, args.beta, tol=args.tol)
                - lemma2_rhs(args.p, args.beta))
    elif which == "lemma1":
        _need(args, "lam", "alpha")
        r = check_lemma1(_kernel(args), args.lam, args.alpha, tol=args.tol)
    elif which == "p0":
        _need(args, "lam")
        k = _kernel(args)
        r = check_p0_formula(k, _pair(args, k).ell, args.lam, tol=args.tol)
    else:
        _need(args, "lam", "beta")
        k = _kernel(args)
        r = decompose(k, _pair(args, k), args.lam, args.beta, QuadConfig(tol=args.tol)).residual
    return f"residual={float(r)!r}\n"


def cmd_rate(args, err):
    _need(args, "p")
    f = decay_forecast(LimitPair(args.p, 1.0 if args.ell is None else args.ell))
    return (f"resolvent_exponent={f.resolvent_exponent!r} "
            f"decay_exponent={f.decay_exponent!r} "
            f"optimal_p0={'true' if f.optimal_at_p0 else 'false'}\n")


def cmd_proxy(args, err):
    report = resolvent_growth_proxy(_kernel(args), _lambda_grid(args), _cfg(args))
    err.write(f"exponent={report.exponent!r} prefactor={report.prefactor!r}\n")
    return render_report(report)


def _alphas(text):
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--alphas must be a comma-separated list of numbers, got {text!r}")
    if not values:
        raise UsageError("--alphas is empty")
    return values


def cmd_simulate(args, err):
    if args.alphas is not None:
        # several modes: report the fitted envelope exponent only
        _need(args, "tmax", "dt")
        k = _kernel(args)
        res = decay_envelope_experiment(k, _pair(args, k), _alphas(args.alphas),
                                        args.tmax, args.dt)
        return f"exponent={res.exponent!r} bound={res.bound!r}\n"
    _need(args, "alpha", "tmax", "dt")
    params = ModeParams(args.alpha, _kernel(args), u0=args.u0, v0=args.v0)
    return render_report(simulate_mode(params, args.tmax, args.dt))


COMMANDS = {
    "transform": cmd_transform,
    "asymptote": cmd_asymptote,
    "identify": cmd_identify,
    "lemma-check": cmd_lemma_check,
    "rate": cmd_rate,
    "proxy": cmd_proxy,
    "simulate": cmd_simulate,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="halffourier",
        description="Half-line Fourier transforms of memory kernels and their asymptotics.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kernel", help="kernel expression, e.g. 'singexp(p=0.5,delta=1)'")
    common.add_argument("--lambda", dest="lam", type=float, help="single frequency")
    common.add_argument("--lambda-min", type=float)
    common.add_argument("--lambda-max", type=float)
    common.add_argument("--points", type=int, default=20, help="log-spaced grid size")
    common.add_argument("--tol", type=float, default=1e-10)
    common.add_argument("--p", type=float, help="singular exponent in [0, 1)")
    common.add_argument("--ell", type=float, help="limit amplitude of s**p f(s)")
    common.add_argument("--beta", type=float)
    common.add_argument("--alpha", type=float,
                        help="mode eigenvalue (simulate) or cut point (lemma-check lemma1)")
    common.add_argument("--alphas",
                        help="comma-separated eigenvalues (simulate: envelope experiment)")
    common.add_argument("--tmax", type=float)
    common.add_argument("--dt", type=float)
    common.add_argument("--u0", type=float, default=1.0)
    common.add_argument("--v0", type=float, default=0.0)
    common.add_argument("--out", help="write output here instead of stdout")
    helps = {
        "transform": "half Fourier transform on a frequency grid",
        "asymptote": "scaled transform against its limit ell*m(p)",
        "identify": "estimate (p, ell) from the kernel near zero",
        "lemma-check": "residual of an exact identity",
        "rate": "resolvent and decay exponents for a given p",
        "proxy": "resolvent growth proxy lambda/|mu^(lambda)|",
        "simulate": "integrate one mode of the equation with memory",
    }
    for name, text in helps.items():
        sp = sub.add_parser(name, parents=[common], help=text)
        if name == "identify":
            sp.add_argument("--s-min", type=float, default=1e-6)
            sp.add_argument("--s-max", type=float, default=1e-3)
            sp.add_argument("--n", type=int, default=64)
        if name == "lemma-check":
            sp.add_argument("--which", choices=["lemma1", "lemma2", "p0", "decompose"],
                            required=True)
    return parser


def run(argv=None, stdout=None, stderr=None):
    """Execute one command line; returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        # argparse prints usage and help to sys.stdout/sys.stderr directly
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text = COMMANDS[args.command](args, stderr)
    except (UsageError, KernelSpecError, DomainError) as exc:
        stderr.write(f"halffourier {args.command}: error: {exc}\n")
        return 2
    except ToleranceNotReached as exc:
        stderr.write(f"halffourier {args.command}: tolerance not reached: {exc}\n")
        return 1
    except (SimulationError, NonSummableError) as exc:
        stderr.write(f"halffourier {args.command}: computation failed: {exc}\n")
        return 1
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
