"""Decay envelope over a dense family of modes, compared with the bound
exponent 1/(2-p).  Sparse families decay faster than the envelope of the
whole spectrum, so the default family is dense over several decades."""
import argparse

import numpy as np

from halffourier.kernels import parse_kernel
from halffourier.memory import decay_envelope_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kernel", default="singexp(p=0.5,delta=1)")
    ap.add_argument("--alpha-min", type=float, default=1.0)
    ap.add_argument("--alpha-max", type=float, default=1e3)
    ap.add_argument("--modes", type=int, default=25)
    ap.add_argument("--tmax", type=float, default=200.0)
    ap.add_argument("--dt", type=float, default=0.05)
    ap.add_argument("--tail", type=float, default=0.5,
                    help="fraction of [0, tmax] used for the power fit")
    args = ap.parse_args()

    alphas = np.geomspace(args.alpha_min, args.alpha_max, args.modes)
    res = decay_envelope_experiment(parse_kernel(args.kernel), None, alphas, args.tmax,
                                    args.dt, tail=args.tail)
    for alpha, e in sorted(res.mode_exponents.items()):
        print(f"alpha={alpha:10.4g} mode_exponent={e:.4f}")
    print(f"envelope_exponent={res.exponent:.4f} bound={res.bound:.4f}")


if __name__ == "__main__":
    main()
