#!/usr/bin/env python3
"""Convergence study of the modulus-transport identity and packet forms.

Part 1: for several spectral parameters s, compare |omega(Phi(beta))|
against |w0(beta)| * exp(f3 + normalization shift) and print the max
relative error (expected to decay faster than 1/s).

Part 2: quadratic-form comparison across the magnetic map for a
geodesic-concentrated packet (slow at large s; bound with --s-max).

Usage: python3 scripts/run_transport_suite.py [--B 0.5] [--s-max 200]
"""

import argparse
import math

import numpy as np

from hyperlab import quantize as qz
from hyperlab import transport as tr
from hyperlab import waves as W


def modulus_errors(B, mtilde, s_list):
    grid = np.linspace(-1.0, 1.0, 81)
    errs = {}
    for s in s_list:
        B1 = math.floor(B * s) / s
        pts = np.array([tr.Phi(B1, mtilde, b) for b in grid])
        _, closed, _ = W.ascend(mtilde * s, s, B, pts)
        w0 = W.solve_wave(0.0, mtilde, s, "I", grid)
        f3s = np.array([tr.f3(B1, b, mtilde) for b in grid])
        pred = np.abs(w0.values) * np.exp(f3s + tr.wave_norm_shift(B1, mtilde))
        errs[s] = float(np.max(np.abs(np.abs(closed) / pred - 1.0)))
    return errs


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--B", type=float, default=0.5)
    ap.add_argument("--eta0", type=float, default=0.2)
    ap.add_argument("--s-max", type=float, default=200.0)
    args = ap.parse_args()

    print("# modulus transport |omega(Phi)| vs |w0| e^{f3}")
    s_list = [s for s in (50.0, 100.0, 200.0, 400.0) if s <= args.s_max]
    for mt in (0.0, 0.2, 0.4):
        errs = modulus_errors(args.B, mt, s_list)
        line = "  ".join(f"s={s:.0f}: {e:.3e}" for s, e in errs.items())
        print(f"mtilde={mt}:  {line}")

    print("# packet quadratic forms across the magnetic map")
    obs = qz.Observable(eta0=args.eta0, eps=0.2)
    rows = qz.measure_transport_check(s_list, args.B, obs, eta0=args.eta0,
                                      K=20, l=2 * math.pi)
    for r in rows:
        print(f"s={r['s']:.0f}  lhs={r['lhs_re']:.6e}  "
              f"rhs={r['rhs_re']:.6e}  rel_diff={r['rel_diff']:.3e}")


if __name__ == "__main__":
    main()
