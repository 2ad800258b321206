#!/usr/bin/env python3
"""Sweep the two singular-history truncation series and print their growth.

Example:
    python scripts/divergence_scan.py --max-n 16384
"""

import argparse
import math

import numpy as np

from histq.divergence import b1_series, b2_series, growth_fit


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-n", type=int, default=10000)
    parser.add_argument("--points", type=int, default=12)
    args = parser.parse_args()

    ns1 = sorted(set(int(round(x))
                     for x in np.logspace(1, math.log10(args.max_n), args.points)))
    s1 = b1_series(ns1)
    fit1 = growth_fit(s1)
    print("series b1 (symmetrized-pair projector sum, q = identity)")
    for n, v in s1.points:
        print(f"  N={n:>6d}  value={v:.6f}")
    print(f"  fit: {fit1.classification}, slope {fit1.slope:.6f} "
          f"(expected w_1/2 = 0.25), residual {fit1.residual:.2e}")

    # growth_fit wants two decades of N, so never stop below 2^11
    kmax = max(11, int(math.floor(math.log2(args.max_n))))
    ns2 = [2 ** k for k in range(4, kmax + 1)]
    s2 = b2_series(ns2)
    fit2 = growth_fit(s2)
    values = dict(s2.points)
    print("\nseries b2 (harmonic-weight shell operator vs the unit)")
    for n, v in s2.points:
        print(f"  N={n:>6d}  value={v:.6f}")
    print(f"  fit: {fit2.classification}, slope {fit2.slope:.4f} "
          f"(expected 1), residual {fit2.residual:.2e}")
    print("  doubling differences (-> ln 2 = %.6f):" % math.log(2))
    for a, b in zip(ns2, ns2[1:]):
        print(f"    S({b}) - S({a}) = {values[b] - values[a]:.6f}")


if __name__ == "__main__":
    main()
