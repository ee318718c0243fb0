"""Collision entropy of random X-programs at theta = pi/8.

Reports mean S2 against n for random k-row programs.  The claim that S2
grows like n - O(1) is a conjecture; this only prints numbers.
"""

import argparse
import math

import numpy as np

from iqpkit.f2la import random_bitmatrix
from iqpkit.xprog import XProgram, collision_entropy, xp_distribution


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[4, 6, 8, 10, 12, 14])
    ap.add_argument("--rows-per-qubit", type=float, default=2.0)
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'n':>3} {'k':>3} {'mean S2':>8} {'sd':>6} {'n - S2':>7}")
    for n in args.n:
        k = round(args.rows_per_qubit * n)
        vals = [collision_entropy(xp_distribution(XProgram(
            random_bitmatrix(k, n, args.seed + t, label=f"entropy/{n}"), math.pi / 8)))
            for t in range(args.trials)]
        print(f"{n:>3} {k:>3} {np.mean(vals):>8.3f} {np.std(vals):>6.3f} {n - np.mean(vals):>7.3f}")


if __name__ == "__main__":
    main()
