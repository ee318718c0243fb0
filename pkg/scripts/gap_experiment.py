"""Honest prover vs second-derivative attack on QR challenges.

Prints the measured orthogonal fraction for each side next to the exact
bias, over several seeds per q.
"""

import argparse
import time

from iqpkit.attack import y_bias_exact, y_sample
from iqpkit.protocol import gen_challenge, prove, verify
from iqpkit.xprog import xp_bias


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, nargs="+", default=[7, 23, 31, 47])
    ap.add_argument("--samples", type=int, default=10_000)
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    print(f"{'q':>4} {'seed':>4} {'cols':>4} {'prove':>8} {'exact':>8} {'attack':>8} {'exact':>8} {'secs':>6}")
    for q in args.q:
        for seed in range(args.seeds):
            start = time.perf_counter()
            ch, sec = gen_challenge(q, seed=seed)
            honest = verify(prove(ch, args.samples, seed, args.threads), sec)
            cheat = verify(y_sample(ch.program, args.samples, seed), sec)
            secs = time.perf_counter() - start
            print(f"{q:>4} {seed:>4} {ch.public_matrix.ncols:>4} {honest.fraction:>8.4f} "
                  f"{xp_bias(ch.program, sec.s):>8.4f} {cheat.fraction:>8.4f} "
                  f"{y_bias_exact(ch.public_matrix, sec.s):>8.4f} {secs:>6.2f}")


if __name__ == "__main__":
    main()
