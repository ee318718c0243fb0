"""Phase recovery rate of the 2^a 3^b schedule against n and k.

For each n the schedule from make_schedule is run as is and with k scaled
down, to show where the error budget starts to bite.
"""

import argparse
from dataclasses import replace
from fractions import Fraction

from iqpkit.eigest import error_budget, make_schedule, recover_phase, sample_mu
from iqpkit.rng import make_rng


def recovery_rate(n: int, schedule, runs: int, seed: int) -> float:
    hits = 0
    for run in range(runs):
        rng = make_rng(seed, f"eigest-survey/{n}/{schedule.k}/{run}")
        q = int(rng.integers(1, (1 << n) + 1))
        kappa = int(rng.integers(0, q))
        got = recover_phase(sample_mu(kappa, q, schedule, rng), 1 << n)
        hits += got in (Fraction(kappa, q), 1 - Fraction(kappa, q))
    return hits / runs


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[4, 6, 8, 10])
    ap.add_argument("--eps", type=float, default=0.05)
    ap.add_argument("--runs", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'n':>3} {'t':>3} {'d':>3} {'k':>4} {'budget':>9} {'rate':>6}")
    for n in args.n:
        base = make_schedule(n, args.eps)
        for scale in (1.0, 0.5, 0.25, 0.1):
            sched = replace(base, k=max(1, round(base.k * scale)))
            budget = sum(error_budget(sched))
            rate = recovery_rate(n, sched, args.runs, args.seed)
            print(f"{n:>3} {sched.t:>3} {sched.d:>3} {sched.k:>4} {budget:>9.3g} {rate:>6.3f}")


if __name__ == "__main__":
    main()
