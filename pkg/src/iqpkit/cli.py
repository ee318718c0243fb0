"""Command-line entry point.  Reports end with a ``RESULT key=value ...`` line."""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import formats
from .attack import y_sample
from .codes import code_bias, gram_rank, is_doubly_even, qr_code, weight_distribution
from .eigest import (DEFAULT_ETA, GF2n, cf_recover, decode, dlog_demo, error_budget,
                     make_schedule, phase_estimate, sample_bits)
from .f2la import bitstring, parse_bitstring
from .protocol import (DEFAULT_MIN_SAMPLES, DEFAULT_THRESHOLD, gen_challenge, prove, verify)
from .rng import make_rng, parse_seed
from .stab import (PauliOperator, clock_matrix, clock_period, dqc1_bias, dqc1_build,
                   evaluate_cnots, line_adjacency, parse_cnot_file, pauli_vector,
                   reverses_at, tick)
from .xprog import SimulationBoundError

EXIT_ERROR = 3
VERDICT_EXIT = {"ACCEPT": 0, "REJECT": 1, "INCONCLUSIVE": 2}


class CliError(Exception):
    pass


def _flag(v: bool) -> str:
    return "true" if v else "false"


def _int(text: str) -> int:
    return int(text, 0)


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="ascii", newline="\n")


def _read(path: str) -> str:
    return Path(path).read_text(encoding="ascii")


def cmd_gen(args) -> int:
    ch, sec = gen_challenge(args.q, args.extra, parse_seed(args.seed))
    _write(args.out + ".challenge", formats.dump_challenge(ch))
    _write(args.out + ".secret", formats.dump_secret(sec))
    m = ch.public_matrix
    print(f"wrote {args.out}.challenge ({m.nrows} rows, {m.ncols} cols) and {args.out}.secret")
    print(f"RESULT rows={m.nrows} cols={m.ncols}")
    return 0


def cmd_prove(args) -> int:
    ch = formats.load_challenge(_read(args.challenge))
    xs = prove(ch, args.n, parse_seed(args.seed), workers=args.threads)
    _write(args.out, formats.dump_samples(xs, ch.public_matrix.ncols))
    print(f"RESULT samples={len(xs)}")
    return 0


def cmd_attack(args) -> int:
    ch = formats.load_challenge(_read(args.challenge))
    ys = y_sample(ch.public_matrix, args.n, parse_seed(args.seed))
    _write(args.out, formats.dump_samples(ys, ch.public_matrix.ncols))
    print(f"RESULT samples={len(ys)}")
    return 0


def cmd_verify(args) -> int:
    ch = formats.load_challenge(_read(args.challenge))
    sec = formats.load_secret(_read(args.secret))
    n = ch.public_matrix.ncols
    if sec.n != n:
        raise CliError(f"secret has length {sec.n}, challenge has {n} columns")
    if not sec.check(ch.public_matrix):
        raise CliError("secret does not match this challenge")
    xs = formats.load_samples(_read(args.samples), n)
    tr = verify(xs, sec, args.threshold, args.min_samples, args.filter, ch)
    print(tr.verdict)
    print(f"  samples received   {tr.n_raw}")
    print(f"  kept               {tr.n_filtered} (short circuits removed: {_flag(tr.filtered)})")
    print(f"  orthogonal         {tr.n_orthogonal}")
    print(f"  fraction           {tr.fraction:.6f}")
    print(f"  threshold          {tr.threshold:.6f}")
    print(f"  p(quantum)         {tr.p_quantum:.3e}")
    print(f"  p(classical)       {tr.p_classical:.3e}")
    print(f"RESULT verdict={tr.verdict} fraction={tr.fraction:.6f} filtered={tr.n_filtered}")
    return VERDICT_EXIT[tr.verdict]


def cmd_eigest_demo(args) -> int:
    seed = parse_seed(args.seed)
    sch = make_schedule(args.n, args.eps, args.eta)
    perm = make_rng(seed, "eigest-demo/perm").permutation(1 << args.n).tolist()
    samples, hidden = sample_bits(perm, sch, seed, reveal=True)
    kappa, q = hidden
    bits = decode(samples, args.eta)
    got = cf_recover(phase_estimate(bits), 1 << args.n)
    truth = Fraction(kappa, q)
    ok = got in (truth, 1 - truth)
    p1, p2 = error_budget(sch, args.eta)
    print(f"schedule t={sch.t} d={sch.d} k={sch.k} m={sch.m}")
    print(f"error budget {p1:.3e} (threshold) {p2:.3e} (zoom)")
    print(f"decoded bits {''.join(map(str, bits))}")
    print(f"hidden phase {truth}  recovered {got}")
    print(f"RESULT recovered={got} truth={truth} ok={_flag(ok)}")
    return 0 if ok else 1


def cmd_dlog_demo(args) -> int:
    field = GF2n.standard(args.n)
    res = dlog_demo(args.n, args.g, args.h, parse_seed(args.seed), args.eps, args.eta)
    ok = res.s is not None and field.pow(args.g, res.s) == args.h
    print(f"field GF(2^{args.n}) modulus {bin(field.poly)}, group order {field.order}")
    print(f"in-place circuit rows ops: total {res.op_count_total}, largest {res.op_count_max}")
    print(f"attempts {res.attempts}")
    print(f"RESULT s={res.s if res.s is not None else 'none'} ok={_flag(ok)} attempts={res.attempts}")
    return 0 if ok else 1


def cmd_dqc1_demo(args) -> int:
    width, cnots = parse_cnot_file(_read(args.circuit))
    if len(args.x) != width:
        raise CliError(f"input has {len(args.x)} bits, circuit width is {width}")
    x = parse_bitstring(args.x)
    bias = dqc1_bias(dqc1_build(cnots, x, width))
    out = evaluate_cnots(cnots, x)
    print(f"circuit width {width}, {len(cnots)} CNOTs")
    print(f"classical output {bitstring(out, width)}")
    print(f"RESULT bias={bias} s2={out & 1}")
    return 0


def cmd_clock_check(args) -> int:
    n = args.cells
    if n < 1:
        raise CliError("need at least one cell")
    a = line_adjacency(n)
    rev = reverses_at(a, n + 1)
    period = clock_period(a, limit=4 * n + 8)
    mat = clock_matrix(a)
    agree = True
    for j in range(n):
        for kind in "XZ":
            p = PauliOperator.single(n, kind, j)
            agree &= pauli_vector(tick(a, p)) == mat.apply(pauli_vector(p))
    print(f"line of {n} cells: reversal at {n + 1} ticks: {_flag(rev)}")
    print(f"gate-wise tick agrees with matrix on masks: {_flag(agree)}")
    print(f"RESULT reversal={_flag(rev)} period={period if period else 'none'}")
    return 0


def cmd_code_info(args) -> int:
    code = qr_code(args.q)
    counts = weight_distribution(code)
    nonzero = {w: int(c) for w, c in enumerate(counts) if c}
    bias = code_bias(code, math.pi / 8)
    classical = 0.5 * (1 + 2.0 ** -gram_rank(code.generator))
    print(f"QR code q={args.q}: length {code.length}, rank {code.rank}")
    print(f"weight distribution {nonzero}")
    print(f"gram rank {gram_rank(code.generator)}, doubly even {_flag(is_doubly_even(code))}")
    print(f"RESULT rank={code.rank} bias={bias:.6f} classical={classical:.6f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="iqpkit")
    ap.add_argument("--threads", type=int, default=1, help="worker threads for sampling")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a challenge and its secret")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--extra", type=int, default=None)
    p.add_argument("--seed", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    for name, func in (("prove", cmd_prove), ("attack", cmd_attack)):
        p = sub.add_parser(name)
        p.add_argument("--challenge", required=True)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--seed", required=True)
        p.add_argument("--out", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("verify")
    p.add_argument("--challenge", required=True)
    p.add_argument("--secret", required=True)
    p.add_argument("--samples", required=True)
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    p.add_argument("--min-samples", type=int, default=DEFAULT_MIN_SAMPLES)
    p.add_argument("--filter", choices=("auto", "always", "never"), default="auto",
                   help="strip all-zero and repeated samples (auto: only above the birthday bound)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("eigest-demo")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", required=True)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--eta", type=float, default=DEFAULT_ETA)
    p.set_defaults(func=cmd_eigest_demo)

    p = sub.add_parser("dlog-demo")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--g", type=_int, default=2)
    p.add_argument("--h", type=_int, required=True)
    p.add_argument("--seed", required=True)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--eta", type=float, default=DEFAULT_ETA)
    p.set_defaults(func=cmd_dlog_demo)

    p = sub.add_parser("dqc1-demo")
    p.add_argument("--circuit", required=True)
    p.add_argument("--x", required=True)
    p.set_defaults(func=cmd_dqc1_demo)

    p = sub.add_parser("clock-check")
    p.add_argument("--cells", type=int, required=True)
    p.set_defaults(func=cmd_clock_check)

    p = sub.add_parser("code-info")
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=cmd_code_info)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError, OSError, SimulationBoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
