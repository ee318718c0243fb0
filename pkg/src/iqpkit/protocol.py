"""The two-party IQP challenge: generation, proof, verification, test sizing."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .codes import qr_code
from .f2la import BitMatrix, canonical_form, dot, solve
from .rng import make_rng
from .xprog import MAX_DIST_QUBITS, Distribution, SimulationBoundError, XProgram, xp_sample

QUANTUM_BIAS = math.cos(math.pi / 8) ** 2
CLASSICAL_BIAS = 0.75
DEFAULT_THRESHOLD = (QUANTUM_BIAS + CLASSICAL_BIAS) / 2
DEFAULT_MIN_SAMPLES = 500


@dataclass(frozen=True)
class Challenge:
    public_matrix: BitMatrix
    q: int
    theta: float = math.pi / 8

    @property
    def program(self) -> XProgram:
        return XProgram(self.public_matrix, self.theta)


@dataclass(frozen=True)
class Secret:
    s: int
    n: int
    causal_rows: tuple[int, ...]
    seed: int
    q: int

    def check(self, public: BitMatrix) -> bool:
        causal = set(self.causal_rows)
        return all(dot(row, self.s) == (i in causal) for i, row in enumerate(public.rows))


@dataclass
class Transcript:
    verdict: str
    n_raw: int
    n_filtered: int
    n_orthogonal: int
    fraction: float
    p_quantum: float
    p_classical: float
    threshold: float
    filtered: bool
    samples: list[int] = field(default_factory=list, repr=False)
    challenge: Optional[Challenge] = field(default=None, repr=False)


def _random_rows(rng: np.random.Generator, count: int, width: int) -> list[int]:
    if count == 0 or width == 0:
        return [0] * count
    arr = rng.integers(0, 2, size=(count, width), dtype=np.uint8)
    return list(BitMatrix.from_array(arr).rows)


def gen_challenge(q: int, extra_rows: Optional[int] = None, seed: int = 0) -> tuple[Challenge, Secret]:
    """Hide a QR-code matroid inside a larger random matrix.

    The QR generator gets an all-ones column appended (so that column is the
    secret direction), random rows with a 0 in that column are added, rows
    are shuffled, and the whole thing is canonically column-reduced.
    """
    if extra_rows is None:
        extra_rows = q
    if extra_rows < 0:
        raise ValueError("extra_rows must be non-negative")
    gen = qr_code(q).generator
    r = gen.ncols
    rng = make_rng(seed, "gen_challenge")
    causal = [row | (1 << r) for row in gen.rows]
    rows = causal + _random_rows(rng, extra_rows, r)
    perm = rng.permutation(len(rows))
    shuffled = [rows[i] for i in perm]
    causal_idx = tuple(i for i, src in enumerate(perm) if src < q)
    public = canonical_form(BitMatrix.from_rows(shuffled, r + 1))
    indicator = sum(1 << i for i in causal_idx)
    s = solve(public, indicator)
    if s is None:
        raise AssertionError("secret direction lost in reduction")
    return Challenge(public, q), Secret(s, public.ncols, causal_idx, seed, q)


def prove(challenge: Challenge, count: int, seed: int, workers: int = 1) -> list[int]:
    n = challenge.public_matrix.ncols
    if n > MAX_DIST_QUBITS:
        raise SimulationBoundError(f"simulation bound exceeded: {n} columns > {MAX_DIST_QUBITS}")
    return xp_sample(challenge.program, count, seed, workers)


def hoeffding_tail(count: int, deviation: float) -> float:
    """exp(-2 N t^2) for a deviation t > 0 in the stated direction, else 1."""
    if count == 0 or deviation <= 0:
        return 1.0
    return math.exp(-2.0 * count * deviation * deviation)


def should_filter(mode: str, count: int, n: int) -> bool:
    """Whether to strip short circuits (all-zero and repeated samples).

    They only signal cheating when an honest sampler would almost never
    produce them, i.e. above the birthday bound ``2^n >= N^2``.  Below it
    an honest prover emits 0 and repeats routinely, and stripping them would
    bias the orthogonal fraction.
    """
    if mode == "always":
        return True
    if mode == "never":
        return False
    if mode != "auto":
        raise ValueError(f"unknown filter mode {mode!r}")
    return (1 << n) >= count * count


def filter_samples(samples: Sequence[int]) -> list[int]:
    """Drop all-zero samples and repeats, keeping first occurrences."""
    out = []
    seen: set[int] = set()
    for x in samples:
        if x == 0 or x in seen:
            continue
        seen.add(x)
        out.append(x)
    return out


def verify(samples: Sequence[int], secret: Secret, threshold: float = DEFAULT_THRESHOLD,
           min_samples: int = DEFAULT_MIN_SAMPLES, filter_mode: str = "auto",
           challenge: Optional[Challenge] = None) -> Transcript:
    limit = 1 << secret.n
    for x in samples:
        if not 0 <= x < limit:
            raise ValueError("sample longer than the challenge width")
    strip = should_filter(filter_mode, len(samples), secret.n)
    kept = filter_samples(samples) if strip else list(samples)
    m = len(kept)
    orth = sum(1 for x in kept if dot(x, secret.s) == 0)
    frac = orth / m if m else 0.0
    p_quantum = hoeffding_tail(m, QUANTUM_BIAS - frac)
    p_classical = hoeffding_tail(m, frac - CLASSICAL_BIAS)
    if m < min_samples:
        verdict = "INCONCLUSIVE"
    elif frac >= threshold:
        verdict = "ACCEPT"
    else:
        verdict = "REJECT"
    return Transcript(verdict, len(samples), m, orth, frac, p_quantum, p_classical,
                      threshold, strip, list(samples), challenge)


# distribution statistics


def _probs(d) -> np.ndarray:
    return d.probs if isinstance(d, Distribution) else np.asarray(d, dtype=float)


def stat_distance(p, q, order: float = 1) -> float:
    """l_p additive gap between two distributions on the same domain."""
    a, b = _probs(p), _probs(q)
    if a.shape != b.shape:
        raise ValueError("distributions live on different domains")
    diff = np.abs(a - b)
    if math.isinf(order):
        return float(diff.max(initial=0.0))
    if order < 1:
        raise ValueError("order must be >= 1")
    return float(np.sum(diff ** order) ** (1.0 / order))


def mult_gap(p, q) -> float:
    """max |log P(x) - log Q(x)| over the common support; inf if supports differ."""
    a, b = _probs(p), _probs(q)
    if a.shape != b.shape:
        raise ValueError("distributions live on different domains")
    sa, sb = a > 0, b > 0
    if np.any(sa != sb):
        return math.inf
    if not sa.any():
        return 0.0
    return float(np.max(np.abs(np.log(a[sa]) - np.log(b[sb]))))


def amplify_bound(b: float, k: int) -> float:
    """Lower bound 1 - 2 exp(-k b^2 / 2) on the bias after a k-fold majority vote."""
    if abs(b) > 1:
        raise ValueError("|b| must be at most 1")
    if k < 1 or k % 2 == 0:
        raise ValueError("k must be a positive odd integer")
    return 1.0 - 2.0 * math.exp(-k * b * b / 2.0)


def plan_samples(gap: float, max_error: float) -> int:
    """Smallest N with exp(-2 N (gap/2)^2) <= max_error."""
    if not 0 < gap < 1:
        raise ValueError("gap must lie in (0, 1)")
    if not 0 < max_error <= 1:
        raise ValueError("max_error must lie in (0, 1]")
    rate = 2.0 * (gap / 2.0) ** 2
    n = max(0, math.ceil(-math.log(max_error) / rate))
    # guard the ceiling against rounding in either direction
    while n > 0 and math.exp(-rate * (n - 1)) <= max_error:
        n -= 1
    while math.exp(-rate * n) > max_error:
        n += 1
    return n
