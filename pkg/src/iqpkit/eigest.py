"""Eigenvalue estimation post-processing with a 2^a 3^b control schedule.

The sampler models the oracle: for a permutation ``f``, a random point's
orbit length ``q`` and a random ``kappa`` fix the phase ``kappa/q``, and the
bit for control value ``c`` is 1 with probability ``sin^2(pi c kappa / q)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .f2la import BitMatrix, transvection_synthesis
from .rng import make_rng

ZOOM_FLOOR = math.sin(math.pi / 8) ** 2
DEFAULT_ETA = 0.32


@dataclass(frozen=True)
class ControlSchedule:
    t: int
    d: int
    k: int

    def controls(self) -> list[int]:
        """Distinct control values in (alpha, beta) order."""
        return [2 ** a * 3 ** b for a in range(self.t + 1) for b in range(self.d + 1)]

    def entries(self) -> list[int]:
        return [c for c in self.controls() for _ in range(self.k)]

    @property
    def m(self) -> int:
        return self.k * (self.t + 1) * (self.d + 1)


@dataclass(frozen=True)
class PhaseSamples:
    t: int
    d: int
    k: int
    mu: dict[tuple[int, int], float]


def chernoff_rate(eta: float) -> float:
    """Worst of the two per-decision exponents, 2 min(1/2 - eta, eta - sin^2(pi/8))^2."""
    gap = min(0.5 - eta, eta - ZOOM_FLOOR)
    if gap <= 0:
        raise ValueError("eta must lie strictly between sin^2(pi/8) and 1/2")
    return 2.0 * gap * gap


def make_schedule(n: int, eps: float, eta: float = DEFAULT_ETA) -> ControlSchedule:
    if n < 1 or not 0 < eps < 1:
        raise ValueError("need n >= 1 and 0 < eps < 1")
    t = 2 * n
    d = 0
    while 3 ** d <= 2 ** n:
        d += 1
    k = math.ceil(math.log((t + 1) * (d + 1) / eps) / chernoff_rate(eta))
    return ControlSchedule(t, d, k)


def error_budget(schedule: ControlSchedule, eta: float = DEFAULT_ETA) -> tuple[float, float]:
    cells = (schedule.t + 1) * (schedule.d + 1)
    k = schedule.k
    return (cells * math.exp(-2 * k * (0.5 - eta) ** 2),
            cells * math.exp(-2 * k * (eta - ZOOM_FLOOR) ** 2))


def exact_mu(c: int, kappa: int, q: int) -> float:
    # reduce c*kappa mod q in integers so huge controls keep full precision
    return math.sin(math.pi * ((c * kappa) % q) / q) ** 2


def sample_mu(kappa: int, q: int, schedule: ControlSchedule, rng: np.random.Generator) -> PhaseSamples:
    mu = {}
    for a in range(schedule.t + 1):
        for b in range(schedule.d + 1):
            p = exact_mu(2 ** a * 3 ** b, kappa, q)
            mu[(a, b)] = rng.binomial(schedule.k, p) / schedule.k
    return PhaseSamples(schedule.t, schedule.d, schedule.k, mu)


def noiseless_samples(kappa: int, q: int, t: int, d: int) -> PhaseSamples:
    mu = {(a, b): exact_mu(2 ** a * 3 ** b, kappa, q) for a in range(t + 1) for b in range(d + 1)}
    return PhaseSamples(t, d, 0, mu)


Permutation = Union[Sequence[int], BitMatrix]


def _step(f: Permutation):
    if isinstance(f, BitMatrix):
        return f.apply, 1 << f.ncols
    table = list(f)
    return table.__getitem__, len(table)


def orbit_length(f: Permutation, x: int) -> int:
    step, _ = _step(f)
    q, y = 1, step(x)
    while y != x:
        y = step(y)
        q += 1
    return q


def sample_bits(f: Permutation, schedule: ControlSchedule, seed: int,
                reveal: bool = False) -> tuple[PhaseSamples, Optional[tuple[int, int]]]:
    """One oracle call: random point, its orbit length q, random kappa in [0, q).

    The hidden ``(kappa, q)`` is returned only when ``reveal`` is set.
    """
    _, size = _step(f)
    rng = make_rng(seed, "sample_bits")
    x = int(rng.integers(size))
    q = orbit_length(f, x)
    kappa = int(rng.integers(q))
    samples = sample_mu(kappa, q, schedule, rng)
    return samples, ((kappa, q) if reveal else None)


def decode(samples: PhaseSamples, eta: float = DEFAULT_ETA) -> list[int]:
    """Bits phi_1 .. phi_{t+1} of phi = 0.phi_1 phi_2 ..., with phi_1 = 0."""
    sigma = 0
    bits = []
    for a in range(samples.t + 1):
        bits.append(sigma)
        sigma = 1 - sigma
        for b in range(samples.d + 1):
            sigma = 1 - sigma
            mu = samples.mu[(a, b)]
            if mu < eta:
                break
            if mu > 1 - eta:
                sigma = 1 - sigma
                break
    return bits


def bits_value(bits: Sequence[int]) -> Fraction:
    return sum((Fraction(b, 2 ** (i + 1)) for i, b in enumerate(bits)), Fraction(0))


def continued_fraction(x: Fraction) -> list[int]:
    terms = []
    num, den = x.numerator, x.denominator
    while den:
        a, r = divmod(num, den)
        terms.append(a)
        num, den = den, r
    return terms


def cf_recover(estimate: Fraction, max_den: int) -> Fraction:
    """Closest rational with denominator <= max_den, via convergents and semiconvergents."""
    if max_den < 1:
        raise ValueError("max_den must be positive")
    x = Fraction(estimate)
    if x.denominator <= max_den:
        return x
    p0, q0, p1, q1 = 0, 1, 1, 0
    for a in continued_fraction(x):
        q2 = q0 + a * q1
        if q2 > max_den:
            # largest semiconvergent that still fits, compared with the last convergent
            j = (max_den - q0) // q1
            semi = Fraction(p0 + j * p1, q0 + j * q1)
            conv = Fraction(p1, q1)
            return conv if abs(conv - x) <= abs(semi - x) else semi
        p0, q0, p1, q1 = p1, q1, p0 + a * p1, q2
    return Fraction(p1, q1)


def phase_estimate(bits: Sequence[int]) -> Fraction:
    """Midpoint of the dyadic interval the decoded bits name."""
    return bits_value(bits) + Fraction(1, 2 ** (len(bits) + 1))


def recover_phase(samples: PhaseSamples, max_den: int, eta: float = DEFAULT_ETA) -> Fraction:
    return cf_recover(phase_estimate(decode(samples, eta)), max_den)


def truncation_matches(bits: Sequence[int], phi: Fraction) -> bool:
    """Decoded bits equal either binary expansion of phi to len(bits) places."""
    scale = 2 ** len(bits)
    got = bits_value(bits) * scale
    low = math.floor(phi * scale)
    if got == low:
        return True
    # a dyadic phi also has the expansion ending in ...0111
    return (phi * scale).denominator == 1 and got == low - 1


# finite field demo


def _poly_mulmod(a: int, b: int, poly: int, n: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if (a >> n) & 1:
            a ^= poly
    return out


def _prime_factors(v: int) -> list[int]:
    out, p = [], 2
    while p * p <= v:
        if v % p == 0:
            out.append(p)
            while v % p == 0:
                v //= p
        p += 1
    if v > 1:
        out.append(v)
    return out


@dataclass(frozen=True)
class GF2n:
    """GF(2^n) as F_2[x] / (poly); elements are ints below 2^n."""

    n: int
    poly: int

    @classmethod
    def standard(cls, n: int) -> "GF2n":
        """Field with the numerically smallest primitive polynomial, so x = 2 generates."""
        if not 1 <= n <= 16:
            raise ValueError("field bits must lie in 1..16")
        order = (1 << n) - 1
        for low in range(1, 1 << n, 2):
            f = cls(n, (1 << n) | low)
            if f.element_order(2 if n > 1 else 1) == order:
                return f
        raise AssertionError("no primitive polynomial found")

    @property
    def order(self) -> int:
        return (1 << self.n) - 1

    def mul(self, a: int, b: int) -> int:
        return _poly_mulmod(a, b, self.poly, self.n)

    def pow(self, a: int, e: int) -> int:
        """a^e for a unit a; the exponent is taken mod 2^n - 1."""
        return self._raw_pow(a, e % self.order)

    def _raw_pow(self, a: int, e: int) -> int:
        out = 1
        while e:
            if e & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            e >>= 1
        return out

    def element_order(self, a: int) -> int:
        if a == 0:
            return 0
        # in a reducible quotient ring no element reaches order 2^n - 1
        if self._raw_pow(a, self.order) != 1:
            return 0
        o = self.order
        for p in _prime_factors(o):
            while o % p == 0 and self._raw_pow(a, o // p) == 1:
                o //= p
        return o

    def mult_matrix(self, c: int) -> BitMatrix:
        """Matrix of x -> c * x; column j is c * 2^j."""
        return BitMatrix.from_columns([self.mul(c, 1 << j) for j in range(self.n)], self.n)

    def dlog_bruteforce(self, g: int, h: int) -> Optional[int]:
        v = 1
        for s in range(self.order):
            if v == h:
                return s
            v = self.mul(v, g)
        return None


@dataclass(frozen=True)
class DlogResult:
    s: Optional[int]
    attempts: int
    op_count_total: int
    op_count_max: int


def synthesis_cost(field: GF2n, base: int, controls: Sequence[int]) -> tuple[int, int]:
    """Total and largest row-operation count for the in-place circuits of x -> base^c x."""
    counts = [len(transvection_synthesis(field.mult_matrix(field.pow(base, c)))) for c in controls]
    return sum(counts), max(counts, default=0)


def dlog_demo(n: int, g: int, h: int, seed: int, eps: float = 0.05, eta: float = DEFAULT_ETA,
              retries: int = 5, schedule: Optional[ControlSchedule] = None) -> DlogResult:
    """Find s with g^s = h from two shared-kappa phase estimates.

    The first half of the schedule sees phase kappa/q (powers of g), the
    second half kappa*s/q (powers of h).  The group order q = 2^n - 1 is
    public, so phases are rounded onto the 1/q grid; an attempt is discarded
    when the first phase is not a unit of Z/q, which is observable.
    """
    field = GF2n.standard(n)
    q = field.order
    if field.element_order(g) != q:
        raise ValueError("g does not generate the multiplicative group")
    if schedule is None:
        schedule = make_schedule(n, eps, eta)
    controls = schedule.controls()
    g_total, g_max = synthesis_cost(field, g, controls)
    h_total, h_max = synthesis_cost(field, h, controls)
    ops_total, ops_max = g_total + h_total, max(g_max, h_max)
    # the simulated oracle needs the eigenphase of x -> h x, which is kappa s / q
    oracle_s = field.dlog_bruteforce(g, h)
    if oracle_s is None:
        raise ValueError("h is not a power of g")
    for attempt in range(1, retries + 1):
        rng = make_rng(seed, f"dlog/{attempt}")
        x = int(rng.integers(1 << n))
        if x == 0:
            continue  # fixed point of every multiplication: orbit of length 1
        kappa = int(rng.integers(q))
        first = sample_mu(kappa, q, schedule, rng)
        second = sample_mu(kappa * oracle_s % q, q, schedule, rng)
        phi1 = recover_phase(first, q, eta)
        k1 = round(phase_estimate(decode(first, eta)) * q) % q
        if phi1.denominator != q or math.gcd(k1, q) != 1:
            continue
        u = round(phase_estimate(decode(second, eta)) * q) % q
        base = u * pow(k1, -1, q) % q
        for cand in (base, (-base) % q):
            if field.pow(g, cand) == h:
                return DlogResult(cand, attempt, ops_total, ops_max)
    return DlogResult(None, retries, ops_total, ops_max)


def partition_identity(c: Sequence[int], q: int) -> tuple[float, float, float]:
    """Mean over kappa of prod cos(2 pi c_j kappa / q) against the balanced-subset rate."""
    c = [int(v) for v in c]
    m = len(c)
    if m > 20:
        raise ValueError("at most 20 terms")
    if q < 1:
        raise ValueError("q must be positive")
    kap = np.arange(q)
    prod = np.ones(q)
    for v in c:
        prod *= np.cos(2 * np.pi * ((v * kap) % q) / q)
    lhs = float(prod.mean())
    sums = np.zeros(1, dtype=np.int64)
    for v in c:
        sums = np.concatenate([sums, sums + v])
    balanced = (2 * sums - sum(c)) % q == 0
    rhs = float(balanced.mean())
    return lhs, rhs, abs(lhs - rhs)
