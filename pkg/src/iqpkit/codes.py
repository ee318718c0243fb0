"""Linear binary codes: quadratic-residue codes, weight distributions, bias.

A code is carried by a generator matrix whose *columns* span it; the matrix
may hold redundant columns.  Codewords are ints over ``length`` bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import isqrt

import numpy as np

from .f2la import BitMatrix, canonical_form, dot, rank

MAX_ENUM_RANK = 28
# codeword tables are built in blocks of 2**_LOW_BITS rows
_LOW_BITS = 20
_WORD = (1 << 64) - 1


@dataclass(frozen=True)
class LinearCode:
    generator: BitMatrix

    @property
    def length(self) -> int:
        return self.generator.nrows

    @cached_property
    def basis(self) -> list[int]:
        return canonical_form(self.generator).columns()

    @property
    def rank(self) -> int:
        return len(self.basis)

    def codewords(self) -> list[int]:
        """All codewords, for small codes and test oracles."""
        words = [0]
        for b in self.basis:
            words += [w ^ b for w in words]
        return words


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    for p in range(2, isqrt(q) + 1):
        if q % p == 0:
            return False
    return True


def legendre(a: int, q: int) -> int:
    """Legendre symbol by Euler's criterion; q an odd prime."""
    a %= q
    if a == 0:
        return 0
    return 1 if pow(a, (q - 1) // 2, q) == 1 else -1


def qr_generator_word(q: int) -> int:
    """Indicator of the nonzero quadratic residues mod q, position j <-> residue j."""
    return sum(1 << j for j in range(1, q) if legendre(j, q) == 1)


def _rotate(word: int, s: int, n: int) -> int:
    s %= n
    mask = (1 << n) - 1
    return ((word << s) | (word >> (n - s))) & mask


def qr_code(q: int) -> LinearCode:
    """Quadratic-residue code of prime length q with 8 | q+1."""
    if not is_prime(q):
        raise ValueError(f"q={q} is not prime")
    if (q + 1) % 8:
        raise ValueError(f"q={q}: 8 does not divide q+1")
    word = qr_generator_word(q)
    spanning = BitMatrix.from_columns([_rotate(word, s, q) for s in range(q)], q)
    gen = canonical_form(spanning)
    if gen.ncols != (q + 1) // 2:
        raise AssertionError(f"QR code rank {gen.ncols} != {(q + 1) // 2}")
    return LinearCode(gen)


def code_from_codewords(words: list[int], length: int) -> LinearCode:
    return LinearCode(BitMatrix.from_columns(words, length))


def repetition_code(n: int) -> LinearCode:
    return code_from_codewords([(1 << n) - 1], n)


def extended_hamming_code() -> LinearCode:
    """The [8,4] extended Hamming code."""
    words = ["11110000", "00111100", "00001111", "01010101"]
    return code_from_codewords([int(w[::-1], 2) for w in words], 8)


def _split_words(v: int, nwords: int) -> np.ndarray:
    return np.array([(v >> (64 * w)) & _WORD for w in range(nwords)], dtype=np.uint64)


def weight_distribution(code: LinearCode) -> np.ndarray:
    """Number of codewords of each weight ``0..length``.

    The low basis vectors are expanded into a table once; the high ones are
    walked in Gray-code order, each step XOR-ing one vector into the table
    offset.
    """
    basis = code.basis
    r = len(basis)
    if r > MAX_ENUM_RANK:
        raise ValueError(f"rank {r} exceeds enumeration bound {MAX_ENUM_RANK}")
    nwords = max(1, (code.length + 63) // 64)
    low, high = basis[:_LOW_BITS], basis[_LOW_BITS:]

    table = np.zeros((1, nwords), dtype=np.uint64)
    for b in low:
        table = np.concatenate([table, table ^ _split_words(b, nwords)])

    counts = np.zeros(code.length + 1, dtype=np.int64)
    offset = np.zeros(nwords, dtype=np.uint64)
    high_words = [_split_words(b, nwords) for b in high]
    for step in range(1 << len(high)):
        if step:
            flip = (step & -step).bit_length() - 1
            offset = offset ^ high_words[flip]
        weights = np.bitwise_count(table ^ offset).sum(axis=1, dtype=np.int64)
        counts += np.bincount(weights, minlength=code.length + 1)
    return counts


def wep_eval(code: LinearCode, x: float, y: float) -> float:
    """Weight enumerator polynomial sum_c x^wt(c) y^(len-wt(c))."""
    counts = weight_distribution(code)
    w = np.arange(code.length + 1)
    return float(np.sum(counts * np.power(float(x), w) * np.power(float(y), code.length - w)))


def code_bias(code: LinearCode, theta: float) -> float:
    """Mean over codewords of cos^2(theta * (length - 2 wt(c)))."""
    counts = weight_distribution(code)
    w = np.arange(code.length + 1)
    vals = np.cos(theta * (code.length - 2 * w)) ** 2
    return float(np.dot(counts, vals) / counts.sum())


def is_self_orthogonal(code: LinearCode) -> bool:
    b = code.basis
    return all(dot(b[i], b[j]) == 0 for i in range(len(b)) for j in range(i, len(b)))


def is_doubly_even(code: LinearCode) -> bool:
    # wt(a+b) = wt(a) + wt(b) - 2|a&b|, so a doubly-even basis with even
    # pairwise overlaps spans a doubly-even code, and conversely.
    return is_self_orthogonal(code) and all(v.bit_count() % 4 == 0 for v in code.basis)


def is_self_dual(code: LinearCode) -> bool:
    return code.length % 2 == 0 and 2 * code.rank == code.length and is_self_orthogonal(code)


def gram_matrix(g: BitMatrix) -> BitMatrix:
    cols = g.columns()
    rows = []
    for ci in cols:
        rows.append(sum(1 << j for j, cj in enumerate(cols) if dot(ci, cj)))
    return BitMatrix(g.ncols, g.ncols, tuple(rows))


def gram_rank(g: BitMatrix) -> int:
    """Rank over GF(2) of G^T G."""
    return rank(gram_matrix(g))


def pair_orthogonal_fraction(code: LinearCode) -> float:
    """Exhaustive Pr(c1 . c2 = 0) over ordered codeword pairs."""
    words = code.codewords()
    hits = sum(1 for a in words for b in words if dot(a, b) == 0)
    return hits / len(words) ** 2


__all__ = [
    "LinearCode",
    "MAX_ENUM_RANK",
    "code_bias",
    "code_from_codewords",
    "extended_hamming_code",
    "gram_matrix",
    "gram_rank",
    "is_doubly_even",
    "is_prime",
    "is_self_dual",
    "is_self_orthogonal",
    "legendre",
    "pair_orthogonal_fraction",
    "qr_code",
    "qr_generator_word",
    "repetition_code",
    "weight_distribution",
    "wep_eval",
]
