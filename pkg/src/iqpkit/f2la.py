"""Bit-packed linear algebra over GF(2).

Rows and bit-vectors are plain Python ints: bit ``j`` of ``rows[i]`` is the
matrix entry ``(i, j)``.  Python ints are arbitrary-width packed words, so a
row XOR is a single operation regardless of width.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

from .rng import make_rng


def parity(v: int) -> int:
    return v.bit_count() & 1


def dot(a: int, b: int) -> int:
    """Inner product of two bit-vectors mod 2."""
    return (a & b).bit_count() & 1


def bits_of(v: int) -> Iterable[int]:
    while v:
        low = v & -v
        yield low.bit_length() - 1
        v ^= low


def int_to_bits(v: int, n: int) -> np.ndarray:
    return np.array([(v >> j) & 1 for j in range(n)], dtype=np.uint8)


def bits_to_int(bits: Iterable[int]) -> int:
    out = 0
    for j, b in enumerate(bits):
        if b:
            out |= 1 << j
    return out


def bitstring(v: int, n: int) -> str:
    """Character form, position ``j`` of the string is bit ``j``."""
    return "".join("1" if (v >> j) & 1 else "0" for j in range(n))


def parse_bitstring(s: str) -> int:
    if any(ch not in "01" for ch in s):
        raise ValueError(f"not a bit string: {s!r}")
    return bits_to_int(ch == "1" for ch in s)


@dataclass(frozen=True)
class BitMatrix:
    """Immutable dense matrix over GF(2), one packed int per row."""

    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.nrows:
            raise ValueError("row count does not match nrows")
        limit = 1 << self.ncols
        for r in self.rows:
            if r < 0 or r >= limit:
                raise ValueError("row has bits beyond ncols")

    # constructors

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls(nrows, ncols, (0,) * nrows)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_rows(cls, rows: Sequence[int], ncols: int) -> "BitMatrix":
        return cls(len(rows), ncols, tuple(int(r) for r in rows))

    @classmethod
    def from_columns(cls, cols: Sequence[int], nrows: int) -> "BitMatrix":
        rows = [0] * nrows
        for j, c in enumerate(cols):
            for i in bits_of(c):
                if i >= nrows:
                    raise ValueError("column has bits beyond nrows")
                rows[i] |= 1 << j
        return cls(nrows, len(cols), tuple(rows))

    @classmethod
    def from_array(cls, arr) -> "BitMatrix":
        arr = np.asarray(arr, dtype=np.uint8) & 1
        if arr.ndim != 2:
            raise ValueError("expected a 2-d array")
        nrows, ncols = arr.shape
        if ncols == 0:
            return cls.zeros(nrows, 0)
        packed = np.packbits(arr, axis=1, bitorder="little")
        rows = tuple(int.from_bytes(row.tobytes(), "little") for row in packed)
        return cls(nrows, ncols, rows)

    @classmethod
    def from_strings(cls, lines: Sequence[str], ncols: Optional[int] = None) -> "BitMatrix":
        if ncols is None:
            ncols = len(lines[0]) if lines else 0
        for line in lines:
            if len(line) != ncols:
                raise ValueError("ragged rows")
        return cls(len(lines), ncols, tuple(parse_bitstring(s) for s in lines))

    # views

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols), dtype=np.uint8)
        if self.ncols == 0:
            return out
        nbytes = (self.ncols + 7) // 8
        for i, r in enumerate(self.rows):
            buf = np.frombuffer(r.to_bytes(nbytes, "little"), dtype=np.uint8)
            out[i] = np.unpackbits(buf, bitorder="little")[: self.ncols]
        return out

    def to_strings(self) -> list[str]:
        return [bitstring(r, self.ncols) for r in self.rows]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return (self.rows[i] >> j) & 1

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def T(self) -> "BitMatrix":
        return BitMatrix(self.ncols, self.nrows, tuple(self.columns()))

    def columns(self) -> list[int]:
        """Columns as ints; bit ``i`` of column ``j`` is entry ``(i, j)``."""
        if self.nrows == 0 or self.ncols == 0:
            return [0] * self.ncols
        arr = self.to_array().T
        packed = np.packbits(arr, axis=1, bitorder="little")
        return [int.from_bytes(c.tobytes(), "little") for c in packed]

    def select_rows(self, idx: Iterable[int]) -> "BitMatrix":
        rows = tuple(self.rows[i] for i in idx)
        return BitMatrix(len(rows), self.ncols, rows)

    def hstack(self, other: "BitMatrix") -> "BitMatrix":
        if other.nrows != self.nrows:
            raise ValueError("row counts differ")
        rows = tuple(a | (b << self.ncols) for a, b in zip(self.rows, other.rows))
        return BitMatrix(self.nrows, self.ncols + other.ncols, rows)

    def vstack(self, other: "BitMatrix") -> "BitMatrix":
        if other.ncols != self.ncols:
            raise ValueError("column counts differ")
        return BitMatrix(self.nrows + other.nrows, self.ncols, self.rows + other.rows)

    def apply(self, v: int) -> int:
        """Matrix-vector product ``M @ v`` with ``v`` over the columns."""
        out = 0
        for i, r in enumerate(self.rows):
            if (r & v).bit_count() & 1:
                out |= 1 << i
        return out

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        return gf2_product(self, other)


def gf2_product(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.ncols != b.nrows:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    out = []
    brows = b.rows
    for r in a.rows:
        acc = 0
        while r:
            low = r & -r
            acc ^= brows[low.bit_length() - 1]
            r ^= low
        out.append(acc)
    return BitMatrix(a.nrows, b.ncols, tuple(out))


def rank_of_rows(rows: Iterable[int]) -> int:
    pivots: dict[int, int] = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            p = pivots.get(top)
            if p is None:
                pivots[top] = r
                break
            r ^= p
    return len(pivots)


def rank(m: BitMatrix) -> int:
    return rank_of_rows(m.rows)


class _Reduction(NamedTuple):
    # pivot_rows[i] is the row index where reduced column i has its lowest 1
    pivot_rows: list[int]
    cols: list[int]
    track: list[int]


def _reduce_columns(m: BitMatrix) -> _Reduction:
    """Gauss-Jordan on columns; pivots at the lowest available row index."""
    cols = m.columns()
    track = [1 << j for j in range(m.ncols)]
    pivot_rows: list[int] = []
    done = 0
    for r in range(m.nrows):
        if done == len(cols):
            break
        bit = 1 << r
        hit = next((j for j in range(done, len(cols)) if cols[j] & bit), None)
        if hit is None:
            continue
        cols[done], cols[hit] = cols[hit], cols[done]
        track[done], track[hit] = track[hit], track[done]
        pc, pt = cols[done], track[done]
        for j in range(len(cols)):
            if j != done and cols[j] & bit:
                cols[j] ^= pc
                track[j] ^= pt
        pivot_rows.append(r)
        done += 1
    return _Reduction(pivot_rows, cols, track)


def column_echelon(m: BitMatrix) -> tuple[BitMatrix, BitMatrix]:
    """Reduced column-echelon form with zero columns deleted.

    Returns ``(R, A)`` with ``A`` invertible and ``M @ A == [R | 0]``.  The
    pivot rows of ``R`` are strictly increasing and are the earliest
    possible, so ``R`` depends only on the column space of ``M``.
    """
    red = _reduce_columns(m)
    r = len(red.pivot_rows)
    reduced = BitMatrix.from_columns(red.cols[:r], m.nrows)
    a = BitMatrix.from_columns(red.track, m.ncols)
    return reduced, a


def canonical_form(m: BitMatrix) -> BitMatrix:
    return column_echelon(m)[0]


def solve(m: BitMatrix, b: int) -> Optional[int]:
    """Some ``x`` with ``M @ x == b``, or None if ``b`` is outside the column space."""
    if b >> m.nrows:
        raise ValueError("b is longer than the row count")
    red = _reduce_columns(m)
    x = 0
    for i, r in enumerate(red.pivot_rows):
        if (b >> r) & 1:
            b ^= red.cols[i]
            x ^= red.track[i]
    return x if b == 0 else None


def kernel(m: BitMatrix) -> list[int]:
    """Basis of ``{x : M @ x == 0}``."""
    red = _reduce_columns(m)
    return red.track[len(red.pivot_rows):]


def inverse(m: BitMatrix) -> BitMatrix:
    if m.nrows != m.ncols:
        raise ValueError("matrix is not square")
    red = _reduce_columns(m)
    if len(red.pivot_rows) != m.ncols:
        raise ValueError("matrix is singular")
    # reduced columns are the unit vectors, so M @ A == I
    return BitMatrix.from_columns(red.track, m.ncols)


class RowOp(NamedTuple):
    """Elementary row operation: ``add`` does row[dst] ^= row[src]."""

    kind: str
    src: int
    dst: int


def transvection_synthesis(m: BitMatrix) -> list[RowOp]:
    """Row additions and swaps which, replayed on the identity, rebuild ``M``.

    Gauss-Jordan elimination writes ``E_k ... E_1 M = I``; each elementary
    operation is an involution, so ``M = E_1 ... E_k`` and the replay order
    is the elimination order reversed.
    """
    if m.nrows != m.ncols:
        raise ValueError("matrix is not square")
    n = m.nrows
    rows = list(m.rows)
    ops: list[RowOp] = []
    for c in range(n):
        bit = 1 << c
        piv = next((r for r in range(c, n) if rows[r] & bit), None)
        if piv is None:
            raise ValueError("matrix is singular")
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            ops.append(RowOp("swap", piv, c))
        for r in range(n):
            if r != c and rows[r] & bit:
                rows[r] ^= rows[c]
                ops.append(RowOp("add", c, r))
    ops.reverse()
    return ops


def replay_ops(ops: Sequence[RowOp], n: int) -> BitMatrix:
    rows = [1 << i for i in range(n)]
    for op in ops:
        if op.kind == "add":
            rows[op.dst] ^= rows[op.src]
        elif op.kind == "swap":
            rows[op.src], rows[op.dst] = rows[op.dst], rows[op.src]
        else:
            raise ValueError(f"unknown op {op.kind!r}")
    return BitMatrix(n, n, tuple(rows))


def random_bitmatrix(nrows: int, ncols: int, seed: int, label: str = "bitmatrix") -> BitMatrix:
    rng = make_rng(seed, label)
    return BitMatrix.from_array(rng.integers(0, 2, size=(nrows, ncols), dtype=np.uint8))


def random_invertible(n: int, rng: np.random.Generator) -> BitMatrix:
    while True:
        m = BitMatrix.from_array(rng.integers(0, 2, size=(n, n), dtype=np.uint8))
        if rank(m) == n:
            return m
