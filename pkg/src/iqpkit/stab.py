"""Pauli operators, Clifford conjugation, stabilizer sampling, DQC1, graph clocks.

A Pauli operator is ``i^phase * X^x * Z^z`` with ``x`` and ``z`` bit masks
over qubits and ``phase`` in Z/4.  Y on a qubit is therefore ``phase += 1``
with both bits set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .f2la import BitMatrix, bits_of, gf2_product, kernel, solve
from .rng import make_rng
from .xprog import XProgram

_LABEL = {"I": (0, 0, 0), "X": (1, 0, 0), "Z": (0, 1, 0), "Y": (1, 1, 1)}


@dataclass(frozen=True)
class PauliOperator:
    n: int
    x: int
    z: int
    phase: int = 0

    def __post_init__(self):
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(n, 0, 0)

    @classmethod
    def single(cls, n: int, kind: str, qubit: int) -> "PauliOperator":
        a, b, ph = _LABEL[kind]
        return cls(n, a << qubit, b << qubit, ph)

    @classmethod
    def from_label(cls, label: str, sign: int = 1) -> "PauliOperator":
        """Character ``j`` of ``label`` acts on qubit ``j``; ``sign`` in {1,-1,1j,-1j}."""
        x = z = 0
        phase = {1: 0, 1j: 1, -1: 2, -1j: 3}[sign]
        for j, ch in enumerate(label):
            a, b, ph = _LABEL[ch]
            x |= a << j
            z |= b << j
            phase += ph
        return cls(len(label), x, z, phase)

    def label(self) -> str:
        chars = "IXZY"
        return "".join(chars[((self.x >> j) & 1) | (((self.z >> j) & 1) << 1)] for j in range(self.n))

    @property
    def sign(self) -> complex:
        """Coefficient in front of the product of Hermitian single-qubit factors."""
        ys = (self.x & self.z).bit_count()
        return (1, 1j, -1, -1j)[(self.phase - ys) % 4]

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        if other.n != self.n:
            raise ValueError("width mismatch")
        swap = 2 * (self.z & other.x).bit_count()
        return PauliOperator(self.n, self.x ^ other.x, self.z ^ other.z, self.phase + other.phase + swap)

    def commutes(self, other: "PauliOperator") -> bool:
        return ((self.x & other.z).bit_count() + (self.z & other.x).bit_count()) % 2 == 0

    def is_hermitian(self) -> bool:
        return (self.phase - (self.x & self.z).bit_count()) % 2 == 0

    def to_matrix(self) -> np.ndarray:
        """Dense matrix; basis index bit ``j`` is qubit ``j``."""
        xm = np.array([[0, 1], [1, 0]], dtype=complex)
        zm = np.array([[1, 0], [0, -1]], dtype=complex)
        out = np.eye(1, dtype=complex)
        for j in range(self.n):
            f = np.eye(2, dtype=complex)
            if (self.x >> j) & 1:
                f = f @ xm
            if (self.z >> j) & 1:
                f = f @ zm
            out = np.kron(f, out)
        return (1j ** self.phase) * out


class Gate(NamedTuple):
    name: str
    qubits: tuple[int, ...]


_ARITY = {"H": 1, "S": 1, "X": 1, "Z": 1, "CNOT": 2, "CZ": 2}


@dataclass(frozen=True)
class CliffordCircuit:
    """Gates listed in the order they are applied."""

    n: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        for g in self.gates:
            if g.name not in _ARITY or len(g.qubits) != _ARITY[g.name]:
                raise ValueError(f"malformed gate {g}")
            if any(not 0 <= q < self.n for q in g.qubits) or len(set(g.qubits)) != len(g.qubits):
                raise ValueError(f"bad qubit indices in {g}")

    def __add__(self, other: "CliffordCircuit") -> "CliffordCircuit":
        if other.n != self.n:
            raise ValueError("width mismatch")
        return CliffordCircuit(self.n, self.gates + other.gates)

    def inverse(self) -> "CliffordCircuit":
        out: list[Gate] = []
        for g in reversed(self.gates):
            # S is the only gate here that is not self-inverse; S^-1 = S^3
            out.extend([g] * (3 if g.name == "S" else 1))
        return CliffordCircuit(self.n, tuple(out))


def circuit(n: int, *gates: tuple) -> CliffordCircuit:
    return CliffordCircuit(n, tuple(Gate(g[0], tuple(g[1:])) for g in gates))


def conjugate_gate(g: Gate, p: PauliOperator) -> PauliOperator:
    """``g p g^dagger``."""
    x, z, ph = p.x, p.z, p.phase
    if g.name in ("H", "S", "X", "Z"):
        q = g.qubits[0]
        a, b = (x >> q) & 1, (z >> q) & 1
        if g.name == "H":
            x = (x & ~(1 << q)) | (b << q)
            z = (z & ~(1 << q)) | (a << q)
            ph += 2 * (a & b)
        elif g.name == "S":
            z ^= a << q
            ph += a
        elif g.name == "X":
            ph += 2 * b
        else:
            ph += 2 * a
    elif g.name == "CNOT":
        c, t = g.qubits
        x ^= ((x >> c) & 1) << t
        z ^= ((z >> t) & 1) << c
    else:
        a, b = g.qubits
        xa, xb = (x >> a) & 1, (x >> b) & 1
        z ^= (xb << a) | (xa << b)
        ph += 2 * (xa & xb)
    return PauliOperator(p.n, x, z, ph)


def conjugate(c: CliffordCircuit, p: PauliOperator) -> PauliOperator:
    if c.n != p.n:
        raise ValueError("width mismatch")
    for g in c.gates:
        p = conjugate_gate(g, p)
    return p


# stabilizer states


@dataclass
class StabilizerState:
    n: int
    generators: list[PauliOperator] = field(default_factory=list)

    @classmethod
    def zero(cls, n: int) -> "StabilizerState":
        return cls(n, [PauliOperator.single(n, "Z", j) for j in range(n)])

    def apply_circuit(self, c: CliffordCircuit) -> None:
        self.generators = [conjugate(c, g) for g in self.generators]

    def apply_x_rotation(self, mask: int, quarter_turn: int) -> None:
        """Evolve by ``exp(i * quarter_turn * pi/4 * X^mask)`` with ``quarter_turn`` = +-1.

        A generator commuting with ``X^mask`` is untouched; an anticommuting
        one ``g`` becomes ``exp(i pi/2 * X^mask) g = (+-i) X^mask g``.
        """
        xp = PauliOperator(self.n, mask, 0, 1 if quarter_turn > 0 else 3)
        self.generators = [g if g.commutes(xp) else xp * g for g in self.generators]

    def z_constraints(self) -> tuple[list[int], int]:
        """Rows ``z_i`` and right-hand side bits ``b`` with ``z_i . m = b_i`` on the support.

        Reduces the generators so those with an X part are in echelon form on
        it; the rest are pure Z-type and fix parities of the outcome.
        """
        gens = list(self.generators)
        used = 0
        while True:
            piv = next((i for i in range(used, len(gens)) if gens[i].x), None)
            if piv is None:
                break
            gens[used], gens[piv] = gens[piv], gens[used]
            pg = gens[used]
            top = pg.x.bit_length() - 1
            for i in range(len(gens)):
                if i != used and (gens[i].x >> top) & 1:
                    gens[i] = pg * gens[i]
            used += 1
        rows, rhs = [], 0
        for g in gens[used:]:
            if g.phase % 2:
                raise AssertionError("non-Hermitian stabilizer element")
            if g.phase == 2:
                rhs |= 1 << len(rows)
            rows.append(g.z)
        return rows, rhs

    def sample(self, count: int, rng: np.random.Generator) -> list[int]:
        """Computational-basis samples: uniform over the affine solution space."""
        rows, rhs = self.z_constraints()
        cons = BitMatrix.from_rows(rows, self.n)
        base = solve(cons, rhs)
        if base is None:
            raise AssertionError("inconsistent stabilizer constraints")
        free = kernel(cons)
        coeff = rng.integers(0, 2, size=(count, len(free)), dtype=np.int64)
        if self.n < 63:
            acc = np.full(count, base, dtype=np.int64)
            for j, v in enumerate(free):
                acc ^= coeff[:, j] * v
            return [int(v) for v in acc]
        out = [base] * count
        for j, v in enumerate(free):
            out = [o ^ v if c else o for o, c in zip(out, coeff[:, j])]
        return out


def clifford_quarter_turns(theta: float, tol: float = 1e-12) -> int:
    """+1 if theta = pi/4 mod pi, -1 if theta = -pi/4 mod pi, else error."""
    r = math.remainder(theta - math.pi / 4, math.pi)
    if abs(r) <= tol:
        return 1
    r = math.remainder(theta + math.pi / 4, math.pi)
    if abs(r) <= tol:
        return -1
    raise ValueError(f"theta={theta} is not an odd multiple of pi/4")


def pi4_xprogram_sample(prog: XProgram, count: int, seed: int) -> list[int]:
    turn = clifford_quarter_turns(prog.theta)
    state = StabilizerState.zero(prog.n)
    for p in prog.matrix.rows:
        if p:
            state.apply_x_rotation(p, turn)
    return state.sample(count, make_rng(seed, "pi4_sample"))


# one clean qubit


def evaluate_cnots(cnots: Sequence[tuple[int, int]], x: int) -> int:
    """Classical CNOT circuit on data bits; qubit ``j`` (1-based) is bit ``j-1``."""
    for c, t in cnots:
        if (x >> (c - 1)) & 1:
            x ^= 1 << (t - 1)
    return x


def dqc1_build(cnots: Sequence[tuple[int, int]], x: int, width: int) -> CliffordCircuit:
    """W(x) = U(x)^dagger X_2 U(x) with U(x) = Q_B C V(x) Q_B.

    Qubit 0 is the pure qubit, qubits ``1..width`` carry the data; V(x) is a
    CNOT from the pure qubit onto data qubit ``j`` for each set bit ``x_j``.
    """
    w = width + 1
    if width < 1:
        raise ValueError("need at least one data qubit")
    if x >> width:
        raise ValueError("input longer than the data register")
    for c, t in cnots:
        if not (1 <= c <= width and 1 <= t <= width) or c == t:
            raise ValueError(f"malformed CNOT ({c}, {t})")
    hadamards = tuple(Gate("H", (q,)) for q in range(w))
    v = tuple(Gate("CNOT", (0, j)) for j in range(1, w) if (x >> (j - 1)) & 1)
    body = tuple(Gate("CNOT", (c, t)) for c, t in cnots)
    u = CliffordCircuit(w, hadamards + v + body + hadamards)
    return u + CliffordCircuit(w, (Gate("X", (1,)),)) + u.inverse()


def dqc1_bias(wc: CliffordCircuit) -> int:
    """Read the pure-qubit bias off W Z_1 W^dagger: +-1 if it is +-Z_1, else 0."""
    out = conjugate(wc, PauliOperator.single(wc.n, "Z", 0))
    if out.x == 0 and out.z == 1:
        return {0: 1, 2: -1}.get(out.phase, 0)
    return 0


def parse_cnot_file(text: str) -> tuple[int, list[tuple[int, int]]]:
    """``width <i>`` then ``cnot <c> <t>`` lines; ``#`` starts a comment."""
    width = None
    cnots: list[tuple[int, int]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "width" and len(parts) == 2:
            width = int(parts[1])
        elif parts[0] == "cnot" and len(parts) == 3:
            cnots.append((int(parts[1]), int(parts[2])))
        else:
            raise ValueError(f"cannot parse circuit line {raw!r}")
    if width is None:
        raise ValueError("circuit file has no width line")
    return width, cnots


# graph clocks


def line_adjacency(n_vertices: int) -> BitMatrix:
    rows = [0] * n_vertices
    for i in range(n_vertices - 1):
        rows[i] |= 1 << (i + 1)
        rows[i + 1] |= 1 << i
    return BitMatrix(n_vertices, n_vertices, tuple(rows))


def _check_adjacency(a: BitMatrix) -> None:
    if a.nrows != a.ncols or a != a.T or any((r >> i) & 1 for i, r in enumerate(a.rows)):
        raise ValueError("adjacency must be symmetric with zero diagonal")


def block_matrix(tl: BitMatrix, tr: BitMatrix, bl: BitMatrix, br: BitMatrix) -> BitMatrix:
    return tl.hstack(tr).vstack(bl.hstack(br))


def clock_matrix(a: BitMatrix) -> BitMatrix:
    """Action of one clock tick on Pauli masks ``(x; z)``: [[0, I], [I, A]]."""
    _check_adjacency(a)
    n = a.nrows
    return block_matrix(BitMatrix.zeros(n, n), BitMatrix.identity(n), BitMatrix.identity(n), a)


def clock_blocks(a: BitMatrix, k: int) -> tuple[BitMatrix, BitMatrix, BitMatrix]:
    """(S_{k-2}, S_{k-1}, S_k) from S_k = S_{k-2} + A S_{k-1}."""
    if k < 0:
        raise ValueError("k must be non-negative")
    n = a.nrows
    prev2, prev1, cur = BitMatrix.identity(n), BitMatrix.zeros(n, n), BitMatrix.identity(n)
    for _ in range(k):
        nxt_rows = tuple(u ^ v for u, v in zip(prev1.rows, gf2_product(a, cur).rows))
        prev2, prev1, cur = prev1, cur, BitMatrix(n, n, nxt_rows)
    return prev2, prev1, cur


def clock_power(a: BitMatrix, k: int) -> BitMatrix:
    _check_adjacency(a)
    s2, s1, s0 = clock_blocks(a, k)
    return block_matrix(s2, s1, s1, s0)


def reversal_matrix(n: int) -> BitMatrix:
    return BitMatrix(n, n, tuple(1 << (n - 1 - i) for i in range(n)))


def clock_period(a: BitMatrix, limit: int = 10_000) -> int | None:
    """Smallest k >= 1 with M^k = I, or None within ``limit`` ticks."""
    _check_adjacency(a)
    n = a.nrows
    eye, zero = BitMatrix.identity(n), BitMatrix.zeros(n, n)
    prev1, cur = zero, eye
    for k in range(1, limit + 1):
        nxt = BitMatrix(n, n, tuple(u ^ v for u, v in zip(prev1.rows, gf2_product(a, cur).rows)))
        prev1, cur = cur, nxt
        # M^k = [[S_{k-2}, S_{k-1}], [S_{k-1}, S_k]]; S_{k-1}=0 and S_k=I force S_{k-2}=I
        if prev1 == zero and cur == eye:
            return k
    return None


def reverses_at(a: BitMatrix, k: int) -> bool:
    r = reversal_matrix(a.nrows)
    s2, s1, s0 = clock_blocks(a, k)
    return s2 == r and s0 == r and s1 == BitMatrix.zeros(a.nrows, a.nrows)


def clock_circuit(a: BitMatrix) -> CliffordCircuit:
    """One tick: Hadamard on every vertex, then controlled-Z on every edge."""
    _check_adjacency(a)
    n = a.nrows
    gates = [Gate("H", (j,)) for j in range(n)]
    gates += [Gate("CZ", (i, j)) for i in range(n) for j in bits_of(a.rows[i]) if j > i]
    return CliffordCircuit(n, tuple(gates))


def pauli_vector(p: PauliOperator) -> int:
    return p.x | (p.z << p.n)


def tick(a: BitMatrix, p: PauliOperator, ticks: int = 1) -> PauliOperator:
    c = clock_circuit(a)
    for _ in range(ticks):
        p = conjugate(c, p)
    return p


def logical_encoding(n: int) -> list[tuple[PauliOperator, PauliOperator]]:
    """Pairs G^{3j} (X_0, Z_0) G^{-3j} for j = 0..2n+1 on a line of 3n+2 vertices."""
    big_n = 3 * n + 2
    a = line_adjacency(big_n)
    xb, zb = PauliOperator.single(big_n, "X", 0), PauliOperator.single(big_n, "Z", 0)
    pairs = []
    for _ in range(2 * n + 2):
        pairs.append((xb, zb))
        xb, zb = tick(a, xb, 3), tick(a, zb, 3)
    return pairs


def check_logical_pairs(pairs: Sequence[tuple[PauliOperator, PauliOperator]]) -> bool:
    """Anticommuting within each pair, commuting across pairs."""
    for i, (xi, zi) in enumerate(pairs):
        if xi.commutes(zi):
            return False
        for xj, zj in pairs[i + 1:]:
            if not all(u.commutes(v) for u in (xi, zi) for v in (xj, zj)):
                return False
    return True
