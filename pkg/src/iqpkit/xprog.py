"""X-programs: exact output distributions, sampling, and directional bias.

An X-program is a k-by-n binary matrix (one row per Hamiltonian term) with a
constant action ``theta``.  Its output is a computational-basis measurement
of ``exp(i H_P)|0^n>`` where ``H_P = theta * sum_p prod_{j: p_j=1} X_j``.

In the Hadamard frame the unitary is diagonal with phase
``exp(i theta F(a))``, ``F(a) = sum_p (-1)^{p.a}``, and ``F`` itself is the
Walsh-Hadamard transform of the histogram of rows.  So the whole
distribution costs two in-place transforms of length ``2^n``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .codes import LinearCode, code_bias
from .f2la import BitMatrix, dot
from .rng import make_rng

MAX_DIST_QUBITS = 26
MAX_GRAPH_QUBITS = 22
SAMPLE_BLOCK = 1 << 16


class SimulationBoundError(ValueError):
    """Raised when an exact simulation would exceed the amplitude-array bound."""


@dataclass(frozen=True)
class XProgram:
    matrix: BitMatrix
    theta: float = math.pi / 8

    @property
    def n(self) -> int:
        return self.matrix.ncols

    @property
    def k(self) -> int:
        return self.matrix.nrows


@dataclass(frozen=True)
class Distribution:
    n: int
    probs: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.probs.shape != (1 << self.n,):
            raise ValueError("probability array has the wrong length")


def fwht(a: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard transform, in place on a length-2^n array."""
    size = a.shape[0]
    if size & (size - 1):
        raise ValueError("length must be a power of two")
    h = 1
    while h < size:
        v = a.reshape(-1, 2, h)
        lo = v[:, 0, :].copy()
        v[:, 0, :] += v[:, 1, :]
        v[:, 1, :] = lo - v[:, 1, :]
        h *= 2
    return a


def row_histogram(m: BitMatrix) -> np.ndarray:
    rows = np.array(m.rows, dtype=np.int64) if m.nrows else np.zeros(0, dtype=np.int64)
    return np.bincount(rows, minlength=1 << m.ncols).astype(np.int64)


def action_signs(m: BitMatrix) -> np.ndarray:
    """``F(a) = sum_p (-1)^{p.a}`` for every ``a``, equal to ``k - 2 wt(P a)``."""
    return fwht(row_histogram(m))


def xp_distribution(prog: XProgram) -> Distribution:
    n = prog.n
    if n > MAX_DIST_QUBITS:
        raise SimulationBoundError(f"simulation bound exceeded: n={n} > {MAX_DIST_QUBITS}")
    amp = np.exp(1j * prog.theta * action_signs(prog.matrix).astype(np.float64))
    fwht(amp)
    probs = np.abs(amp) ** 2
    probs /= probs.sum()
    return Distribution(n, probs)


def _draw_block(cdf: np.ndarray, seed: int, block: int, size: int, label: str) -> np.ndarray:
    u = make_rng(seed, f"{label}/{block}").random(size) * cdf[-1]
    return np.minimum(np.searchsorted(cdf, u, side="right"), cdf.shape[0] - 1)


def sample_distribution(dist: Distribution, count: int, seed: int, workers: int = 1,
                        label: str = "xp_sample") -> list[int]:
    """Inverse-CDF sampling in fixed-size blocks, one seeded stream per block.

    The block layout does not depend on ``workers``, so output is identical
    for any thread count.
    """
    cdf = np.cumsum(dist.probs)
    sizes = [min(SAMPLE_BLOCK, count - start) for start in range(0, count, SAMPLE_BLOCK)]
    jobs = [(cdf, seed, b, size, label) for b, size in enumerate(sizes)]
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda j: _draw_block(*j), jobs))
    else:
        parts = [_draw_block(*j) for j in jobs]
    return [int(x) for part in parts for x in part]


def xp_sample(prog: XProgram, count: int, seed: int, workers: int = 1) -> list[int]:
    if count == 0:
        return []
    return sample_distribution(xp_distribution(prog), count, seed, workers)


def submatrix_s(prog_or_matrix, s: int) -> BitMatrix:
    """Rows ``p`` with ``p.s = 1``, order preserved."""
    m = prog_or_matrix.matrix if isinstance(prog_or_matrix, XProgram) else prog_or_matrix
    return BitMatrix.from_rows([p for p in m.rows if dot(p, s)], m.ncols)


def causal_rows(m: BitMatrix, s: int) -> list[int]:
    return [i for i, p in enumerate(m.rows) if dot(p, s)]


def xp_bias(prog: XProgram, s: int) -> float:
    """Pr(X.s = 0), read off the weight distribution of the code spanned by P_s."""
    return code_bias(LinearCode(submatrix_s(prog, s)), prog.theta)


def parity_mask(n: int, s: int) -> np.ndarray:
    """Boolean array over ``x in F_2^n`` marking ``x.s = 1``."""
    idx = np.arange(1 << n, dtype=np.int64)
    return (np.bitwise_count(idx & s) & 1).astype(bool)


def bias_from_distribution(dist: Distribution, s: int) -> float:
    return float(dist.probs[~parity_mask(dist.n, s)].sum())


def all_biases(dist: Distribution) -> np.ndarray:
    """Pr(X.s = 0) for every direction s at once: (1 + WHT(p)(s)) / 2."""
    return (1.0 + fwht(dist.probs.astype(np.float64).copy())) / 2.0


def collision_entropy(dist: Distribution) -> float:
    return float(-math.log2(np.sum(dist.probs ** 2)))


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


# graph-program emulation


@dataclass(frozen=True)
class GraphProgram:
    """Bipartite graph: primal vertices 0..n-1, ancilla vertex n+i for row i.

    Primal vertices are measured in the Hadamard basis; ancilla ``n+i`` is
    rotated by ``exp(i theta_i X)`` before a computational-basis measurement.
    """

    n_primal: int
    n_ancilla: int
    edges: tuple[tuple[int, int], ...]
    thetas: tuple[float, ...]

    @property
    def n_vertices(self) -> int:
        return self.n_primal + self.n_ancilla


def to_graph_program(prog: XProgram) -> GraphProgram:
    n = prog.n
    edges = tuple((j, n + i) for i, p in enumerate(prog.matrix.rows) for j in range(n) if (p >> j) & 1)
    return GraphProgram(n, prog.k, edges, (prog.theta,) * prog.k)


def apply_1q(state: np.ndarray, u: np.ndarray, qubit: int) -> np.ndarray:
    """Apply a 2x2 unitary to ``qubit`` (bit ``qubit`` of the basis index)."""
    view = state.reshape(-1, 2, 1 << qubit)
    return np.einsum("ab,ibj->iaj", u, view).reshape(-1)


HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def x_rotation(theta: float) -> np.ndarray:
    """exp(i theta X)."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, 1j * s], [1j * s, c]], dtype=complex)


def graph_program_distribution(g: GraphProgram) -> Distribution:
    nv = g.n_vertices
    if nv > MAX_GRAPH_QUBITS:
        raise SimulationBoundError(f"simulation bound exceeded: {nv} > {MAX_GRAPH_QUBITS} vertices")
    size = 1 << nv
    idx = np.arange(size, dtype=np.int64)
    odd = np.zeros(size, dtype=np.int64)
    for u, v in g.edges:
        odd ^= (idx >> u) & (idx >> v) & 1
    state = (1 - 2 * odd).astype(complex) / math.sqrt(size)
    for j in range(g.n_primal):
        state = apply_1q(state, HADAMARD, j)
    for i, theta in enumerate(g.thetas):
        state = apply_1q(state, x_rotation(theta), g.n_primal + i)
    probs = np.abs(state) ** 2
    return Distribution(nv, probs / probs.sum())


def emulate(prog: XProgram) -> Distribution:
    """Run the graph program, XOR each ancilla bit into its primal neighbours, drop ancillas."""
    n, k = prog.n, prog.k
    joint = graph_program_distribution(to_graph_program(prog))
    idx = np.arange(1 << (n + k), dtype=np.int64)
    out = idx & ((1 << n) - 1)
    for i, p in enumerate(prog.matrix.rows):
        out ^= ((idx >> (n + i)) & 1) * p
    probs = np.bincount(out, weights=joint.probs, minlength=1 << n)
    return Distribution(n, probs)


def hadamard_gadget_check(psi) -> float:
    """Fidelity between H|psi> and the post-selected gadget output.

    Basis index is ``2*ancilla + primal``.  The primal starts in ``psi``, the
    ancilla in |0>; H on the ancilla, swap, controlled-Z, H on the ancilla,
    then post-select the ancilla on |0>.
    """
    psi = np.asarray(psi, dtype=complex)
    eye = np.eye(2)
    h_anc = np.kron(HADAMARD, eye)
    swap = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
    cz = np.diag([1, 1, 1, -1]).astype(complex)
    state = np.kron(np.array([1, 0], dtype=complex), psi)
    state = h_anc @ cz @ swap @ h_anc @ state
    kept = state[:2]
    norm = np.linalg.norm(kept)
    if not norm > 0:
        raise ValueError("post-selection has probability zero")
    target = HADAMARD @ psi
    return float(abs(np.vdot(target, kept / norm)) ** 2)
