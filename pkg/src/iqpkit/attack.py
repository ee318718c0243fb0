"""Classical cheating strategy based on second derivatives of the phase function.

At theta = pi/8 the phase exponent is ``f(a) = sum_p (-1)^{p.a}`` mod 16.
Its second derivative in directions ``d, e`` is ``4 * sum_{p in P_d & P_e}
(-1)^{p.a}``, a linear function of ``a`` whose coefficient vector
``y = sum_{p in P_d & P_e} p`` is what the sampler emits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codes import LinearCode, code_bias, gram_rank
from .f2la import BitMatrix, dot
from .rng import make_rng
from .xprog import XProgram, submatrix_s

Y_BLOCK = 4096


def _matrix(prog) -> BitMatrix:
    return prog.matrix if isinstance(prog, XProgram) else prog


def f_eval(prog, a: int) -> int:
    m = _matrix(prog)
    return sum(1 - 2 * dot(p, a) for p in m.rows) % 16


def second_derivative(prog, d: int, e: int, a: int) -> int:
    """f(a) - f(a+d) - f(a+e) + f(a+d+e) mod 16."""
    return (f_eval(prog, a) - f_eval(prog, a ^ d) - f_eval(prog, a ^ e)
            + f_eval(prog, a ^ d ^ e)) % 16


def second_derivative_closed(prog, d: int, e: int, a: int) -> int:
    m = _matrix(prog)
    return 4 * sum(1 - 2 * dot(p, a) for p in m.rows if dot(p, d) and dot(p, e)) % 16


def y_vector(prog, d: int, e: int) -> int:
    out = 0
    for p in _matrix(prog).rows:
        if dot(p, d) and dot(p, e):
            out ^= p
    return out


def _y_block(parr: np.ndarray, seed: int, block: int, size: int) -> list[int]:
    k, n = parr.shape
    rng = make_rng(seed, f"y_sample/{block}")
    d = rng.integers(0, 2, size=(size, n), dtype=np.uint8)
    e = rng.integers(0, 2, size=(size, n), dtype=np.uint8)
    if k == 0 or n == 0:
        return [0] * size
    pf = parr.astype(np.float32)
    # float32 matmuls are exact here: every entry is an integer < 2^24
    both = (np.rint(d.astype(np.float32) @ pf.T).astype(np.int64) & 1) & (
        np.rint(e.astype(np.float32) @ pf.T).astype(np.int64) & 1)
    y = np.rint(both.astype(np.float32) @ pf).astype(np.int64) & 1
    return list(BitMatrix.from_array(y.astype(np.uint8)).rows)


def y_sample(prog, count: int, seed: int) -> list[int]:
    """Draw d, e uniformly; emit the sum of rows p with p.d = 1 and p.e = 1."""
    m = _matrix(prog)
    if m.nrows >= 1 << 24:
        raise ValueError("too many rows for exact float accumulation")
    parr = m.to_array()
    out: list[int] = []
    for b, start in enumerate(range(0, count, Y_BLOCK)):
        out += _y_block(parr, seed, b, min(Y_BLOCK, count - start))
    return out


def y_bias_exact(prog, s: int) -> float:
    """1/2 (1 + 2^-rank(P_s^T P_s))."""
    return 0.5 * (1.0 + 2.0 ** (-gram_rank(submatrix_s(_matrix(prog), s))))


@dataclass(frozen=True)
class UnitboundReport:
    quantum: float
    classical: float
    holds: bool


def unitbound_check(prog, s: int, tol: float = 1e-12) -> UnitboundReport:
    """Quantum bias 1 at pi/8 forces classical bias 1."""
    m = _matrix(prog)
    quantum = code_bias(LinearCode(submatrix_s(m, s)), np.pi / 8)
    classical = y_bias_exact(m, s)
    holds = abs(quantum - 1.0) > tol or abs(classical - 1.0) <= tol
    return UnitboundReport(quantum, classical, holds)
