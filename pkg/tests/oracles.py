"""Slow, independent reference implementations used only by the tests."""

from __future__ import annotations

import itertools
import math

import numpy as np

X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
S = np.diag([1, 1j])


def rank_mod2(arr) -> int:
    a = np.array(arr, dtype=np.uint8) % 2
    if a.size == 0:
        return 0
    r = 0
    rows, cols = a.shape
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i, c]), None)
        if piv is None:
            continue
        a[[r, piv]] = a[[piv, r]]
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] ^= a[r]
        r += 1
    return r


def matmul_mod2(a, b) -> np.ndarray:
    return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)) % 2


def single(op: np.ndarray, q: int, n: int) -> np.ndarray:
    """Operator on qubit q of n; basis index bit j is qubit j."""
    out = np.eye(1, dtype=complex)
    for j in range(n):
        out = np.kron(op if j == q else np.eye(2), out)
    return out


def x_string(mask: int, n: int) -> np.ndarray:
    out = np.eye(1 << n, dtype=complex)
    for j in range(n):
        if (mask >> j) & 1:
            out = single(X, j, n) @ out
    return out


def dense_xprog_probs(rows, n: int, theta: float) -> np.ndarray:
    """|<x| exp(i theta sum_p X^p) |0>|^2 by diagonalising the Hamiltonian."""
    ham = np.zeros((1 << n, 1 << n), dtype=complex)
    for p in rows:
        ham += x_string(p, n)
    w, v = np.linalg.eigh(ham)
    u = v @ np.diag(np.exp(1j * theta * w)) @ v.conj().T
    return np.abs(u[:, 0]) ** 2


def gate_matrix(name: str, qubits, n: int) -> np.ndarray:
    if name in ("H", "S", "X", "Z"):
        return single({"H": H, "S": S, "X": X, "Z": Z}[name], qubits[0], n)
    d = 1 << n
    m = np.zeros((d, d), dtype=complex)
    for i in range(d):
        if name == "CNOT":
            c, t = qubits
            m[i ^ (((i >> c) & 1) << t), i] = 1
        else:
            a, b = qubits
            m[i, i] = -1 if (i >> a) & 1 and (i >> b) & 1 else 1
    return m


def circuit_unitary(c) -> np.ndarray:
    u = np.eye(1 << c.n, dtype=complex)
    for g in c.gates:
        u = gate_matrix(g.name, g.qubits, c.n) @ u
    return u


def all_codewords(gen_columns, length: int) -> list[int]:
    words = set()
    for coeffs in itertools.product((0, 1), repeat=len(gen_columns)):
        w = 0
        for c, col in zip(coeffs, gen_columns):
            if c:
                w ^= col
        words.add(w)
    return sorted(words)


def brute_weight_distribution(gen_columns, length: int) -> list[int]:
    counts = [0] * (length + 1)
    for w in all_codewords(gen_columns, length):
        counts[bin(w).count("1")] += 1
    return counts


def brute_bias(rows, n: int, theta: float, s: int) -> float:
    probs = dense_xprog_probs(rows, n, theta)
    return float(sum(p for x, p in enumerate(probs) if bin(x & s).count("1") % 2 == 0))
