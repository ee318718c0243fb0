import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import bitmatrices, invertibles
from oracles import matmul_mod2, rank_mod2

from iqpkit.codes import qr_code
from iqpkit.f2la import (
    BitMatrix,
    RowOp,
    bitstring,
    canonical_form,
    column_echelon,
    gf2_product,
    inverse,
    kernel,
    parse_bitstring,
    random_bitmatrix,
    random_invertible,
    rank,
    replay_ops,
    solve,
    transvection_synthesis,
)
from iqpkit.rng import make_rng, parse_seed


def test_rank_examples():
    assert rank(BitMatrix.identity(4)) == 4
    assert rank(BitMatrix.zeros(3, 5)) == 0
    assert rank(qr_code(7).generator) == 4


def test_bitstring_roundtrip():
    assert bitstring(0b110, 4) == "0110"
    assert parse_bitstring("0110") == 0b110
    with pytest.raises(ValueError):
        parse_bitstring("01a")


def test_array_roundtrip_wide():
    m = random_bitmatrix(5, 130, seed=3)
    assert BitMatrix.from_array(m.to_array()) == m
    assert m.T.T == m


@given(bitmatrices())
def test_rank_matches_oracle_and_transpose(m):
    assert rank(m) == rank_mod2(m.to_array()) == rank(m.T)
    assert rank(m) <= min(m.nrows, m.ncols)


def test_column_echelon_identity():
    r, a = column_echelon(BitMatrix.identity(5))
    assert r == BitMatrix.identity(5)
    assert a == BitMatrix.identity(5)


def test_column_echelon_drops_duplicate_column():
    m = BitMatrix.from_columns([0b101, 0b011, 0b101], 3)
    r, _ = column_echelon(m)
    assert r.ncols == rank(m) == 2


@pytest.mark.parametrize("seed", range(5))
def test_column_echelon_random_14x8(seed):
    m = random_bitmatrix(14, 8, seed)
    r, a = column_echelon(m)
    assert rank(a) == 8
    padded = r.hstack(BitMatrix.zeros(14, 8 - r.ncols))
    assert gf2_product(m, a) == padded
    assert rank(r) == rank(m) == r.ncols


def _is_canonical(r: BitMatrix) -> bool:
    cols = r.columns()
    pivots = [(c & -c).bit_length() - 1 for c in cols]
    if pivots != sorted(set(pivots)):
        return False
    return all(sum((cols[j] >> p) & 1 for j in range(len(cols))) == 1 for p in pivots)


@given(bitmatrices(), st.integers(0, 2**32))
def test_canonical_form_invariants(m, seed):
    r, a = column_echelon(m)
    assert _is_canonical(r)
    assert canonical_form(r) == r
    scramble = random_invertible(m.ncols, make_rng(seed, "scramble")) if m.ncols else BitMatrix.identity(0)
    assert canonical_form(gf2_product(m, scramble)) == r
    assert gf2_product(m, a) == r.hstack(BitMatrix.zeros(m.nrows, m.ncols - r.ncols))


@given(bitmatrices(max_rows=8, max_cols=8), st.integers(0, 255))
def test_solve_matches_brute_force(m, b):
    b &= (1 << m.nrows) - 1
    reachable = {m.apply(x) for x in range(1 << m.ncols)}
    x = solve(m, b)
    assert (x is not None) == (b in reachable)
    if x is not None:
        assert m.apply(x) == b


def test_solve_examples():
    assert solve(BitMatrix.identity(6), 0b101101) == 0b101101
    assert solve(BitMatrix.zeros(3, 3), 0b010) is None
    with pytest.raises(ValueError):
        solve(BitMatrix.identity(2), 0b100)


@given(bitmatrices(max_rows=10, max_cols=10))
def test_kernel_is_null_space(m):
    ker = kernel(m)
    assert len(ker) == m.ncols - rank(m)
    assert all(m.apply(v) == 0 for v in ker)
    assert rank(BitMatrix.from_rows(ker, m.ncols)) == len(ker)


def test_product_identities_and_mismatch():
    a = random_bitmatrix(6, 9, seed=1)
    assert gf2_product(a, BitMatrix.identity(9)) == a
    assert gf2_product(BitMatrix.identity(6), a) == a
    with pytest.raises(ValueError):
        gf2_product(a, a)


@pytest.mark.parametrize("seed", range(10))
def test_product_associative_and_matches_oracle(seed):
    a, b, c = (random_bitmatrix(8, 8, seed, label=lbl) for lbl in "abc")
    assert gf2_product(gf2_product(a, b), c) == gf2_product(a, gf2_product(b, c))
    assert np.array_equal(gf2_product(a, b).to_array(), matmul_mod2(a.to_array(), b.to_array()))


def test_transvection_examples():
    assert transvection_synthesis(BitMatrix.identity(5)) == []
    t = BitMatrix(3, 3, (0b001, 0b011, 0b100))
    ops = transvection_synthesis(t)
    assert ops == [RowOp("add", 0, 1)]
    assert replay_ops(ops, 3) == t
    with pytest.raises(ValueError):
        transvection_synthesis(BitMatrix.zeros(2, 2))


def test_transvection_replay_many():
    rng = make_rng(0xBEEF, "transvection-sweep")
    for i in range(1000):
        n = 1 + i % 16
        m = random_invertible(n, rng)
        ops = transvection_synthesis(m)
        assert replay_ops(ops, n) == m
        assert len(ops) <= n * n + n


@given(invertibles())
def test_inverse(m):
    assert gf2_product(m, inverse(m)) == BitMatrix.identity(m.nrows)


def test_random_bitmatrix_determinism_and_frequency():
    assert random_bitmatrix(7, 9, seed=42) == random_bitmatrix(7, 9, seed=42)
    assert random_bitmatrix(0, 0, seed=1) == BitMatrix.zeros(0, 0)
    draws = random_bitmatrix(10_000, 1, seed=5)
    assert abs(sum(draws.rows) / 10_000 - 0.5) < 0.02


def test_rng_streams():
    a = make_rng(1, "x").integers(0, 2**63, size=4)
    assert np.array_equal(a, make_rng(1, "x").integers(0, 2**63, size=4))
    assert not np.array_equal(a, make_rng(1, "y").integers(0, 2**63, size=4))
    assert parse_seed("0x1F") == parse_seed("1f") == 31
    with pytest.raises(ValueError):
        parse_seed("1" * 17)


def test_solve_exhaustive_small():
    # every 3x3 matrix against every right-hand side
    for rows in itertools.product(range(8), repeat=3):
        m = BitMatrix.from_rows(rows, 3)
        images = {m.apply(x) for x in range(8)}
        for b in range(8):
            assert (solve(m, b) is not None) == (b in images)
