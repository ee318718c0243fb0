import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import bitmatrices, unit_vector
from oracles import brute_bias, dense_xprog_probs

from iqpkit.f2la import BitMatrix, gf2_product, inverse, random_bitmatrix, random_invertible
from iqpkit.rng import make_rng
from iqpkit.stab import pi4_xprogram_sample
from iqpkit.xprog import (
    Distribution,
    SimulationBoundError,
    XProgram,
    all_biases,
    bias_from_distribution,
    causal_rows,
    collision_entropy,
    emulate,
    fwht,
    graph_program_distribution,
    hadamard_gadget_check,
    sample_distribution,
    submatrix_s,
    to_graph_program,
    total_variation,
    xp_bias,
    xp_distribution,
    xp_sample,
)

PI8 = math.pi / 8


def point_mass(dist: Distribution) -> int | None:
    hits = np.flatnonzero(dist.probs > 1 - 1e-12)
    return int(hits[0]) if hits.size else None


def test_fwht_is_self_inverse_up_to_scale():
    a = np.arange(16, dtype=np.float64)
    b = fwht(fwht(a.copy()))
    assert np.allclose(b, 16 * a)
    with pytest.raises(ValueError):
        fwht(np.zeros(6))


def test_empty_program_is_point_mass():
    prog = XProgram(BitMatrix.zeros(0, 4))
    assert point_mass(xp_distribution(prog)) == 0
    assert xp_sample(prog, 20, seed=1) == [0] * 20


@pytest.mark.parametrize("seed", range(5))
def test_theta_pi_gives_zero(seed):
    m = random_bitmatrix(9, 6, seed)
    assert point_mass(xp_distribution(XProgram(m, math.pi))) == 0


@pytest.mark.parametrize("seed", range(5))
def test_theta_half_pi_gives_row_sum(seed):
    m = random_bitmatrix(9, 6, seed)
    row_sum = 0
    for r in m.rows:
        row_sum ^= r
    prog = XProgram(m, math.pi / 2)
    assert point_mass(xp_distribution(prog)) == row_sum
    assert set(xp_sample(prog, 50, seed)) == {row_sum}


@settings(max_examples=40)
@given(bitmatrices(max_rows=8, max_cols=6), st.sampled_from([PI8, math.pi / 5, 1.0, -0.3]))
def test_distribution_matches_dense_oracle(m, theta):
    dist = xp_distribution(XProgram(m, theta))
    assert abs(dist.probs.sum() - 1) < 1e-10
    assert np.all(dist.probs >= 0)
    assert np.allclose(dist.probs, dense_xprog_probs(m.rows, m.ncols, theta), atol=1e-10)


@given(bitmatrices(max_rows=10, max_cols=7), st.randoms(use_true_random=False))
def test_row_permutation_invariance(m, rnd):
    rows = list(m.rows)
    rnd.shuffle(rows)
    a = xp_distribution(XProgram(m)).probs
    b = xp_distribution(XProgram(BitMatrix.from_rows(rows, m.ncols))).probs
    assert np.array_equal(a, b)


def test_distribution_size_bound():
    with pytest.raises(SimulationBoundError):
        xp_distribution(XProgram(BitMatrix.zeros(1, 27)))


def test_single_qubit_bias_hand_value():
    dist = xp_distribution(XProgram(BitMatrix.from_rows([1], 1)))
    assert dist.probs == pytest.approx([math.cos(PI8) ** 2, math.sin(PI8) ** 2], abs=1e-15)


@settings(max_examples=60)
@given(bitmatrices(max_rows=14, max_cols=8), st.sampled_from([PI8, math.pi / 5, 1.0]))
def test_bias_formula_matches_distribution(m, theta):
    prog = XProgram(m, theta)
    dist = xp_distribution(prog)
    biases = all_biases(dist)
    for s in range(1 << m.ncols):
        assert abs(xp_bias(prog, s) - biases[s]) < 1e-9
    s = (1 << m.ncols) - 1
    assert abs(bias_from_distribution(dist, s) - biases[s]) < 1e-12


def test_bias_matches_dense_oracle():
    m = random_bitmatrix(7, 4, seed=11)
    for s in range(16):
        assert abs(xp_bias(XProgram(m), s) - brute_bias(m.rows, 4, PI8, s)) < 1e-9


def test_bias_trivial_directions():
    m = random_bitmatrix(6, 5, seed=2)
    assert xp_bias(XProgram(m), 0) == pytest.approx(1.0)
    even = BitMatrix.from_rows([0b011, 0b110, 0b101], 3)
    assert xp_bias(XProgram(even), 0b111) == pytest.approx(1.0)


def test_submatrix_s_examples():
    m = BitMatrix.from_rows([0b001, 0b111, 0b010, 0b100], 3)
    assert submatrix_s(m, 0).nrows == 0
    assert submatrix_s(m, 0b111) == m
    assert causal_rows(m, 0b011) == [0, 2]


@pytest.mark.parametrize("seed", range(100))
def test_bias_matroid_invariance(seed):
    rng = make_rng(seed, "matroid-invariance")
    n = int(rng.integers(1, 8))
    k = int(rng.integers(0, 12))
    m = random_bitmatrix(k, n, seed, label="P")
    a = random_invertible(n, rng)
    s = int(rng.integers(0, 1 << n))
    # (p A) . s' = p . s  with  s' = A^-1 s
    s_prime = inverse(a).apply(s)
    assert xp_bias(XProgram(m), s) == pytest.approx(xp_bias(XProgram(gf2_product(m, a)), s_prime), abs=1e-12)


def test_sampling_is_deterministic_and_thread_independent():
    prog = XProgram(random_bitmatrix(12, 8, seed=3))
    a = xp_sample(prog, 150_000, seed=9, workers=1)
    assert a == xp_sample(prog, 150_000, seed=9, workers=4)
    assert a != xp_sample(prog, 150_000, seed=10)


def test_sampling_matches_distribution():
    prog = XProgram(random_bitmatrix(10, 5, seed=4))
    dist = xp_distribution(prog)
    counts = np.bincount(xp_sample(prog, 200_000, seed=1), minlength=32) / 200_000
    # every cell within 5 standard errors
    err = np.sqrt(dist.probs * (1 - dist.probs) / 200_000)
    assert np.all(np.abs(counts - dist.probs) <= 5 * err + 1e-12)


def test_sample_distribution_never_returns_zero_probability_outcome():
    dist = Distribution(2, np.array([0.0, 0.5, 0.0, 0.5]))
    assert set(sample_distribution(dist, 5000, seed=0)) <= {1, 3}


def test_collision_entropy_examples():
    assert collision_entropy(Distribution(3, np.eye(8)[0])) == 0.0
    assert collision_entropy(Distribution(3, np.full(8, 1 / 8))) == pytest.approx(3.0)


@pytest.mark.parametrize("seed", range(6))
def test_pi4_sampler_matches_distribution(seed):
    m = random_bitmatrix(6, 4, seed)
    prog = XProgram(m, math.pi / 4)
    dist = xp_distribution(prog)
    counts = np.bincount(pi4_xprogram_sample(prog, 40_000, seed), minlength=16) / 40_000
    assert total_variation(counts, dist.probs) < 0.03
    # support agrees exactly
    assert set(np.flatnonzero(counts)) <= set(np.flatnonzero(dist.probs > 1e-12))


def test_graph_program_shape():
    prog = XProgram(random_bitmatrix(7, 4, seed=0))
    g = to_graph_program(prog)
    assert (g.n_primal, g.n_ancilla) == (4, 7)
    assert to_graph_program(XProgram(BitMatrix.zeros(0, 3))).edges == ()
    star = to_graph_program(XProgram(BitMatrix.from_rows([0b1111], 4)))
    assert sorted(star.edges) == [(j, 4) for j in range(4)]


def test_emulation_examples():
    assert point_mass(emulate(XProgram(BitMatrix.zeros(0, 3)))) == 0
    single = emulate(XProgram(BitMatrix.from_rows([1], 1)))
    assert single.probs == pytest.approx([math.cos(PI8) ** 2, math.sin(PI8) ** 2], abs=1e-12)


@settings(max_examples=40)
@given(bitmatrices(max_rows=6, max_cols=5), st.sampled_from([PI8, 0.7, 1.3]))
def test_emulation_matches_distribution(m, theta):
    prog = XProgram(m, theta)
    assert total_variation(emulate(prog).probs, xp_distribution(prog).probs) < 1e-9


def test_graph_program_bound():
    prog = XProgram(BitMatrix.zeros(12, 12))
    with pytest.raises(SimulationBoundError):
        graph_program_distribution(to_graph_program(prog))


def test_hadamard_gadget():
    assert hadamard_gadget_check([1, 0]) == pytest.approx(1.0, abs=1e-12)
    assert hadamard_gadget_check(np.array([1, 1]) / math.sqrt(2)) == pytest.approx(1.0, abs=1e-12)
    rng = np.random.default_rng(7)
    for _ in range(100):
        assert hadamard_gadget_check(unit_vector(rng)) > 1 - 1e-12
