import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ewt.linalg import flip, k_norm, partial_transpose
from ewt.optimize import (default_restarts, make_rng, maximize_on_simplex,
                          min_schmidt_k_expectation, project_simplex, seesaw_batch)
from ewt.states import max_entangled

from conftest import rand_herm, rand_psd


def test_flip_product_minimum_is_zero():
    r = min_schmidt_k_expectation(flip(3), (3, 3), 1, seed=0)
    assert abs(r.min_value) < 1e-9
    assert not r.certified_negative


def test_flip_rank_two_is_certified_negative():
    r = min_schmidt_k_expectation(flip(3), (3, 3), 2, seed=0)
    assert abs(r.min_value + 1) < 1e-9 and r.certified_negative
    assert k_norm(r.vector, (3, 3), 2) > 1 - 1e-9


def test_full_rank_search_finds_lowest_eigenvalue():
    rng = np.random.default_rng(0)
    W = rand_herm(rng, 6)
    r = min_schmidt_k_expectation(W, (2, 3), 2, seed=1, restarts=20)
    assert abs(r.min_value - np.linalg.eigvalsh(W)[0]) < 1e-8


def test_decomposable_operator_is_block_positive():
    rng = np.random.default_rng(4)
    W = rand_psd(rng, 9, 2) + partial_transpose(rand_psd(rng, 9, 2), (3, 3))
    r = min_schmidt_k_expectation(W, (3, 3), 1, seed=0, restarts=40)
    assert r.min_value > -1e-9


def test_reproducible_for_seed():
    rng = np.random.default_rng(9)
    W = rand_herm(rng, 9)
    a = min_schmidt_k_expectation(W, (3, 3), 1, seed=5, restarts=10)
    b = min_schmidt_k_expectation(W, (3, 3), 1, seed=5, restarts=10)
    assert a.min_value == b.min_value and np.array_equal(a.vector, b.vector)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_returned_vector_attains_value(seed):
    rng = np.random.default_rng(seed)
    W = rand_herm(rng, 6)
    r = min_schmidt_k_expectation(W, (2, 3), 1, seed=seed % 1000, restarts=8)
    psi = r.vector
    assert abs(np.linalg.norm(psi) - 1) < 1e-12
    assert abs(np.real(psi.conj() @ W @ psi) - r.min_value) < 1e-12
    assert k_norm(psi, (2, 3), 1) > 1 - 1e-9
    # no product vector goes below the smallest eigenvalue
    assert r.min_value >= np.linalg.eigvalsh(W)[0] - 1e-10


def test_batch_shapes_and_monotone_values():
    rng = make_rng(0)
    W = rand_herm(np.random.default_rng(1), 9)
    vals, Psi, sweeps = seesaw_batch(W, (3, 3), 1, rng, 7)
    assert vals.shape == (7,) and Psi.shape == (7, 3, 3) and np.all(sweeps >= 1)
    for v, P in zip(vals, Psi):
        x = P.ravel()
        assert abs(np.real(x.conj() @ W @ x) - v) < 1e-10


def test_argument_checks():
    with pytest.raises(ValueError):
        min_schmidt_k_expectation(np.eye(4), (2, 2), 3)
    with pytest.raises(ValueError):
        min_schmidt_k_expectation(np.array([[0, 1], [0, 0]] * 1), (1, 2))
    assert default_restarts((3, 4)) == 200


def test_simplex_tools():
    v = project_simplex(np.array([0.5, 2.0, -1.0]))
    assert abs(v.sum() - 1) < 1e-14 and np.all(v >= 0)
    c = np.array([0.2, 0.7, 0.1])
    val, t = maximize_on_simplex(lambda T: -np.sum((T - c) ** 2, axis=1), lambda T: -2 * (T - c), 3,
                                 np.random.default_rng(0))
    assert np.abs(t - c).max() < 1e-6 and abs(val) < 1e-10


def test_max_entangled_overlap_bound():
    # <psi|P+|psi> <= k/d on Schmidt rank k
    d = 4
    P = np.outer(max_entangled(d), max_entangled(d).conj())
    for k in range(1, d + 1):
        r = min_schmidt_k_expectation(-P, (d, d), k, seed=0, restarts=20)
        assert abs(r.min_value + k / d) < 1e-8
