import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ewt.linalg import (flip, hermitian_basis, hermitian_spectrum, k_norm, kron, matrix_unit,
                        operator_schmidt, partial_trace, partial_transpose, realign,
                        schmidt_decompose, schmidt_rank)
from ewt.states import max_entangled

from conftest import rand_herm, rand_unit


def test_partial_transpose_of_product():
    rng = np.random.default_rng(0)
    A = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    B = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    X = kron(A, B)
    assert np.abs(partial_transpose(X, (2, 3)) - kron(A, B.T)).max() < 1e-14
    assert np.abs(partial_transpose(X, (2, 3), side="A") - kron(A.T, B)).max() < 1e-14


def test_partial_transpose_index_convention():
    # (E_01 (x) E_12)^Gamma = E_01 (x) E_21 under the row-major index iA*dB + iB
    X = kron(matrix_unit(2, 0, 1), matrix_unit(3, 1, 2))
    Y = partial_transpose(X, (2, 3))
    assert Y[0 * 3 + 2, 1 * 3 + 1] == 1 and np.count_nonzero(Y) == 1


def test_flip_pt_is_projector_multiple():
    for d in (2, 3, 4):
        P = np.outer(max_entangled(d), max_entangled(d).conj())
        assert np.abs(partial_transpose(flip(d), (d, d)) - d * P).max() < 1e-14


def test_partial_trace():
    rng = np.random.default_rng(1)
    A, B = rand_herm(rng, 3), rand_herm(rng, 2)
    X = kron(A, B)
    assert np.abs(partial_trace(X, (3, 2)) - A * np.trace(B)).max() < 1e-12
    assert np.abs(partial_trace(X, (3, 2), side="A") - B * np.trace(A)).max() < 1e-12


def test_dims_are_checked():
    with pytest.raises(ValueError):
        partial_transpose(np.eye(6), (2, 2))
    with pytest.raises(ValueError):
        partial_transpose(np.eye(4), (2, 2), side="C")


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 4), st.integers(2, 4))
def test_partial_transpose_involution_and_trace(seed, dA, dB):
    rng = np.random.default_rng(seed)
    X = rand_herm(rng, dA * dB)
    Y = partial_transpose(X, (dA, dB))
    assert np.abs(partial_transpose(Y, (dA, dB)) - X).max() < 1e-13
    assert abs(np.trace(Y) - np.trace(X)) < 1e-12
    # full transpose = PT_A o PT_B
    assert np.abs(partial_transpose(Y, (dA, dB), side="A") - X.T).max() < 1e-13


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 4), st.integers(2, 4))
def test_realignment_singular_values_are_operator_schmidt(seed, dA, dB):
    rng = np.random.default_rng(seed)
    X = rand_herm(rng, dA * dB)
    lam, GA, GB = operator_schmidt(X, (dA, dB))
    s = np.linalg.svd(realign(X, (dA, dB)), compute_uv=False)
    assert np.abs(np.sort(lam)[::-1] - s[: len(lam)]).max() < 1e-10
    back = sum(l * np.kron(a, b) for l, a, b in zip(lam, GA, GB))
    assert np.abs(back - X).max() < 1e-10
    for G in list(GA) + list(GB):
        assert np.abs(G - G.conj().T).max() < 1e-12


def test_realign_of_product_is_rank_one():
    rng = np.random.default_rng(3)
    A, B = rand_herm(rng, 2), rand_herm(rng, 3)
    R = realign(kron(A, B), (2, 3))
    assert np.abs(R - np.outer(A.ravel(), B.ravel())).max() < 1e-13


def test_hermitian_basis_orthonormal():
    for d in (2, 3, 4):
        H = hermitian_basis(d)
        G = np.einsum("aij,bij->ab", H.conj(), H)
        assert H.shape[0] == d * d
        assert np.abs(G - np.eye(d * d)).max() < 1e-14


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 5), st.integers(2, 5))
def test_schmidt_decomposition_reconstructs(seed, dA, dB):
    rng = np.random.default_rng(seed)
    psi = rand_unit(rng, dA * dB)
    sd = schmidt_decompose(psi, (dA, dB))
    assert np.abs(sd.reconstruct() - psi).max() < 1e-12
    assert abs(np.sum(sd.coefficients**2) - 1) < 1e-12
    assert np.all(np.diff(sd.coefficients) <= 1e-15)
    assert np.abs(sd.left.conj().T @ sd.left - np.eye(len(sd.coefficients))).max() < 1e-12


def test_schmidt_rank_and_k_norm():
    d = 4
    psi = max_entangled(d)
    sd = schmidt_decompose(psi, (d, d))
    assert sd.rank == d and np.abs(sd.coefficients - 0.5).max() < 1e-14
    for k in range(1, d + 1):
        assert abs(k_norm(psi, (d, d), k) - k / d) < 1e-14
    prod = np.kron([1, 0, 0, 0], [0, 1, 0, 0])
    assert schmidt_rank(prod, (4, 4)) == 1
    with pytest.raises(ValueError):
        k_norm(psi, (d, d), 0)
    with pytest.raises(ValueError):
        schmidt_decompose(np.zeros(16), (4, 4))


def test_hermitian_spectrum_descending_and_phase_fixed():
    rng = np.random.default_rng(7)
    X = rand_herm(rng, 6)
    sp = hermitian_spectrum(X)
    assert np.all(np.diff(sp.eigenvalues) <= 0)
    assert np.abs(sp.reconstruct() - X).max() < 1e-12
    for c in range(6):
        v = sp.eigenvectors[:, c]
        first = v[np.flatnonzero(np.abs(v) > 1e-12)[0]]
        assert abs(first.imag) < 1e-14 and first.real > 0
    with pytest.raises(ValueError):
        hermitian_spectrum(np.array([[0, 1], [0, 0]]))
