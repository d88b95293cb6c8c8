import numpy as np
import pytest

from ewt.linalg import flip, partial_transpose
from ewt.states import (CirculantOperator, bell_state, circulant_assemble, circulant_pt_coeffs,
                        ghz_state, is_ppt, isotropic, load_upb, max_entangled,
                        random_circulant, random_fully_separable, random_separable_state,
                        subspace_projector, tiles_state, upb_state, w_state, werner,
                        weyl_operator)


def test_bell_basis_orthonormal():
    for d in (2, 3, 4):
        B = np.array([bell_state(d, m, n) for m in range(d) for n in range(d)])
        assert np.abs(B.conj() @ B.T - np.eye(d * d)).max() < 1e-12


def test_weyl_relations():
    d = 3
    lam = np.exp(2j * np.pi / d)
    X, Z = weyl_operator(d, 0, 1), weyl_operator(d, 1, 0)
    assert np.abs(Z @ X - lam * X @ Z).max() < 1e-12
    for m in range(d):
        for n in range(d):
            U = weyl_operator(d, m, n)
            assert np.abs(U @ U.conj().T - np.eye(d)).max() < 1e-12


def test_subspace_projectors_partition_identity():
    d = 3
    total = sum(subspace_projector(d, n) for n in range(d))
    assert np.abs(total - np.eye(d * d)).max() < 1e-12
    P0 = subspace_projector(d, 0)
    diag = np.zeros(d * d)
    diag[:: d + 1] = 1
    assert np.abs(P0 - np.diag(diag)).max() < 1e-12


def test_werner_flip_expectation():
    for d in (2, 3, 4):
        for p in (0.0, 0.3, 0.5, 1.0):
            rho = werner(d, p)
            assert abs(np.trace(rho) - 1) < 1e-12
            assert abs(np.trace(rho @ flip(d)).real - (2 * p - 1)) < 1e-12


def test_isotropic_ppt_boundary_closed_form():
    for d in (2, 3, 4):
        pc = d / (d + 1)
        assert is_ppt(isotropic(d, pc + 1e-6), (d, d))
        assert not is_ppt(isotropic(d, pc - 1e-6), (d, d))
    with pytest.raises(ValueError):
        isotropic(2, 1.5)


def test_circulant_pt_matches_direct_small():
    rng = np.random.default_rng(11)
    for d in (2, 3, 4):
        for _ in range(20):
            c = random_circulant(d, rng, hermitian=False)
            direct = partial_transpose(circulant_assemble(c), (d, d))
            via = circulant_assemble(circulant_pt_coeffs(c), tilde=True)
            assert np.abs(direct - via).max() < 1e-12


def test_bell_diagonal_is_circulant():
    d = 3
    # P^+ lives on Sigma_0 with the all-ones / d block
    c = CirculantOperator(np.zeros((d, d, d), dtype=complex))
    c.blocks[0] = np.ones((d, d)) / d
    P = np.outer(max_entangled(d), max_entangled(d).conj())
    assert np.abs(circulant_assemble(c) - P).max() < 1e-14


def test_tiles_state_is_ppt_and_rank_four():
    X = tiles_state()
    assert abs(np.trace(X) - 1) < 1e-12
    assert np.linalg.matrix_rank(X, tol=1e-10) == 4
    assert np.linalg.eigvalsh(partial_transpose(X, (3, 3)))[0] >= -1e-10


def test_upb_validation():
    pairs, dims = load_upb()
    assert dims == (3, 3) and len(pairs) == 5
    e = np.eye(3)
    with pytest.raises(ValueError):
        upb_state([(e[0], e[0]), (e[0], e[0])], (3, 3))
    with pytest.raises(ValueError):
        upb_state([max_entangled(3)], (3, 3))


def test_three_qubit_vectors():
    assert abs(np.linalg.norm(ghz_state()) - 1) < 1e-14
    assert abs(np.linalg.norm(w_state()) - 1) < 1e-14
    assert abs(np.vdot(ghz_state(), w_state())) < 1e-14


def test_random_separable_states_are_ppt():
    rng = np.random.default_rng(5)
    for _ in range(20):
        rho = random_separable_state((3, 3), rng)
        assert abs(np.trace(rho) - 1) < 1e-12 and is_ppt(rho, (3, 3))
    rho = random_fully_separable([2, 2, 2], rng)
    assert rho.shape == (8, 8) and np.linalg.eigvalsh(rho)[0] > -1e-12
