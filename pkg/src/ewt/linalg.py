"""Dense linear algebra on bipartite operators.

Index convention: a bipartite operator on C^dA (x) C^dB is a (dA*dB, dA*dB)
complex array whose row/column index is ``iA * dB + iB`` (row-major over the
pair).  Every module in the package relies on this convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITIAN_TOL = 1e-10
RANK_RTOL = 1e-8


def kron(A, B):
    """(A (x) B)[(i,k),(j,l)] = A[i,j] B[k,l]."""
    return np.kron(np.asarray(A), np.asarray(B))


def matrix_unit(d, i, j):
    E = np.zeros((d, d), dtype=complex)
    E[i, j] = 1.0
    return E


def flip(d):
    """Swap operator F (psi (x) phi) = phi (x) psi on C^d (x) C^d."""
    F = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            F[j * d + i, i * d + j] = 1.0
    return F


def ket(*indices, dims):
    v = np.zeros(int(np.prod(dims)), dtype=complex)
    v[np.ravel_multi_index(indices, dims)] = 1.0
    return v


def proj(v):
    v = np.asarray(v, dtype=complex).ravel()
    return np.outer(v, v.conj())


def dagger(X):
    return np.asarray(X).conj().T


def is_hermitian(X, tol=HERMITIAN_TOL):
    X = np.asarray(X)
    return X.shape[0] == X.shape[1] and np.abs(X - X.conj().T).max(initial=0.0) <= tol


def _check_dims(X, dims):
    dA, dB = dims
    X = np.asarray(X)
    if X.shape != (dA * dB, dA * dB):
        raise ValueError(f"operator of shape {X.shape} does not match dims {dims}")
    return X


def partial_transpose(X, dims, side="B"):
    """Transpose the chosen tensor factor; ``side="B"`` gives X^Gamma = (id (x) T) X."""
    dA, dB = dims
    X4 = _check_dims(X, dims).reshape(dA, dB, dA, dB)
    if side == "B":
        return X4.transpose(0, 3, 2, 1).reshape(dA * dB, dA * dB)
    if side == "A":
        return X4.transpose(2, 1, 0, 3).reshape(dA * dB, dA * dB)
    raise ValueError(f"side must be 'A' or 'B', got {side!r}")


def partial_trace(X, dims, side="B"):
    """Trace out ``side``; the result lives on the other factor."""
    dA, dB = dims
    X4 = _check_dims(X, dims).reshape(dA, dB, dA, dB)
    if side == "B":
        return np.einsum("ikjk->ij", X4)
    if side == "A":
        return np.einsum("kikj->ij", X4)
    raise ValueError(f"side must be 'A' or 'B', got {side!r}")


def realign(X, dims):
    """Realigned matrix R[(i,j),(k,l)] = X[(i,k),(j,l)], of shape (dA^2, dB^2).

    If X = sum_s A_s (x) B_s then R = sum_s vec(A_s) vec(B_s)^T, so the
    singular values of R are the operator Schmidt coefficients of X.
    """
    dA, dB = dims
    X4 = _check_dims(X, dims).reshape(dA, dB, dA, dB)
    return X4.transpose(0, 2, 1, 3).reshape(dA * dA, dB * dB)


def hermitian_basis(d):
    """HS-orthonormal basis of Hermitian d x d matrices."""
    basis = []
    for j in range(d):
        basis.append(matrix_unit(d, j, j))
    s = 1 / np.sqrt(2)
    for j in range(d):
        for k in range(j + 1, d):
            basis.append(s * (matrix_unit(d, j, k) + matrix_unit(d, k, j)))
            basis.append(s * (-1j * matrix_unit(d, j, k) + 1j * matrix_unit(d, k, j)))
    return np.array(basis)


def operator_schmidt(X, dims, tol=1e-12):
    """Operator Schmidt decomposition X = sum_k lam_k GA_k (x) GB_k.

    For Hermitian X the factors are taken from a Hermitian basis, so every
    GA_k, GB_k is Hermitian.  Terms with lam_k <= tol * max(lam) are dropped.
    Returns ``(lam, GA, GB)`` with GA of shape (r, dA, dA), GB of shape (r, dB, dB).
    """
    dA, dB = dims
    X = _check_dims(X, dims)
    if is_hermitian(X):
        HA, HB = hermitian_basis(dA), hermitian_basis(dB)
        C = np.einsum("aij,bkl,jlik->ab", HA, HB, X.reshape(dA, dB, dA, dB)).real
        U, s, Vh = np.linalg.svd(C)
        GA = np.einsum("as,aij->sij", U[:, : len(s)], HA)
        GB = np.einsum("sb,bij->sij", Vh[: len(s)], HB)
    else:
        U, s, Vh = np.linalg.svd(realign(X, dims))
        GA = U[:, : len(s)].T.reshape(-1, dA, dA)
        GB = Vh[: len(s)].reshape(-1, dB, dB)
    keep = s > tol * max(s[0], 1e-300)
    return s[keep], GA[keep], GB[keep]


@dataclass(frozen=True)
class SchmidtDecomposition:
    coefficients: np.ndarray
    left: np.ndarray  # columns are the A-side vectors
    right: np.ndarray  # columns are the B-side vectors
    rank: int

    def reconstruct(self):
        return np.einsum("k,ik,jk->ij", self.coefficients, self.left, self.right).ravel()


def schmidt_decompose(psi, dims, rank_rtol=RANK_RTOL):
    """Schmidt form psi = sum_k s_k e_k (x) f_k via SVD of the dA x dB coefficient matrix."""
    dA, dB = dims
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.size != dA * dB:
        raise ValueError(f"vector of length {psi.size} does not match dims {dims}")
    if not np.any(psi):
        raise ValueError("Schmidt decomposition of the zero vector is undefined")
    U, s, Vh = np.linalg.svd(psi.reshape(dA, dB))
    rank = int(np.sum(s > rank_rtol * s[0]))
    return SchmidtDecomposition(s, U[:, : len(s)], Vh[: len(s)].T, rank)


def schmidt_rank(psi, dims, rank_rtol=RANK_RTOL):
    return schmidt_decompose(psi, dims, rank_rtol).rank


def k_norm(psi, dims, k):
    """Squared k-norm: the sum of the k largest squared Schmidt coefficients."""
    d = min(dims)
    if not 1 <= k <= d:
        raise ValueError(f"k must lie in [1, {d}], got {k}")
    s = np.linalg.svd(np.asarray(psi, dtype=complex).reshape(dims), compute_uv=False)
    return float(np.sum(s[:k] ** 2))


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray  # descending
    eigenvectors: np.ndarray  # columns

    def reconstruct(self):
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T


def _fix_phases(V, tol=1e-12):
    V = V.copy()
    for c in range(V.shape[1]):
        nz = np.flatnonzero(np.abs(V[:, c]) > tol)
        if nz.size:
            z = V[nz[0], c]
            V[:, c] *= abs(z) / z
    return V


def hermitian_spectrum(X, tol=HERMITIAN_TOL):
    """Eigen-decomposition of a Hermitian matrix, eigenvalues descending.

    Each eigenvector is phase-fixed so that its first nonzero component is
    real and positive.
    """
    X = np.asarray(X)
    if not is_hermitian(X, tol):
        raise ValueError("hermitian_spectrum requires a Hermitian matrix")
    w, V = np.linalg.eigh((X + X.conj().T) / 2)
    return Spectrum(w[::-1].copy(), _fix_phases(V[:, ::-1]))


def min_eigenvalue(X):
    X = np.asarray(X)
    return float(np.linalg.eigvalsh((X + X.conj().T) / 2)[0])
