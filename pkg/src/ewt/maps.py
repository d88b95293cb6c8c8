"""Linear maps on matrices stored through their Choi matrices.

C_Phi = sum_ij E_ij (x) Phi(E_ij) in the computational basis.  The de Pillis
variant J(Phi) = sum_ij E_ij (x) Phi(E_ji) = (T (x) id) C_Phi is kept as a
convention tag; every map is converted to the Choi form internally.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import matrix_unit, partial_transpose

LINEARITY_TOL = 1e-9


@dataclass(frozen=True)
class MapDescriptor:
    d_in: int
    d_out: int
    choi: np.ndarray
    convention: str = "choi"

    @property
    def dims(self):
        return (self.d_in, self.d_out)

    def choi_matrix(self):
        """The Choi matrix regardless of the stored convention."""
        if self.convention == "choi":
            return self.choi
        return partial_transpose(self.choi, self.dims, side="A")

    def depillis_matrix(self):
        if self.convention == "depillis":
            return self.choi
        return partial_transpose(self.choi, self.dims, side="A")

    def __call__(self, a):
        return apply_map(self, a)


def choi_of_map(apply, d_in, d_out, convention="choi", rng=None):
    """Evaluate ``apply`` on the matrix units and assemble the Choi (or de Pillis) matrix.

    Linearity is spot-checked on random combinations of matrix units.
    """
    if convention not in ("choi", "depillis"):
        raise ValueError(f"unknown convention {convention!r}")
    images = np.zeros((d_in, d_in, d_out, d_out), dtype=complex)
    for i in range(d_in):
        for j in range(d_in):
            out = np.asarray(apply(matrix_unit(d_in, i, j)), dtype=complex)
            if out.shape != (d_out, d_out):
                raise ValueError(f"map returned shape {out.shape}, expected {(d_out, d_out)}")
            images[i, j] = out
    rng = np.random.default_rng(12345) if rng is None else rng
    for _ in range(3):
        c = rng.normal(size=(d_in, d_in)) + 1j * rng.normal(size=(d_in, d_in))
        lhs = np.asarray(apply(c), dtype=complex)
        rhs = np.einsum("ij,ijkl->kl", c, images)
        if np.abs(lhs - rhs).max() > LINEARITY_TOL * max(1.0, np.abs(rhs).max()):
            raise ValueError("map failed the superposition check; it is not linear")
    C = images.transpose(0, 2, 1, 3).reshape(d_in * d_out, d_in * d_out)
    M = MapDescriptor(d_in, d_out, C, "choi")
    if convention == "depillis":
        M = MapDescriptor(d_in, d_out, M.depillis_matrix(), "depillis")
    return M


def _images(M):
    """Phi(E_ij) as an array indexed [i, j, :, :]."""
    C = M.choi_matrix()
    return C.reshape(M.d_in, M.d_out, M.d_in, M.d_out).transpose(0, 2, 1, 3)


def apply_map(M, a):
    """Phi(a) = tr_A[(a^T (x) I) C_Phi]."""
    return np.einsum("ij,ijkl->kl", np.asarray(a), _images(M))


def map_of_choi(M):
    """Recover the action of the map as a callable."""
    return lambda a: apply_map(M, a)


def dual_map(M):
    """Dual map with tr[Phi#(A) B] = tr[A Phi(B)]."""
    C4 = M.choi_matrix().reshape(M.d_in, M.d_out, M.d_in, M.d_out)
    C = C4.transpose(3, 2, 1, 0).reshape(M.d_in * M.d_out, M.d_in * M.d_out)
    return MapDescriptor(M.d_out, M.d_in, C, "choi")


def compose(outer, inner):
    """Choi matrix of outer o inner."""
    if inner.d_out != outer.d_in:
        raise ValueError("dimension mismatch in composition")
    return choi_of_map(lambda a: apply_map(outer, apply_map(inner, a)), inner.d_in, outer.d_out)


def apply_extended(M, X, d_a):
    """(id_A (x) Phi) X for X acting on C^d_a (x) C^d_in."""
    X = np.asarray(X)
    if X.shape != (d_a * M.d_in, d_a * M.d_in):
        raise ValueError(f"operator of shape {X.shape} does not match ({d_a} x {M.d_in})")
    X4 = X.reshape(d_a, M.d_in, d_a, M.d_in)
    out = np.einsum("ikjl,klmn->imjn", X4, _images(M))
    return out.reshape(d_a * M.d_out, d_a * M.d_out)


def hs_inner_maps(M1, M2):
    """<<Phi|Psi>> = sum_ij tr[Phi(E_ij)^dagger Psi(E_ij)]."""
    return complex(np.sum(_images(M1).conj() * _images(M2)))


def is_unital(M, tol=1e-10):
    return np.abs(apply_map(M, np.eye(M.d_in)) - np.eye(M.d_out)).max() <= tol


def is_trace_preserving(M, tol=1e-10):
    traces = np.einsum("ijkk->ij", _images(M))
    return np.abs(traces - np.eye(M.d_in)).max() <= tol


# -- standard maps ------------------------------------------------------------

def identity_map(d):
    return choi_of_map(lambda a: a, d, d)


def transpose_map(d):
    return choi_of_map(lambda a: a.T, d, d)


def reduction_map(d, scale=1.0):
    """R_d(X) = I tr X - X (times ``scale``)."""
    return choi_of_map(lambda a: scale * (np.eye(d) * np.trace(a) - a), d, d)


def phi_p(d, p):
    """Phi_p(X) = I tr X - p X together with the largest k for which it is k-positive.

    Its Choi matrix I (x) I - p d P^+ gives <Psi|C|Psi> >= 1 - p k on Schmidt
    rank <= k vectors, so Phi_p is k-positive iff p <= 1/k; k = d means CP and
    k = 0 means not positive.
    """
    if p <= 0:
        raise ValueError("phi_p requires p > 0")
    M = choi_of_map(lambda a: np.eye(d) * np.trace(a) - p * a, d, d)
    k = int(np.floor(1.0 / p + 1e-12))
    return M, min(k, d)


def choi_abc_map(a, b, c):
    """Phi[a,b,c] on M_3: diagonal part through the circulant matrix A[a,b,c], off-diagonal -E_ij; unital."""
    N = a + b + c
    A = np.array([[a, b, c], [c, a, b], [b, c, a]], dtype=float)

    def apply(X):
        out = -np.array(X, dtype=complex)
        np.fill_diagonal(out, 0.0)
        out += np.diag(A.T @ np.diag(X))
        return out / N

    return choi_of_map(apply, 3, 3)


def random_map(d_in, d_out, rng):
    C = rng.normal(size=(d_in * d_out,) * 2) + 1j * rng.normal(size=(d_in * d_out,) * 2)
    return MapDescriptor(d_in, d_out, C, "choi")


def witness_from_violator(M, X, d_a):
    """For (id (x) Phi) X with a negative eigenvalue lam and eigenvector psi,
    return (W, lam, psi) where W = (id (x) Phi#)|psi><psi| satisfies tr(W X) = lam."""
    Y = apply_extended(M, X, d_a)
    w, V = np.linalg.eigh((Y + Y.conj().T) / 2)
    psi = V[:, 0]
    W = apply_extended(dual_map(M), np.outer(psi, psi.conj()), d_a)
    return W, float(w[0]), psi


# -- Breuer-Hall and Robertson-type maps on M_2N ------------------------------

def _check_antisymmetric_unitary(U, tol=1e-10):
    U = np.asarray(U, dtype=complex)
    n = U.shape[0]
    if U.shape != (n, n) or n % 2:
        raise ValueError("U must be a square matrix of even size")
    if np.abs(U @ U.conj().T - np.eye(n)).max() > tol:
        raise ValueError("U must be unitary")
    if np.abs(U + U.T).max() > tol:
        raise ValueError("U must be antisymmetric")
    return U


def standard_antisymmetric_unitary(N):
    """U_0 = i I_N (x) sigma_2, a real antisymmetric unitary on C^2N."""
    return np.kron(np.eye(N), np.array([[0.0, 1.0], [-1.0, 0.0]])).astype(complex)


def breuer_hall_map(U):
    """Phi_U(X) = (I tr X - X - U X^t U^dagger) / (2(N-1)) on M_2N."""
    U = _check_antisymmetric_unitary(U)
    n = U.shape[0]
    N = n // 2
    if N < 2:
        raise ValueError("Breuer-Hall maps need 2N >= 4")
    return choi_of_map(lambda X: (np.eye(n) * np.trace(X) - X - U @ X.T @ U.conj().T) / (2 * (N - 1)),
                       n, n)


def robertson_map():
    """Robertson map on M_4; it coincides with the Breuer-Hall map of U_0."""
    return breuer_hall_map(standard_antisymmetric_unitary(2))


def _reduction(Y):
    return np.eye(len(Y)) * np.trace(Y) - Y


def block_reduction_map(N):
    """Phi_2N on 2 x 2 block matrices with N x N blocks.

    Diagonal blocks become I tr X_22 and I tr X_11; the off-diagonal block
    (1,2) becomes -(X_12 + R_N(X_21)), and symmetrically for (2,1).  The
    factor 1/N makes the map unital and trace-preserving.
    """
    def apply(X):
        X11, X12, X21, X22 = X[:N, :N], X[:N, N:], X[N:, :N], X[N:, N:]
        out = np.zeros((2 * N, 2 * N), dtype=complex)
        out[:N, :N] = np.eye(N) * np.trace(X22)
        out[N:, N:] = np.eye(N) * np.trace(X11)
        out[:N, N:] = -(X12 + _reduction(X21))
        out[N:, :N] = -(X21 + _reduction(X12))
        return out / N

    return choi_of_map(apply, 2 * N, 2 * N)


def z_deformed_map(N, z):
    """Robertson-type map on M_2N with N x N blocks of size 2 and phases z_kl.

    Block (k,l) of the image is z_kl (X_kl + R_2(X_lk)) for k != l and
    I_2 (tr X - tr X_kk) on the diagonal, all over 2(N-1).  z may be a scalar
    (used for every pair, with z_lk = conj(z_kl)) or an N x N matrix.
    z = -1 gives the Breuer-Hall map of U_0.
    """
    if N < 2:
        raise ValueError("z_deformed_map needs N >= 2")
    if np.isscalar(z):
        Z = np.full((N, N), complex(z))
        Z = np.triu(Z, 1) + np.triu(Z, 1).conj().T
    else:
        Z = np.asarray(z, dtype=complex)
        if Z.shape != (N, N):
            raise ValueError(f"z must be a scalar or an {N} x {N} matrix")
        off = ~np.eye(N, dtype=bool)
        if np.abs(Z - Z.conj().T)[off].max(initial=0.0) > 1e-12:
            raise ValueError("z must satisfy z_kl = conj(z_lk)")
    off = ~np.eye(N, dtype=bool)
    if np.abs(Z[off]).max(initial=0.0) > 1 + 1e-12:
        raise ValueError("|z_kl| must not exceed 1 for a positive map")

    def apply(X):
        out = np.zeros((2 * N, 2 * N), dtype=complex)
        tr = np.trace(X)
        for k in range(N):
            sk = slice(2 * k, 2 * k + 2)
            for l in range(N):
                sl = slice(2 * l, 2 * l + 2)
                if k == l:
                    out[sk, sk] = np.eye(2) * (tr - np.trace(X[sk, sk]))
                else:
                    out[sk, sl] = Z[k, l] * (X[sk, sl] + _reduction(X[sl, sk]))
        return out / (2 * (N - 1))

    return choi_of_map(apply, 2 * N, 2 * N)
