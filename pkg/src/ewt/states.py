"""Reference states and structured operators used as test beds."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .linalg import flip, kron, min_eigenvalue, partial_transpose, proj

ORTHO_TOL = 1e-10


def max_entangled(d):
    """psi^+_d = d^{-1/2} sum_k e_k (x) e_k."""
    if d < 2:
        raise ValueError("max_entangled requires d >= 2")
    v = np.zeros(d * d, dtype=complex)
    v[:: d + 1] = 1 / np.sqrt(d)
    return v


def max_entangled_projector(d):
    return proj(max_entangled(d))


def isotropic(d, p):
    """rho_p = (p/d^2) I (x) I + (1-p) P^+_d; PPT (and separable) iff p >= d/(d+1)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return p / d**2 * np.eye(d * d) + (1 - p) * max_entangled_projector(d)


def werner(d, p):
    """rho = p Q_S + (1-p) Q_A with unit-trace symmetric/antisymmetric states.

    Q_S = (I + F) / (d(d+1)) and Q_A = (I - F) / (d(d-1)), so tr(rho F) = 2p - 1
    and the state is entangled iff p < 1/2.
    """
    if d < 2:
        raise ValueError("werner requires d >= 2")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    I, F = np.eye(d * d), flip(d)
    QS = (I + F) / (d * (d + 1))
    QA = (I - F) / (d * (d - 1))
    return p * QS + (1 - p) * QA


def shift(d, n=1):
    """S^n with S e_k = e_{k+1 mod d}."""
    return np.roll(np.eye(d, dtype=complex), n, axis=0)


def weyl_operator(d, m, n):
    """U_mn e_k = lambda^{mk} e_{k+n}, lambda = exp(2 pi i / d); phase first, then shift."""
    m, n = m % d, n % d
    lam = np.exp(2j * np.pi / d)
    U = np.zeros((d, d), dtype=complex)
    for k in range(d):
        U[(k + n) % d, k] = lam ** (m * k)
    return U


def bell_state(d, m, n):
    """Generalized Bell vector psi_mn = (I (x) U_mn) psi^+_d."""
    return kron(np.eye(d), weyl_operator(d, m, n)) @ max_entangled(d)


def bell_projector(d, m, n):
    return proj(bell_state(d, m, n))


def subspace_projector(d, n):
    """Pi_n = sum_m P_mn, the projector onto Sigma_n = span{e_i (x) e_{i+n}}."""
    return sum(bell_projector(d, m, n) for m in range(d))


@dataclass
class CirculantOperator:
    """A = sum_n sum_ij blocks[n][i,j] E_ij (x) E_{i+n, j+n}."""

    blocks: np.ndarray  # (d, d, d) complex

    @property
    def d(self):
        return self.blocks.shape[0]


def circulant_assemble(c, tilde=False):
    """Assemble a circulant operator.

    With ``tilde=True`` the block n is placed on the PT-subspace
    span{e_i (x) e_{pi(i)+n}}, pi(i) = -i mod d, as partial transposes are.
    """
    d = c.d
    A = np.zeros((d * d, d * d), dtype=complex)
    for n in range(d):
        for i in range(d):
            for j in range(d):
                bi = ((-i if tilde else i) + n) % d
                bj = ((-j if tilde else j) + n) % d
                A[i * d + bi, j * d + bj] += c.blocks[n, i, j]
    return A


def circulant_pt_coeffs(c):
    """Blocks of A^Gamma on the PT-subspaces: sum_m a^(n+m) o (Pi S^m), indices mod d."""
    d = c.d
    Pi = np.zeros((d, d))
    for l in range(d):
        Pi[(-l) % d, l] = 1.0
    out = np.zeros_like(c.blocks, dtype=complex)
    for n in range(d):
        for m in range(d):
            out[n] += c.blocks[(n + m) % d] * (Pi @ shift(d, m).real)
    return CirculantOperator(out)


def random_circulant(d, rng, hermitian=True):
    blocks = rng.normal(size=(d, d, d)) + 1j * rng.normal(size=(d, d, d))
    if hermitian:
        blocks = (blocks + blocks.conj().transpose(0, 2, 1)) / 2
    return CirculantOperator(blocks)


def _is_product(v, dims, tol):
    s = np.linalg.svd(v.reshape(dims), compute_uv=False)
    return s[1:].sum() <= tol if len(s) > 1 else True


def upb_state(vectors, dims):
    """X = I - sum_i |a_i b_i><a_i b_i| for orthonormal product vectors a_i (x) b_i.

    ``vectors`` is a sequence of (a, b) pairs or of full product vectors.
    For a UPB the result is PPT, its range holds no product vector, and
    X / tr(X) is a PPT entangled state.
    """
    dA, dB = dims
    full = []
    for v in vectors:
        if isinstance(v, tuple):
            a, b = (np.asarray(x, dtype=complex) for x in v)
            v = np.kron(a, b)
        v = np.asarray(v, dtype=complex).ravel()
        if v.size != dA * dB:
            raise ValueError("vector does not match dims")
        if abs(np.linalg.norm(v) - 1) > ORTHO_TOL:
            raise ValueError("UPB vectors must be normalized")
        if not _is_product(v, dims, ORTHO_TOL):
            raise ValueError("UPB vectors must be product vectors")
        full.append(v)
    V = np.array(full)
    G = V.conj() @ V.T
    if np.abs(G - np.eye(len(full))).max() > ORTHO_TOL:
        raise ValueError("UPB vectors must be pairwise orthogonal")
    X = np.eye(dA * dB) - V.T @ V.conj()
    assert min_eigenvalue(X) >= -ORTHO_TOL
    return X


def _vec(obj):
    return np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)


def load_upb(path=None):
    """Load product vectors from a UPB fixture file; defaults to the bundled Tiles UPB.

    Returns ``(pairs, dims)`` where pairs is a list of (a, b) local vectors.
    """
    if path is None:
        text = resources.files("ewt").joinpath("data/tiles_upb.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    data = json.loads(text)
    dims = (int(data["d_a"]), int(data["d_b"]))
    pairs = [(_vec(entry["a"]), _vec(entry["b"])) for entry in data["vectors"]]
    upb_state(pairs, dims)  # validates orthonormality and productness
    return pairs, dims


def tiles_state():
    """Normalized PPT entangled state X / tr X built on the Tiles UPB in 3 (x) 3."""
    pairs, dims = load_upb()
    X = upb_state(pairs, dims)
    return X / np.trace(X).real


def upb_projector(pairs):
    return sum(proj(np.kron(a, b)) for a, b in pairs)


def ghz_state():
    v = np.zeros(8, dtype=complex)
    v[0] = v[7] = 1 / np.sqrt(2)
    return v


def w_state():
    v = np.zeros(8, dtype=complex)
    v[[1, 2, 4]] = 1 / np.sqrt(3)
    return v


def three_qubit_states():
    return ghz_state(), w_state()


def random_product_state(dims, rng):
    """Random pure product density operator |a b><a b|."""
    a = rng.normal(size=dims[0]) + 1j * rng.normal(size=dims[0])
    b = rng.normal(size=dims[1]) + 1j * rng.normal(size=dims[1])
    v = np.kron(a / np.linalg.norm(a), b / np.linalg.norm(b))
    return proj(v)


def random_separable_state(dims, rng, terms=5):
    w = rng.dirichlet(np.ones(terms))
    return sum(wk * random_product_state(dims, rng) for wk in w)


def random_fully_separable(local_dims, rng, terms=4):
    """Random convex mixture of fully product pure states on several parties."""
    w = rng.dirichlet(np.ones(terms))
    out = 0
    for wk in w:
        v = np.ones(1, dtype=complex)
        for d in local_dims:
            x = rng.normal(size=d) + 1j * rng.normal(size=d)
            v = np.kron(v, x / np.linalg.norm(x))
        out = out + wk * proj(v)
    return out


def is_ppt(X, dims, tol=1e-10):
    return min_eigenvalue(partial_transpose(X, dims)) >= -tol
