"""Nonconvex minimization of <Psi|W|Psi> over Schmidt-rank-limited vectors.

The rank-k see-saw keeps Psi as a dA x dB coefficient matrix of rank <= k.
Each half-step fixes the column space on one side and solves the remaining
problem exactly as a smallest-eigenvector problem; the objective is therefore
nonincreasing.  All restarts advance together as one batch of small
eigenproblems.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

CERT_TOL = 1e-7
SWEEP_CAP = 500
REL_CONV = 1e-12


def make_rng(seed):
    """Counter-based generator; every result records the seed that built it."""
    return np.random.Generator(np.random.Philox(seed))


def default_restarts(dims):
    return 50 * max(dims)


@dataclass
class OptimResult:
    min_value: float
    vector: np.ndarray
    status: str  # "certified_negative" | "heuristic_nonnegative"
    restarts_used: int
    iterations: int
    seed: int
    k: int = 1
    dims: tuple = (0, 0)
    all_values: np.ndarray = field(default=None, repr=False)
    all_vectors: np.ndarray = field(default=None, repr=False)

    @property
    def certified_negative(self):
        return self.status == "certified_negative"


def _random_columns(rng, n, d, k):
    Z = rng.normal(size=(n, d, d)) + 1j * rng.normal(size=(n, d, d))
    Q, _ = np.linalg.qr(Z)
    return Q[:, :, :k]


def _lowest(M):
    M = (M + M.conj().transpose(0, 2, 1)) / 2
    w, V = np.linalg.eigh(M)
    return w[:, 0], V[:, :, 0]


def seesaw_batch(W, dims, k, rng, restarts, sweep_cap=SWEEP_CAP, rel_conv=REL_CONV):
    """Run ``restarts`` independent rank-k see-saw descents.

    Returns ``(values, Psi, sweeps)`` where Psi has shape (restarts, dA, dB)
    with unit Frobenius norm.
    """
    dA, dB = dims
    W4 = np.asarray(W, dtype=complex).reshape(dA, dB, dA, dB)
    scale = max(1.0, float(np.abs(W4).max()))
    Y = _random_columns(rng, restarts, dB, k)  # B-side columns, Psi = X Y^T
    values = np.full(restarts, np.inf)
    Psi = np.zeros((restarts, dA, dB), dtype=complex)
    sweeps = np.zeros(restarts, dtype=int)
    active = np.arange(restarts)
    for _ in range(sweep_cap):
        Ya = Y[active]
        MA = np.einsum("rjs,ijkl,rlt->riskt", Ya.conj(), W4, Ya, optimize=True)
        vA, x = _lowest(MA.reshape(len(active), dA * k, dA * k))
        P = np.einsum("ris,rjs->rij", x.reshape(-1, dA, k), Ya)
        U = np.linalg.svd(P)[0][:, :, :k]
        MB = np.einsum("ris,ijkl,rkt->rsjtl", U.conj(), W4, U, optimize=True)
        vB, z = _lowest(MB.reshape(len(active), k * dB, k * dB))
        P = np.einsum("ris,rsj->rij", U, z.reshape(-1, k, dB))
        Vh = np.linalg.svd(P)[2]
        Y[active] = Vh[:, :k, :].transpose(0, 2, 1)
        prev = values[active]
        if np.any(vA > prev + 1e-10 * scale) or np.any(vB > vA + 1e-10 * scale):
            raise AssertionError("see-saw objective increased")
        values[active] = vB
        Psi[active] = P
        sweeps[active] += 1
        done = np.abs(prev - vB) <= rel_conv * np.maximum(1.0, np.abs(vB))
        active = active[~done]
        if active.size == 0:
            break
    return values, Psi, sweeps


def min_schmidt_k_expectation(W, dims, k=1, seed=0, restarts=None, cert_tol=CERT_TOL,
                              sweep_cap=SWEEP_CAP):
    """Minimize <Psi|W|Psi> over unit vectors of Schmidt rank <= k.

    Only a negative value below ``-cert_tol`` is a certificate; a nonnegative
    result is heuristic.
    """
    dA, dB = dims
    if not 1 <= k <= min(dims):
        raise ValueError(f"k must lie in [1, {min(dims)}], got {k}")
    W = np.asarray(W, dtype=complex)
    if np.abs(W - W.conj().T).max() > 1e-10:
        raise ValueError("W must be Hermitian")
    restarts = default_restarts(dims) if restarts is None else int(restarts)
    rng = make_rng(seed)
    values, Psi, sweeps = seesaw_batch(W, dims, k, rng, restarts, sweep_cap=sweep_cap)
    best = int(np.argmin(values))  # ties resolve to the lowest restart index
    psi = Psi[best].ravel()
    psi = psi / np.linalg.norm(psi)
    value = float(np.real(psi.conj() @ W @ psi))
    status = "certified_negative" if value < -cert_tol else "heuristic_nonnegative"
    return OptimResult(value, psi, status, restarts, int(sweeps.sum()), seed, k, tuple(dims),
                       values, Psi)


def product_refine(W, dims, a, b, sweeps=50):
    """Plain alternating minimization from the product vector a (x) b."""
    dA, dB = dims
    W4 = np.asarray(W, dtype=complex).reshape(dA, dB, dA, dB)
    value = np.inf
    for _ in range(sweeps):
        Mb = np.einsum("i,ijkl,k->jl", a.conj(), W4, a)
        w, V = np.linalg.eigh((Mb + Mb.conj().T) / 2)
        b = V[:, 0]
        Ma = np.einsum("j,ijkl,l->ik", b.conj(), W4, b)
        w, V = np.linalg.eigh((Ma + Ma.conj().T) / 2)
        a = V[:, 0]
        if abs(value - w[0]) <= REL_CONV * max(1.0, abs(w[0])):
            value = w[0]
            break
        value = w[0]
    return float(value), a, b


# -- simplex maximization for diagonal-type criteria -------------------------

def project_simplex(v):
    """Euclidean projection of each row of v onto the probability simplex."""
    v = np.atleast_2d(v)
    n = v.shape[1]
    u = -np.sort(-v, axis=1)
    css = np.cumsum(u, axis=1) - 1
    ind = np.arange(1, n + 1)
    cond = u - css / ind > 0
    rho = n - 1 - np.argmax(cond[:, ::-1], axis=1)
    theta = css[np.arange(len(v)), rho] / (rho + 1)
    return np.maximum(v - theta[:, None], 0.0)


def maximize_on_simplex(f, grad, d, rng, starts=32, iters=2000, tol=1e-14):
    """Projected-gradient ascent with backtracking from Dirichlet-random starts.

    ``f`` and ``grad`` act row-wise on an (n, d) batch.  Returns (best value, point).
    """
    T = rng.dirichlet(np.ones(d), size=starts)
    T = np.vstack([T, np.full((1, d), 1.0 / d), np.eye(d)])
    F = f(T)
    step = np.full(len(T), 0.5)
    for _ in range(iters):
        G = grad(T)
        trial = project_simplex(T + step[:, None] * G)
        Ft = f(trial)
        better = Ft > F + tol
        T = np.where(better[:, None], trial, T)
        gain = np.where(better, Ft - F, 0.0)
        F = np.where(better, Ft, F)
        step = np.where(better, np.minimum(step * 1.5, 10.0), step * 0.5)
        if np.all((gain <= tol) & (step < 1e-12)):
            break
    i = int(np.argmax(F))
    return float(F[i]), T[i]
