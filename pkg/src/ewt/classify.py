"""Numerical classification of witnesses and detection of entangled states."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import witnesses as wit
from .linalg import flip, partial_transpose, realign
from .optimize import CERT_TOL, make_rng, min_schmidt_k_expectation, seesaw_batch
from .states import max_entangled_projector

PPT_TOL = 1e-10
CCNR_TOL = 1e-9
ZERO_TOL = 1e-8
NULL_TOL = 1e-10
SPAN_RTOL = 1e-8
SPA_NOTE_POSITIVE = "W is positive semidefinite; p* = 1"


class DimensionMismatch(ValueError):
    pass


class AnalyticMismatchWarning(UserWarning):
    """Numerical result contradicts an analytic criterion for the same operator."""


def _hermitian(W, name="W"):
    W = np.asarray(W, dtype=complex)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise ValueError(f"{name} must be a square matrix")
    if np.abs(W - W.conj().T).max(initial=0.0) > 1e-10:
        raise ValueError(f"{name} must be Hermitian")
    return W


# -- block-positivity ------------------------------------------------------------

@dataclass
class BlockPositivity:
    k: int
    verdict: str  # "yes_heuristic" | "no_certified" | "yes_analytic" | "no_analytic"
    min_value: float
    vector: np.ndarray = field(repr=False)
    analytic: bool | None = None
    seed: int = 0

    @property
    def holds(self):
        return self.verdict.startswith("yes")


def is_k_block_positive(W, dims, k=1, seed=0, restarts=None, analytic=None, cert_tol=CERT_TOL):
    """k-block-positivity of W: a certified violation means "no", otherwise "yes" heuristically.

    ``analytic`` is an exact answer known from a family criterion; it upgrades
    the verdict and a contradiction emits AnalyticMismatchWarning.
    """
    r = min_schmidt_k_expectation(W, dims, k, seed=seed, restarts=restarts, cert_tol=cert_tol)
    numeric = not r.certified_negative
    verdict = "yes_heuristic" if numeric else "no_certified"
    if analytic is not None:
        if bool(analytic) != numeric:
            warnings.warn(
                f"k={k}: analytic block-positivity {analytic} but optimizer found min {r.min_value:.3e}",
                AnalyticMismatchWarning,
                stacklevel=2,
            )
        verdict = "yes_analytic" if analytic else "no_analytic"
    return BlockPositivity(k, verdict, r.min_value, r.vector, analytic, seed)


# -- state criteria -----------------------------------------------------------------

def ppt_check(X, dims, tol=PPT_TOL):
    """(is_ppt, smallest eigenvalue of X^Gamma)."""
    X = _hermitian(X, "X")
    lam = float(np.linalg.eigvalsh(partial_transpose(X, dims))[0])
    return lam >= -tol, lam


def realignment_check(rho, dims, tol=CCNR_TOL):
    """(trace norm of the realigned matrix, flagged entangled)."""
    rho = _hermitian(rho, "rho")
    total = float(np.linalg.svd(realign(rho, dims), compute_uv=False).sum())
    return total, total > 1 + tol


def detect(W, rho):
    """tr(W rho); negative means rho is detected as entangled."""
    W, rho = np.asarray(W), np.asarray(rho)
    if W.shape != rho.shape:
        raise DimensionMismatch(f"witness {W.shape} and state {rho.shape} differ in dimension")
    return float(np.real(np.trace(W @ rho)))


# -- spanning dimension -----------------------------------------------------------

def _null_sample(M, rng, tol):
    w, V = np.linalg.eigh((M + M.conj().T) / 2)
    N = V[:, w <= w[0] + tol]
    z = rng.normal(size=N.shape[1]) + 1j * rng.normal(size=N.shape[1])
    v = N @ z
    return v / np.linalg.norm(v)


def zero_product_vectors(W, dims, seed=0, max_restarts=200, batch=25, walk=3, zero_tol=ZERO_TOL):
    """Product vectors a (x) b with <ab|W|ab> <= zero_tol.

    Every converged see-saw run is moved a few steps through the exact null
    spaces of the partial contractions, which spreads samples over the zero
    set instead of repeating the optimizer's preferred points.
    """
    dA, dB = dims
    W = _hermitian(W)
    W4 = W.reshape(dA, dB, dA, dB)
    scale = max(1.0, float(np.abs(W).max()))
    rng = make_rng(seed)
    target = 5 * dA * dB
    found, used = [], 0
    while used < max_restarts and len(found) < target:
        n = min(batch, max_restarts - used)
        values, Psi, _ = seesaw_batch(W, dims, 1, rng, n, sweep_cap=500, rel_conv=0.0)
        used += n
        for v, P in zip(values, Psi):
            if v > zero_tol:
                continue
            U, _, Vh = np.linalg.svd(P)
            a, b = U[:, 0], Vh[0]
            for _ in range(walk):
                a = _null_sample(np.einsum("j,ijkl,l->ik", b.conj(), W4, b), rng, NULL_TOL * scale)
                b = _null_sample(np.einsum("i,ijkl,k->jl", a.conj(), W4, a), rng, NULL_TOL * scale)
            x = np.kron(a, b)
            if np.real(x.conj() @ W @ x) <= zero_tol:
                found.append(x)
    return np.array(found).reshape(len(found), dA * dB)


def spanning_dimension(W, dims, seed=0, **kwargs):
    """Numerical rank of the span of harvested zero product vectors.

    d_A d_B means the spanning property holds, which certifies optimality.
    """
    V = zero_product_vectors(W, dims, seed=seed, **kwargs)
    if len(V) == 0:
        return 0
    s = np.linalg.svd(V, compute_uv=False)
    return int(np.sum(s > SPAN_RTOL * s[0]))


# -- structural physical approximation ---------------------------------------------

@dataclass
class SPAResult:
    p_star: float
    state: np.ndarray = field(repr=False)
    ppt: tuple
    ccnr: tuple
    note: str = ""


def spa(W, dims):
    """W(p) = p W/tr W + (1-p) I/D at the largest p keeping it positive.

    p* = 1 / (1 - D lambda_min(W/tr W)); the state W(p*) is screened with the
    PPT and realignment criteria.
    """
    W = _hermitian(W)
    D = W.shape[0]
    tr = float(np.trace(W).real)
    if tr <= 0:
        raise ValueError("SPA requires tr W > 0")
    Wh = W / tr
    lam = float(np.linalg.eigvalsh(Wh)[0])
    if lam >= 0:
        p, note = 1.0, SPA_NOTE_POSITIVE
    else:
        p, note = 1.0 / (1.0 - D * lam), ""
    state = p * Wh + (1 - p) * np.eye(D) / D
    return SPAResult(p, state, ppt_check(state, dims), realignment_check(state, dims), note)


# -- decomposability ---------------------------------------------------------------------

def _verified_decomposition(W, dims, A, B, tol=1e-9):
    A, B = np.asarray(A, dtype=complex), np.asarray(B, dtype=complex)
    ok = np.abs(A + partial_transpose(B, dims) - W).max() <= tol
    return ok and np.linalg.eigvalsh(A)[0] >= -tol and np.linalg.eigvalsh(B)[0] >= -tol


def known_decomposition(meta):
    """Explicit W = A + B^Gamma for families that have one."""
    fam, p = meta.get("family"), meta.get("params", {})
    if fam == "flip":
        d = int(p["d"])
        return np.zeros((d * d, d * d)), d * max_entangled_projector(d)
    if fam == "reduction":
        d = int(p["d"])
        # I - d P^+ = (I - F)^Gamma with I - F = 2 Q_A >= 0
        return np.zeros((d * d, d * d)), np.eye(d * d) - flip(d)
    return None


def decomposability_verdict(W, dims, meta=None):
    """yes_analytic / no_analytic / unknown from family knowledge or explicit data.

    Recognized metadata: a family name with parameters, an explicit
    ``decomposition`` (A, B), or a ``ppt_state`` detected by W (which
    rules decomposability out).
    """
    meta = meta or {}
    W = np.asarray(W, dtype=complex)
    if "decomposition" in meta:
        A, B = meta["decomposition"]
        if _verified_decomposition(W, dims, A, B):
            return "yes_analytic"
    if "ppt_state" in meta:
        rho = np.asarray(meta["ppt_state"])
        if ppt_check(rho, dims)[0] and detect(W, rho) < -CERT_TOL:
            return "no_analytic"
    if np.linalg.eigvalsh(W)[0] >= -1e-12:
        return "yes_analytic"
    fam, p = meta.get("family"), meta.get("params", {})
    dec = known_decomposition(meta)
    if dec is not None and _verified_decomposition(W, dims, *dec):
        return "yes_analytic"
    if fam == "w_abc":
        a, b, c = (float(p[x]) for x in "abc")
        if not wit.w_abc_block_positive(a, b, c):
            return "no_analytic"
        return "no_analytic" if wit.classify_w_abc(a, b, c).is_indecomposable else "yes_analytic"
    if fam == "phi_p":
        # a spectral construction: decomposable while block-positive (p <= 1)
        return "yes_analytic" if float(p["p"]) <= 1 else "no_analytic"
    if fam == "spectral":
        return "yes_analytic" if meta.get("t1") else "unknown"
    if fam == "w_dk":
        d, k = int(p["d"]), int(p["k"])
        return "yes_analytic" if k in (1, d) else "no_analytic"
    if fam in ("breuer_hall", "robertson", "block_2xN"):
        return "no_analytic"
    if fam == "z_deformed":
        z = np.atleast_1d(np.asarray(p.get("z", -1.0), dtype=complex))
        if np.all(np.isclose(np.abs(z[~np.eye(len(z), dtype=bool)] if z.ndim == 2 else z), 1.0)):
            return "no_analytic"
        return "unknown"
    if dims[0] * dims[1] <= 6 and meta.get("block_positive", fam in ("w_ab", "bell_diagonal", "mub", "chsh")):
        # in 2x2 and 2x3 every block-positive operator is decomposable
        return "yes_analytic"
    return "unknown"


# -- full report -------------------------------------------------------------------------

@dataclass
class WitnessReport:
    dims: tuple
    is_positive_operator: bool
    min_eigenvalue: float
    block_positive_k: dict
    min_values_k: dict
    is_witness: bool
    schmidt_witness_order: int | None
    detected_examples: list
    spanning_dim: int
    spanning_dim_pt: int | None
    spa_p_star: float
    spa_ppt: bool
    spa_ccnr_sum: float
    decomposable: str
    seed: int
    restarts: int
    family: str | None = None
    analytic: dict = field(default_factory=dict)

    def to_dict(self):
        out = {}
        for key, val in self.__dict__.items():
            if isinstance(val, tuple):
                val = list(val)
            if isinstance(val, dict):
                val = {str(k): v for k, v in val.items()}
            out[key] = val
        return out


def family_analytics(meta):
    """Exact facts known for a catalog family, keyed by name."""
    meta = meta or {}
    fam, p = meta.get("family"), meta.get("params", {})
    if fam == "w_abc":
        a, b, c = (float(p[x]) for x in "abc")
        bp = wit.w_abc_block_positive(a, b, c)
        out = {"block_positive": bp}
        if min(a, b, c) >= 0:
            cl = wit.classify_w_abc(a, b, c)
            out.update(is_positive=cl.is_positive, is_ew=cl.is_ew,
                       is_indecomposable=cl.is_indecomposable, is_3_schmidt=cl.is_3_schmidt,
                       violated_condition=cl.violated_condition)
        return out
    if fam in ("flip", "reduction", "mub", "chsh", "realignment", "breuer_hall", "robertson",
               "block_2xN", "z_deformed", "w_dk", "kossakowski"):
        return {"block_positive": True}
    if fam == "w_ab":
        a, b = float(p["a"]), float(p["b"])
        return {"block_positive": a >= 0 and b >= 0 and a + b >= 1 - 1e-12,
                "is_ew": 0 <= a < 1 and a + b >= 1 - 1e-12}
    if fam == "bell_diagonal" and meta.get("max_abs_c", 2.0) <= 1 + 1e-12:
        return {"block_positive": True}
    if fam == "phi_p":
        return {"block_positive": float(p["p"]) <= 1}
    return {}


def classify_witness(W, dims, seed=0, restarts=None, meta=None, states=None, spanning=True,
                     cert_tol=CERT_TOL):
    """Collect positivity, per-k block-positivity, SPA, spanning and decomposability data."""
    W = _hermitian(W)
    meta = meta or {}
    analytic = family_analytics(meta)
    lam = float(np.linalg.eigvalsh(W)[0])
    positive = lam >= -1e-12
    bp, mins = {}, {}
    for k in range(1, min(dims) + 1):
        if positive:
            bp[k], mins[k] = "yes_analytic", None
            continue
        known = analytic.get("block_positive") if k == 1 else None
        r = is_k_block_positive(W, dims, k, seed=seed, restarts=restarts, analytic=known,
                                cert_tol=cert_tol)
        bp[k], mins[k] = r.verdict, r.min_value
    order = None
    if not positive:
        fails = [k for k in bp if bp[k].startswith("no")]
        order = min(fails) if fails else None
    is_witness = (not positive) and bp[1].startswith("yes")
    detected = []
    for name, rho in (states or {}).items():
        val = detect(W, rho)
        if val < -cert_tol:
            detected.append({"state": name, "trace": val})
    span = spanning_dimension(W, dims, seed=seed) if (spanning and is_witness) else 0
    span_pt = None
    if spanning and is_witness:
        WG = partial_transpose(W, dims)
        if not np.linalg.eigvalsh(WG)[0] >= -1e-12:
            span_pt = spanning_dimension(WG, dims, seed=seed)
    s = spa(W, dims) if np.trace(W).real > 0 else None
    return WitnessReport(
        dims=tuple(dims),
        is_positive_operator=positive,
        min_eigenvalue=lam,
        block_positive_k=bp,
        min_values_k=mins,
        is_witness=is_witness,
        schmidt_witness_order=order,
        detected_examples=detected,
        spanning_dim=span,
        spanning_dim_pt=span_pt,
        spa_p_star=None if s is None else s.p_star,
        spa_ppt=None if s is None else bool(s.ppt[0]),
        spa_ccnr_sum=None if s is None else s.ccnr[0],
        decomposable=decomposability_verdict(W, dims, meta),
        seed=seed,
        restarts=restarts if restarts is not None else 50 * max(dims),
        family=meta.get("family"),
        analytic=analytic,
    )


# -- brute-force oracle for two qubits --------------------------------------------

def fibonacci_sphere(n):
    i = np.arange(n) + 0.5
    z = 1 - 2 * i / n
    r = np.sqrt(1 - z**2)
    phi = np.pi * (1 + 5**0.5) * i
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def bloch_grid_min(W, n=10_000, chunk=1000):
    """Minimum of <ab|W|ab> over a Fibonacci grid of n Bloch vectors per qubit.

    Uses <ab|W|ab> = (1/4) sum_{mu,nu} T_{mu nu} r_mu s_nu with r = (1, n_a),
    s = (1, n_b) and T_{mu nu} = tr[W sigma_mu (x) sigma_nu].
    """
    W = _hermitian(W)
    if W.shape != (4, 4):
        raise ValueError("bloch_grid_min works on 2 x 2 systems only")
    sig = (np.eye(2, dtype=complex),) + wit.PAULI
    T = np.array([[np.trace(W @ np.kron(a, b)).real for b in sig] for a in sig])
    pts = np.hstack([np.ones((n, 1)), fibonacci_sphere(n)])
    left = pts @ T / 4  # (n, 4)
    best = np.inf
    for s in range(0, n, chunk):
        vals = left[s:s + chunk] @ pts.T
        best = min(best, float(vals.min()))
    return best
