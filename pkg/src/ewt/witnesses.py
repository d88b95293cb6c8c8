"""Constructors for entanglement witnesses and their known analytic properties.

Witnesses are returned unnormalized, exactly as usually displayed; the SPA
routine normalizes internally.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import maps
from .linalg import flip, k_norm, kron, operator_schmidt, partial_transpose, proj
from .optimize import make_rng, maximize_on_simplex, min_schmidt_k_expectation
from .states import max_entangled, max_entangled_projector, weyl_operator, w_state, ghz_state

HERMITIAN_TOL = 1e-10
NO_SUBTRACTION_TOL = 1e-9
SIMPLEX_TOL = 1e-9
ABC_TOL = 1e-12  # slack for the non-strict inequalities on exact boundary points


def flip_witness(d):
    """F (psi (x) phi) = phi (x) psi."""
    if d < 2:
        raise ValueError("flip_witness requires d >= 2")
    return flip(d)


def reduction_witness(d):
    """I (x) I - d P^+_d, the Choi matrix of the reduction map."""
    if d < 2:
        raise ValueError("reduction_witness requires d >= 2")
    return np.eye(d * d, dtype=complex) - d * max_entangled_projector(d)


# -- diagonal-type witnesses --------------------------------------------------

def _check_A(A, allow_negative=False):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("A must be a square matrix")
    if not allow_negative and np.any(A < 0):
        raise ValueError("A must be entrywise nonnegative")
    return A


def diagonal_type_witness(A, allow_negative=False):
    """W[A] = sum_i E_ii (x) (sum_k a_ik E_kk) - sum_{i != j} E_ij (x) E_ij.

    Negative entries are rejected unless ``allow_negative`` is set; such
    operators are never block-positive but are useful as grid points.
    """
    A = _check_A(A, allow_negative)
    d = A.shape[0]
    W = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for k in range(d):
            W[i * d + k, i * d + k] = A[i, k]
        for j in range(d):
            if i != j:
                W[i * d + i, j * d + j] = -1.0
    return W


def positivity_matrix(A):
    """D with D_ii = a_ii, D_ij = -1: W[A] >= 0 iff D >= 0."""
    A = _check_A(A)
    D = -np.ones_like(A)
    np.fill_diagonal(D, np.diag(A))
    return D


def diagonal_type_is_positive(A, tol=1e-12):
    return float(np.linalg.eigvalsh(positivity_matrix(A))[0]) >= -tol


def _simplex_objective(A):
    """f(t) = sum_i t_i / B_i(t), B_i = t_i + sum_j a_ij t_j, and its gradient.

    Where t_i = B_i = 0 the term takes its supremum limit 1/(1 + a_ii).
    """
    Ad = np.diag(A)
    M = A + np.eye(len(A))

    def f(T):
        B = T @ M.T
        safe = B > 1e-300
        terms = np.where(safe, T / np.where(safe, B, 1.0), 1.0 / (1.0 + Ad))
        return terms.sum(axis=1)

    def grad(T):
        B = np.maximum(T @ M.T, 1e-15)
        return 1.0 / B - (T / B**2) @ M

    return f, grad


@dataclass
class SimplexCriterion:
    block_positive: bool
    max_value: float  # sup over the simplex of sum_i t_i / B_i
    argmax: np.ndarray
    seed: int


def diagonal_type_block_positive(A, seed=0, starts=32, tol=SIMPLEX_TOL):
    """Block-positivity of W[A] through sup_t sum_i t_i/B_i(t) <= 1 on the simplex.

    Only the moduli t_i = |x_i|^2 matter, so the search runs over the
    probability simplex with projected-gradient multistart.
    """
    A = _check_A(A)
    f, grad = _simplex_objective(A)
    value, t = maximize_on_simplex(f, grad, A.shape[0], make_rng(seed), starts=starts)
    return SimplexCriterion(value <= 1 + tol, value, t, seed)


def circulant_matrix(alphas):
    """a_ij = alpha_{(j - i) mod d}; first row is (alpha_0, ..., alpha_{d-1})."""
    alphas = np.asarray(alphas, dtype=float)
    d = len(alphas)
    idx = (np.arange(d)[None, :] - np.arange(d)[:, None]) % d
    return alphas[idx]


def w_abc(a, b, c):
    """Generalized Choi witness W[a,b,c] on C^3 (x) C^3 (any real parameters)."""
    return diagonal_type_witness(circulant_matrix([a, b, c]), allow_negative=True)


def w_ab(a, b):
    """Two-qubit circulant witness W[a,b]; an EW iff a < 1 and a + b >= 1."""
    return diagonal_type_witness(circulant_matrix([a, b]))


@dataclass(frozen=True)
class WAbcClassification:
    is_positive: bool
    is_ew: bool
    is_indecomposable: bool
    is_3_schmidt: bool
    violated_condition: str | None = None

    @property
    def is_block_positive(self):
        return self.is_positive or self.is_ew


def classify_w_abc(a, b, c):
    """Exact classification of W[a,b,c] for a, b, c >= 0.

    EW iff 0 <= a < 2, a + b + c >= 2 and (a <= 1 implies bc >= (1-a)^2);
    an EW is indecomposable iff 4bc < (2-a)^2 and a 3-Schmidt witness iff
    2 > a >= 1 and bc >= (2-a)(b+c).  W >= 0 iff a >= 2.  Non-strict
    inequalities are evaluated with slack ABC_TOL so that grid points built
    as a = 2 - b - c in floating point land on the correct side.
    """
    t = ABC_TOL
    if min(a, b, c) < 0:
        raise ValueError("classify_w_abc requires a, b, c >= 0")
    positive = a >= 2 - t
    violated = None
    if not a < 2 - t:
        violated = "a < 2"
    elif a + b + c < 2 - t:
        violated = "a + b + c >= 2"
    elif a <= 1 + t and b * c < (1 - a) ** 2 - t:
        violated = "bc >= (1 - a)^2 when a <= 1"
    ew = violated is None
    indecomposable = ew and 4 * b * c < (2 - a) ** 2 - t
    three_schmidt = ew and 1 - t <= a and b * c >= (2 - a) * (b + c) - t
    return WAbcClassification(positive, ew, indecomposable, three_schmidt, violated)


def w_abc_block_positive(a, b, c):
    """Block-positivity of W[a,b,c] for any real a, b, c.

    A negative parameter puts a negative entry on the diagonal, which a
    product basis vector detects.
    """
    if min(a, b, c) < 0:
        return False
    return classify_w_abc(a, b, c).is_block_positive


def traceless_diagonal_generators(d):
    """Diagonals of the traceless generators F_l = (sum_{k<=l} E_kk - l E_{l+1,l+1}) / sqrt(l(l+1))."""
    F = np.zeros((d - 1, d))
    for l in range(1, d):
        F[l - 1, :l] = 1.0
        F[l - 1, l] = -l
        F[l - 1] /= np.sqrt(l * (l + 1))
    return F


def kossakowski_matrix(d, R):
    """a_ij = (d-1)/d + sum_ab <i|F_a|i> R_ab <j|F_b|j> for an orthogonal (d-1) x (d-1) R."""
    R = np.asarray(R, dtype=float)
    if R.shape != (d - 1, d - 1) or np.abs(R @ R.T - np.eye(d - 1)).max() > 1e-10:
        raise ValueError("R must be a (d-1) x (d-1) orthogonal matrix")
    F = traceless_diagonal_generators(d)
    A = (d - 1) / d + F.T @ R @ F
    return np.where(np.abs(A) < 1e-14, 0.0, A)


def rotation(alpha):
    return np.array([[np.cos(alpha), -np.sin(alpha)], [np.sin(alpha), np.cos(alpha)]])


def kossakowski_abc(alpha):
    """Boundary parametrization (a, b, c) of W[a,b,c] with bc = (1-a)^2."""
    a = 2 / 3 * (1 + np.cos(alpha))
    b = 2 / 3 * (1 - np.cos(alpha) / 2 - np.sqrt(3) / 2 * np.sin(alpha))
    c = 2 / 3 * (1 - np.cos(alpha) / 2 + np.sqrt(3) / 2 * np.sin(alpha))
    return a, b, c


def w_dk_alphas(d, k):
    if not 1 <= k <= d:
        raise ValueError(f"k must lie in [1, {d}], got {k}")
    alphas = np.zeros(d)
    alphas[0] = d - k
    alphas[1:k] = 1.0
    return alphas


def w_dk(d, k):
    """Choi-like W_{d,k}: circulant with alpha_0 = d-k, alpha_1..alpha_{k-1} = 1, rest 0."""
    return diagonal_type_witness(circulant_matrix(w_dk_alphas(d, k)))


def w_dk_bell_form(d, k):
    """(d+1-k) Pi_0 + sum_{l=1}^{k-1} Pi_l - d P_00, assembled on the Bell basis."""
    from .states import subspace_projector

    W = (d + 1 - k) * subspace_projector(d, 0) - d * max_entangled_projector(d)
    for l in range(1, k):
        W = W + subspace_projector(d, l)
    return W


# -- Bell-diagonal, CHSH, MUB, realignment -------------------------------------

def bell_diagonal_witness(c, a=1.0, require_block_positive=False):
    """W = a((d-1) I + sum_{k+l>0} c_kl U_kl (x) U_{-k,l}); c_00 is ignored."""
    c = np.asarray(c, dtype=complex)
    d = c.shape[0]
    if c.shape != (d, d):
        raise ValueError("c must be a square d x d array")
    if a <= 0:
        raise ValueError("a must be positive")
    if require_block_positive and np.abs(c).max() > 1 + 1e-12:
        raise ValueError("|c_kl| <= 1 is required for the block-positivity guarantee")
    W = (d - 1) * np.eye(d * d, dtype=complex)
    for k in range(d):
        for l in range(d):
            if k + l > 0:
                W = W + c[k, l] * kron(weyl_operator(d, k, l), weyl_operator(d, -k, l))
    W = a * W
    if np.abs(W - W.conj().T).max() > HERMITIAN_TOL:
        raise ValueError("coefficients c do not define a Hermitian operator")
    return (W + W.conj().T) / 2


PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def bloch_operator(n):
    return sum(x * s for x, s in zip(n, PAULI))


def chsh_witness(a1, a2, b1, b2):
    """2 I - [a1.sigma (x) (b1+b2).sigma + a2.sigma (x) (b1-b2).sigma] for unit Bloch vectors."""
    vecs = [np.asarray(v, dtype=float) for v in (a1, a2, b1, b2)]
    for v in vecs:
        if v.shape != (3,) or abs(np.linalg.norm(v) - 1) > 1e-10:
            raise ValueError("CHSH settings must be real unit 3-vectors")
    a1, a2, b1, b2 = vecs
    B = kron(bloch_operator(a1), bloch_operator(b1 + b2)) + kron(bloch_operator(a2), bloch_operator(b1 - b2))
    return 2 * np.eye(4, dtype=complex) - B


def qubit_mubs():
    """Eigenbases of sigma_3, sigma_1, sigma_2 as unitary matrices (columns are vectors)."""
    s = 1 / np.sqrt(2)
    return [
        np.eye(2, dtype=complex),
        s * np.array([[1, 1], [1, -1]], dtype=complex),
        s * np.array([[1, 1], [1j, -1j]], dtype=complex),
    ]


def _check_mub(bases, d, tol=1e-9):
    for B in bases:
        if B.shape != (d, d) or np.abs(B.conj().T @ B - np.eye(d)).max() > tol:
            raise ValueError("each basis must be an orthonormal d x d column set")
    for i in range(len(bases)):
        for j in range(i + 1, len(bases)):
            if np.abs(np.abs(bases[i].conj().T @ bases[j]) ** 2 - 1 / d).max() > tol:
                raise ValueError("bases are not mutually unbiased")


def mub_witness(bases, tilde_bases, m=None):
    """W_m = (1 + (m-1)/d) I - sum_{alpha<=m} sum_i |e_i><e_i| (x) |f_i><f_i|."""
    bases = [np.asarray(B, dtype=complex) for B in bases]
    tilde_bases = [np.asarray(B, dtype=complex) for B in tilde_bases]
    d = bases[0].shape[0]
    m = len(bases) if m is None else m
    if not 1 <= m <= min(d + 1, len(bases), len(tilde_bases)):
        raise ValueError(f"m must lie in [1, {d + 1}] and not exceed the number of bases")
    bases, tilde_bases = bases[:m], tilde_bases[:m]
    _check_mub(bases, d)
    _check_mub(tilde_bases, d)
    S = sum(kron(proj(E[:, i]), proj(Fb[:, i])) for E, Fb in zip(bases, tilde_bases) for i in range(d))
    return (1 + (m - 1) / d) * np.eye(d * d, dtype=complex) - S


@dataclass
class RealignmentWitness:
    W: np.ndarray
    schmidt_sum: float
    status: str  # "detecting" | "not_detecting"


def realignment_witness(rho, dims):
    """W = I - sum_k G^A_k (x) G^B_k from the operator Schmidt form of rho."""
    rho = np.asarray(rho, dtype=complex)
    if np.abs(rho - rho.conj().T).max() > HERMITIAN_TOL:
        raise ValueError("rho must be Hermitian")
    if abs(np.trace(rho).real - 1) > 1e-8:
        raise ValueError("rho must have unit trace")
    lam, GA, GB = operator_schmidt(rho, dims)
    W = np.eye(dims[0] * dims[1], dtype=complex) - sum(kron(a, b) for a, b in zip(GA, GB))
    total = float(lam.sum())
    return RealignmentWitness(W, total, "detecting" if total > 1 + 1e-9 else "not_detecting")


# -- spectral construction ------------------------------------------------------

@dataclass
class SpectralWitnessSpec:
    """Orthonormal vectors psi_alpha (rows), weights lambda_alpha >= 0, split L and target k.

    W = sum_{alpha>L} lambda_alpha P_alpha - sum_{alpha<=L} lambda_alpha P_alpha.
    """

    vectors: np.ndarray
    eigenvalues: np.ndarray
    L: int
    k: int
    dims: tuple

    def __post_init__(self):
        self.vectors = np.asarray(self.vectors, dtype=complex)
        self.eigenvalues = np.asarray(self.eigenvalues, dtype=float)
        D = self.dims[0] * self.dims[1]
        if self.vectors.shape != (D, D):
            raise ValueError("vectors must form a complete orthonormal set of D rows")
        if np.abs(self.vectors.conj() @ self.vectors.T - np.eye(D)).max() > 1e-10:
            raise ValueError("vectors must be orthonormal")
        if np.any(self.eigenvalues < 0):
            raise ValueError("eigenvalues must be nonnegative")
        if np.any(self.eigenvalues[self.L:] <= 0):
            raise ValueError("eigenvalues beyond the split must be positive")
        if not 1 <= self.k <= min(self.dims):
            raise ValueError(f"k must lie in [1, {min(self.dims)}]")


@dataclass
class SpectralVerdict:
    mu: dict  # l -> mu_l (inf when the denominator vanishes)
    t1: bool  # lambda_alpha >= mu_k for alpha > L: W is k-block-positive
    t2: bool  # mu_{k+1} > lambda_alpha for alpha > L: W is a (k+1)-Schmidt witness
    t2_by_negativity: bool = False
    notes: list = field(default_factory=list)

    k: int = 1

    @property
    def schmidt_witness_order(self):
        """k+1 when both conditions hold, else None."""
        return self.k + 1 if (self.t1 and self.t2) else None


def _mu(spec, l):
    norms = np.array([k_norm(v, spec.dims, l) for v in spec.vectors[: spec.L]])
    denom = 1 - norms.sum()
    if denom <= 1e-14:
        return np.inf
    return float(spec.eigenvalues[: spec.L] @ norms / denom)


def spectral_k_schmidt_witness(spec):
    """Build W from the spectral data and evaluate the two sufficient conditions.

    (T1) lambda_alpha >= mu_k for all alpha > L gives k-block-positivity.
    (T2) mu_{k+1} > lambda_alpha for all alpha > L makes W a (k+1)-Schmidt
    witness.  When sum ||psi_alpha||^2_{k+1} = 1 (for instance k+1 = d with a
    maximally entangled psi) mu_{k+1} is undefined; then k+1 = min(dims) and
    a negative eigenvalue alone rules out (k+1)-block-positivity.
    """
    k, L = spec.k, spec.L
    sums = {l: sum(k_norm(v, spec.dims, l) for v in spec.vectors[:L]) for l in range(1, min(spec.dims) + 1)}
    if sums[k] >= 1:
        raise ValueError(f"sum_alpha ||psi_alpha||_k^2 = {sums[k]:.6g} must be < 1")
    lam = spec.eigenvalues
    signs = np.where(np.arange(len(lam)) < L, -1.0, 1.0)
    W = (spec.vectors.T * (signs * lam)) @ spec.vectors.conj()
    mu = {l: _mu(spec, l) for l in sums}
    rest = lam[L:]
    t1 = bool(np.all(rest >= mu[k] - 1e-12))
    t2, by_neg, notes = False, False, []
    if k + 1 <= min(spec.dims):
        if sums[k + 1] < 1:
            t2 = bool(np.all(mu[k + 1] > rest + 1e-12))
        elif k + 1 == min(spec.dims):
            t2 = by_neg = bool(np.any(lam[:L] > 1e-12))
            notes.append("mu_{k+1} undefined; (k+1)-Schmidt status from the negative eigenvalue")
    return W, SpectralVerdict(mu, t1, t2, by_neg, notes, k)


def max_entangled_spectral_spec(d, lam1, k, negative=True):
    """Spec with psi_1 = psi^+_d carrying weight lam1 and all other weights 1.

    With ``negative=False`` psi_1 sits in the positive part (split L = 0).
    """
    from .states import bell_state

    vecs = [bell_state(d, m, n) for m in range(d) for n in range(d)]
    vals = np.ones(d * d)
    vals[0] = lam1
    return SpectralWitnessSpec(np.array(vecs), vals, 1 if negative else 0, k, (d, d))


def reduction_spectral_spec(d, k=1):
    return max_entangled_spectral_spec(d, d - 1, k)


def phi_p_spectral_spec(d, p):
    """Spectral data of I - p d P^+_d, the Choi matrix of Phi_p, targeting its positivity index."""
    _, k = maps.phi_p(d, p)
    lam1 = p * d - 1
    return max_entangled_spectral_spec(d, abs(lam1), max(k, 1), negative=lam1 >= 0)


# -- optimization-backed constructions -----------------------------------------

@dataclass
class EdgeWitness:
    W: np.ndarray
    epsilon: float
    status: str  # "ok" | "no_subtraction"
    mode: str
    seed: int
    product_min_after: float | None = None


def edge_steered_witness(P, Q, dims, mode="identity", psi=None, seed=0, restarts=None):
    """Subtract the product-vector infimum eps of P + Q^Gamma.

    mode="identity": W = P + Q^Gamma - eps I.
    mode="upb":      W = P + Q^Gamma - eps d |Psi><Psi| with Psi maximally
                     entangled (psi^+_d unless ``psi`` is given).
    eps is estimated by the product minimizer; the returned witness is
    re-checked and its product minimum recorded.
    """
    D = dims[0] * dims[1]
    P = np.zeros((D, D), dtype=complex) if P is None else np.asarray(P, dtype=complex)
    Q = np.zeros((D, D), dtype=complex) if Q is None else np.asarray(Q, dtype=complex)
    if not np.any(P) and not np.any(Q):
        raise ValueError("P and Q are both zero")
    for name, X in (("P", P), ("Q", Q)):
        if np.abs(X - X.conj().T).max() > HERMITIAN_TOL or np.linalg.eigvalsh(X)[0] < -1e-10:
            raise ValueError(f"{name} must be positive semidefinite")
    base = P + partial_transpose(Q, dims)
    eps = min_schmidt_k_expectation(base, dims, 1, seed=seed, restarts=restarts).min_value
    if eps <= NO_SUBTRACTION_TOL:
        return EdgeWitness(base, max(eps, 0.0), "no_subtraction", mode, seed)
    if mode == "identity":
        W = base - eps * np.eye(D)
    elif mode == "upb":
        if dims[0] != dims[1]:
            raise ValueError("upb mode needs d_A = d_B")
        d = dims[0]
        psi = max_entangled(d) if psi is None else np.asarray(psi, dtype=complex)
        W = base - eps * d * proj(psi)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    after = min_schmidt_k_expectation(W, dims, 1, seed=seed + 1, restarts=restarts).min_value
    return EdgeWitness(W, eps, "ok", mode, seed, after)


def three_qubit_witnesses():
    """(W, W', W'') = (I - 3/2 |W><W|, I - 9/4 |W><W|, I - 4/3 |GHZ><GHZ|) on C^8."""
    I = np.eye(8, dtype=complex)
    PW, PG = proj(w_state()), proj(ghz_state())
    return I - 1.5 * PW, I - 2.25 * PW, I - (4 / 3) * PG


# -- Breuer-Hall family ----------------------------------------------------------

def robertson_breuer_hall(N, U=None, variant="breuer_hall", z=None):
    """Return (map, Choi witness) for the Breuer-Hall family and its relatives.

    variant "breuer_hall" uses the antisymmetric unitary U (default U_0 =
    i I_N (x) sigma_2) on M_2N; "block_2xN" is the 2 x 2 block map with N x N
    blocks; "z_deformed" uses N blocks of size 2 with phases z.
    """
    if variant == "breuer_hall":
        M = maps.breuer_hall_map(maps.standard_antisymmetric_unitary(N) if U is None else U)
    elif variant == "block_2xN":
        M = maps.block_reduction_map(N)
    elif variant == "z_deformed":
        M = maps.z_deformed_map(N, -1.0 if z is None else z)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    if not (maps.is_unital(M) and maps.is_trace_preserving(M)):
        raise AssertionError("map is expected to be unital and trace-preserving")
    return M, M.choi_matrix()
