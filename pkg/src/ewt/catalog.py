"""Named constructors with typed parameters, used by the command line."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import maps, states, witnesses as wit
from .linalg import proj


@dataclass(frozen=True)
class Family:
    kind: str
    params: dict  # name -> (type, default or None when required)
    build: callable
    doc: str = ""


def _w_abc(a, b, c):
    return wit.w_abc(a, b, c), (3, 3), {}


def _bell_diagonal(d, a, c01, c10, c11):
    if d != 2:
        raise ValueError("the command-line bell_diagonal family takes d=2 with c01, c10, c11")
    c = np.array([[0, c01], [c10, c11]], dtype=complex)
    return wit.bell_diagonal_witness(c, a), (2, 2), {"max_abs_c": float(np.abs(c).max())}


def _mub(m):
    B = wit.qubit_mubs()
    return wit.mub_witness(B, [x.conj() for x in B], m), (2, 2), {}


def _chsh(theta):
    x, y = np.array([1.0, 0, 0]), np.array([0, 1.0, 0])
    b1 = np.cos(theta) * x + np.sin(theta) * y
    b2 = np.cos(theta) * x - np.sin(theta) * y
    return wit.chsh_witness(x, y, b1, b2), (2, 2), {}


def _phi_p(d, p):
    M, k = maps.phi_p(d, p)
    return M.choi_matrix(), (d, d), {"k_positive": k}


def _breuer_hall(N):
    _, W = wit.robertson_breuer_hall(N, variant="breuer_hall")
    return W, (2 * N, 2 * N), {}


def _three_qubit(which):
    ops = dict(zip(("W", "Wp", "Wpp"), wit.three_qubit_witnesses()))
    if which not in ops:
        raise ValueError("which must be one of W, Wp, Wpp")
    return ops[which], (2, 4), {"parties": [2, 2, 2]}


def _upb_edge(seed):
    pairs, dims = states.load_upb()
    r = wit.edge_steered_witness(states.upb_projector(pairs), None, dims, mode="upb", seed=seed)
    return r.W, dims, {"epsilon": r.epsilon, "status": r.status}


def _kossakowski(alpha):
    return wit.diagonal_type_witness(wit.kossakowski_matrix(3, wit.rotation(alpha))), (3, 3), {}


FAMILIES = {
    # witnesses
    "flip": Family("witness", {"d": (int, None)}, lambda d: (wit.flip_witness(d), (d, d), {})),
    "reduction": Family("witness", {"d": (int, None)}, lambda d: (wit.reduction_witness(d), (d, d), {})),
    "w_abc": Family("witness", {"a": (float, None), "b": (float, None), "c": (float, None)}, _w_abc),
    "w_ab": Family("witness", {"a": (float, None), "b": (float, None)},
                   lambda a, b: (wit.w_ab(a, b), (2, 2), {})),
    "w_dk": Family("witness", {"d": (int, None), "k": (int, None)},
                   lambda d, k: (wit.w_dk(d, k), (d, d), {})),
    "kossakowski": Family("witness", {"alpha": (float, None)}, _kossakowski),
    "phi_p": Family("witness", {"d": (int, None), "p": (float, None)}, _phi_p),
    "bell_diagonal": Family("witness", {"d": (int, 2), "a": (float, 0.5), "c01": (float, 1.0),
                                        "c10": (float, 1.0), "c11": (float, -1.0)}, _bell_diagonal),
    "mub": Family("witness", {"m": (int, 3)}, _mub),
    "chsh": Family("witness", {"theta": (float, np.pi / 4)}, _chsh),
    "breuer_hall": Family("witness", {"N": (int, 2)}, _breuer_hall),
    "robertson": Family("witness", {}, lambda: _breuer_hall(2)),
    "three_qubit": Family("witness", {"which": (str, "W")}, _three_qubit),
    "upb_edge": Family("witness", {"seed": (int, 0)}, _upb_edge),
    # states
    "max_entangled": Family("state", {"d": (int, None)},
                            lambda d: (states.max_entangled_projector(d), (d, d), {})),
    "isotropic": Family("state", {"d": (int, None), "p": (float, None)},
                        lambda d, p: (states.isotropic(d, p), (d, d), {})),
    "werner": Family("state", {"d": (int, None), "p": (float, None)},
                     lambda d, p: (states.werner(d, p), (d, d), {})),
    "bell": Family("state", {"d": (int, None), "m": (int, 0), "n": (int, 0)},
                   lambda d, m, n: (states.bell_projector(d, m, n), (d, d), {})),
    "tiles": Family("state", {}, lambda: (states.tiles_state(), (3, 3), {})),
    "ghz": Family("state", {}, lambda: (proj(states.ghz_state()), (2, 4), {"parties": [2, 2, 2]})),
    "w_state": Family("state", {}, lambda: (proj(states.w_state()), (2, 4), {"parties": [2, 2, 2]})),
}


def parse_params(text):
    """'a=1,b=2' -> {'a': '1', 'b': '2'}."""
    out = {}
    if not text:
        return out
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise ValueError(f"parameter {item!r} is not of the form key=value")
        key, val = item.split("=", 1)
        out[key.strip()] = val.strip()
    return out


def build(name, raw):
    """Build a catalog object; returns (matrix, dims, kind, params, extra_meta)."""
    if name not in FAMILIES:
        raise KeyError(name)
    fam = FAMILIES[name]
    unknown = set(raw) - set(fam.params)
    if unknown:
        raise ValueError(f"unknown parameter(s) for {name}: {', '.join(sorted(unknown))}")
    params = {}
    for key, (typ, default) in fam.params.items():
        if key in raw:
            try:
                params[key] = typ(raw[key])
            except ValueError:
                raise ValueError(f"parameter {key} must be of type {typ.__name__}") from None
        elif default is None:
            raise ValueError(f"missing required parameter {key}")
        else:
            params[key] = default
    M, dims, extra = fam.build(**params)
    return np.asarray(M, dtype=complex), dims, fam.kind, params, extra
