"""JSON matrix files: parallel real/imaginary row-major arrays plus metadata."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import __version__

KINDS = ("state", "witness", "operator", "vector")
STATE_TOL = 1e-8


class MalformedFile(ValueError):
    pass


@dataclass
class MatrixFile:
    d_a: int
    d_b: int
    kind: str
    data: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def dims(self):
        return (self.d_a, self.d_b)

    def to_json(self):
        arr = np.asarray(self.data, dtype=complex)
        doc = {
            "d_a": int(self.d_a),
            "d_b": int(self.d_b),
            "kind": self.kind,
            "re": arr.real.tolist(),
            "im": arr.imag.tolist(),
            "meta": {"version": __version__, **self.meta},
        }
        return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def _plain(x):
    """Make metadata JSON-friendly (numpy scalars, complex values)."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": float(x.real), "im": float(x.imag)}
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    return x


def save(path, mf):
    mf.meta = _plain(mf.meta)
    text = mf.to_json()
    if path in (None, "-"):
        return text
    with open(path, "w") as fh:
        fh.write(text)
    return text


def parse(text):
    """Parse and validate a matrix file; raises MalformedFile on any defect."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"not valid JSON: {exc}") from None
    try:
        d_a, d_b, kind = int(doc["d_a"]), int(doc["d_b"]), doc["kind"]
        re_, im_ = np.asarray(doc["re"], dtype=float), np.asarray(doc["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedFile(f"missing or invalid field: {exc}") from None
    if kind not in KINDS:
        raise MalformedFile(f"kind must be one of {KINDS}, got {kind!r}")
    if d_a < 1 or d_b < 1:
        raise MalformedFile("dimensions must be positive")
    D = d_a * d_b
    shape = (D,) if kind == "vector" else (D, D)
    if re_.shape != shape or im_.shape != shape:
        raise MalformedFile(f"re/im must have shape {shape} for d_a={d_a}, d_b={d_b}")
    data = re_ + 1j * im_
    if kind == "state":
        if np.abs(data - data.conj().T).max() > STATE_TOL:
            raise MalformedFile("state is not Hermitian")
        if abs(np.trace(data).real - 1) > STATE_TOL:
            raise MalformedFile("state does not have unit trace")
    return MatrixFile(d_a, d_b, kind, data, doc.get("meta", {}) or {})


def load(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise MalformedFile(f"cannot read {path}: {exc}") from None
    return parse(text)
