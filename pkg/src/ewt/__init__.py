"""Entanglement witness toolkit: construction, classification and detection.

Bipartite operators are dense complex arrays indexed row-major over
(i_A, i_B); see ``ewt.linalg`` for the shared conventions.
"""

__version__ = "0.1.0"

from .linalg import (  # noqa: E402
    flip,
    hermitian_spectrum,
    k_norm,
    kron,
    operator_schmidt,
    partial_trace,
    partial_transpose,
    realign,
    schmidt_decompose,
)
from .optimize import OptimResult, min_schmidt_k_expectation  # noqa: E402

__all__ = [
    "__version__",
    "flip",
    "hermitian_spectrum",
    "k_norm",
    "kron",
    "operator_schmidt",
    "partial_trace",
    "partial_transpose",
    "realign",
    "schmidt_decompose",
    "OptimResult",
    "min_schmidt_k_expectation",
]
