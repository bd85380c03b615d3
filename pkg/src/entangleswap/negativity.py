"""Negativity of bipartite states, normalized by ``d - 1`` with ``d = min(d_A, d_B)``.

With this normalization a maximally entangled state has negativity 1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError, StateError
from .linalg import Dims, as_matrix, is_hermitian, partial_transpose, trace_norm
from .schmidt import PureState, schmidt_vector

PSD_FLOOR = -1e-10
TRACE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    matrix: np.ndarray
    dims: Dims

    def __post_init__(self):
        m = as_matrix(self.matrix)
        n = self.dims.total
        if m.shape != (n, n):
            raise DimensionError(f"density matrix has shape {m.shape}, expected {(n, n)}")
        if not is_hermitian(m):
            raise StateError("density matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > TRACE_TOL:
            raise StateError(f"density matrix has trace {np.trace(m).real:.17g}")
        if np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0] < PSD_FLOOR:
            raise StateError("density matrix is not positive semidefinite")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_pure(cls, psi: PureState) -> "DensityMatrix":
        return cls(psi.density(), psi.dims)


def _norm_dim(d: int) -> int:
    if d < 2:
        raise DimensionError("negativity is undefined for d = 1")
    return d


def negativity_mixed(rho: DensityMatrix) -> float:
    """``(||rho^T_B||_1 - 1) / (d - 1)``, clamped at zero."""
    d = _norm_dim(rho.dims.d)
    n = (trace_norm(partial_transpose(rho.matrix, rho.dims, "B")) - 1.0) / (d - 1)
    return max(n, 0.0)


def negativity_pure(lam, d: int) -> float:
    """Closed form ``2/(d-1) * sum_{i<j} sqrt(lam_i lam_j)``."""
    d = _norm_dim(d)
    s = np.sqrt(schmidt_vector(lam, d))
    pairs = np.triu(np.outer(s, s), 1).sum()
    return max(2.0 * pairs / (d - 1), 0.0)
