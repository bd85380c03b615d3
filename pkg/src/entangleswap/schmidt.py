"""Schmidt coefficients and pure bipartite states."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError, StateError
from .linalg import Dims, fix_phases

NORM_TOL = 1e-12
SUM_TOL = 1e-12
ZERO_CLAMP = 1e-14


def schmidt_vector(p, d: int | None = None, *, sort: bool = False) -> np.ndarray:
    """Validate a vector of Schmidt coefficients.

    The entries must be nonnegative and sum to one. With *d* given the
    vector is zero-padded to length *d*. Order is preserved unless *sort*
    is set, because the swapping formulas pair ``p[j]`` with ``q[j + k]``
    and so depend on the labelling of the Schmidt basis.
    """
    p = np.asarray(p, dtype=float).ravel()
    if p.size == 0:
        raise StateError("empty Schmidt vector")
    if not np.all(np.isfinite(p)):
        raise StateError("Schmidt vector has non-finite entries")
    if np.any(p < -ZERO_CLAMP):
        raise StateError(f"Schmidt coefficients must be nonnegative: {p}")
    p = np.where(p < ZERO_CLAMP, 0.0, p)
    if abs(p.sum() - 1.0) > SUM_TOL:
        raise StateError(f"Schmidt coefficients sum to {p.sum():.17g}, not 1")
    if d is not None:
        if p.size > d:
            raise DimensionError(f"{p.size} coefficients do not fit in dimension {d}")
        p = np.concatenate([p, np.zeros(d - p.size)])
    if sort:
        p = np.sort(p)[::-1]
    return p


def uniform(d: int) -> np.ndarray:
    return np.full(d, 1.0 / d)


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector of a bipartite system."""

    amplitudes: np.ndarray
    dims: Dims

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=np.complex128).ravel()
        if a.size != self.dims.total:
            raise DimensionError(f"{a.size} amplitudes for dims {self.dims}")
        if abs(np.linalg.norm(a) - 1.0) > NORM_TOL:
            raise StateError(f"state has norm {np.linalg.norm(a):.17g}")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @classmethod
    def normalized(cls, amplitudes, dims: Dims) -> "PureState":
        a = np.asarray(amplitudes, dtype=np.complex128).ravel()
        nrm = np.linalg.norm(a)
        if nrm == 0:
            raise StateError("cannot normalize the zero vector")
        return cls(a / nrm, dims)

    def matrix(self) -> np.ndarray:
        """Amplitudes reshaped to a ``d_A x d_B`` coefficient matrix."""
        return self.amplitudes.reshape(self.dims.d_A, self.dims.d_B)

    def density(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


def schmidt_decompose(psi: PureState):
    """Schmidt decomposition ``psi = sum_i sqrt(lam_i) |a_i>|b_i>``.

    Returns
    -------
    lam : ndarray
        Schmidt coefficients, descending, length ``min(d_A, d_B)``.
    left, right : ndarray
        Columns are the local Schmidt vectors ``|a_i>`` and ``|b_i>``.
    """
    if not isinstance(psi, PureState):
        raise StateError("schmidt_decompose expects a PureState")
    u, s, vh = np.linalg.svd(psi.matrix(), full_matrices=False)
    lam = s**2
    lam[lam < ZERO_CLAMP] = 0.0
    # same phase convention as hermitian_eigs; push the phase onto the right vectors
    left = fix_phases(u)
    phase = np.sum(left.conj() * u, axis=0)
    right = (vh.T * phase)
    return lam, left, right


def state_from_schmidt(p, d: int) -> PureState:
    """``sum_j sqrt(p_j) |j>|j>`` on a ``d x d`` system."""
    p = schmidt_vector(p, d)
    amps = np.zeros(d * d, dtype=np.complex128)
    idx = np.arange(d)
    amps[idx * d + idx] = np.sqrt(p)
    return PureState(amps, Dims(d, d))
