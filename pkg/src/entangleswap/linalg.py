"""Dense complex linear algebra used by the rest of the package.

Matrices are plain two-dimensional ``numpy`` arrays of ``complex128``.
Everything here is a pure function of its arguments.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError, NumericalError

MAX_DIM = 4096
HERM_RTOL = 1e-10
ORTH_TOL = 1e-10


@dataclass(frozen=True)
class Dims:
    """Local dimensions of a bipartite system."""

    d_A: int
    d_B: int

    def __post_init__(self):
        if int(self.d_A) < 1 or int(self.d_B) < 1:
            raise DimensionError(f"subsystem dimensions must be >= 1, got {self.d_A}, {self.d_B}")
        if self.d_A * self.d_B > MAX_DIM:
            raise DimensionError(f"d_A*d_B = {self.d_A * self.d_B} exceeds cap {MAX_DIM}")

    @property
    def d(self) -> int:
        return min(self.d_A, self.d_B)

    @property
    def total(self) -> int:
        return self.d_A * self.d_B


def as_matrix(m) -> np.ndarray:
    """Coerce *m* to a finite 2-D complex array."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {a.shape}")
    if a.shape[0] > MAX_DIM or a.shape[1] > MAX_DIM:
        raise DimensionError(f"matrix shape {a.shape} exceeds cap {MAX_DIM}")
    if not np.all(np.isfinite(a)):
        raise NumericalError("matrix has non-finite entries")
    return a


def kron(a, b) -> np.ndarray:
    """Kronecker product ``a (x) b``.

    Entry ``(i*rb + k, j*cb + l)`` of the result is ``a[i, j] * b[k, l]``.
    Vectors (1-D inputs) are treated as column matrices and stay 1-D.
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    rows = (a.shape[0] if a.ndim else 1) * (b.shape[0] if b.ndim else 1)
    cols = (a.shape[1] if a.ndim == 2 else 1) * (b.shape[1] if b.ndim == 2 else 1)
    if rows > MAX_DIM or cols > MAX_DIM:
        raise DimensionError(f"kron result {rows}x{cols} exceeds cap {MAX_DIM}")
    return np.kron(a, b)


def partial_transpose(rho, dims: Dims, subsystem: str = "B") -> np.ndarray:
    """Transpose the indices of one subsystem of a bipartite operator.

    The map is an index permutation, so applying it twice returns the
    input bit for bit.
    """
    rho = as_matrix(rho)
    n = dims.total
    if rho.shape != (n, n):
        raise DimensionError(f"rho has shape {rho.shape}, expected {(n, n)} for {dims}")
    t = rho.reshape(dims.d_A, dims.d_B, dims.d_A, dims.d_B)
    if subsystem == "B":
        t = t.transpose(0, 3, 2, 1)
    elif subsystem == "A":
        t = t.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")
    return np.ascontiguousarray(t.reshape(n, n))


def trace_norm(m) -> float:
    """Sum of the singular values of a square matrix."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"trace norm needs a square matrix, got {m.shape}")
    try:
        s = np.linalg.svd(m, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD failed: {exc}") from exc
    return float(np.sum(s))


def is_hermitian(m, rtol: float = HERM_RTOL) -> bool:
    m = np.asarray(m)
    scale = max(np.max(np.abs(m), initial=0.0), 1.0)
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= rtol * scale)


def fix_phases(vecs: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rotate each column so its first non-negligible entry is real positive."""
    vecs = np.array(vecs, dtype=np.complex128, copy=True)
    for j in range(vecs.shape[1]):
        col = vecs[:, j]
        big = np.flatnonzero(np.abs(col) > tol * max(np.max(np.abs(col)), 1e-300))
        if big.size:
            z = col[big[0]]
            vecs[:, j] = col * (abs(z) / z)
    return vecs


def hermitian_eigs(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix.

    Returns
    -------
    w : ndarray
        Real eigenvalues in descending order.
    v : ndarray
        Orthonormal eigenvectors as columns, each phase-fixed so that its
        first non-negligible component is real and positive.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got {m.shape}")
    if not is_hermitian(m):
        raise NumericalError("matrix is not Hermitian within tolerance")
    h = 0.5 * (m + m.conj().T)
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition failed: {exc}") from exc
    order = np.argsort(-w, kind="stable")
    return w[order], fix_phases(v[:, order])


def is_isometry_rows(v, tol: float = ORTH_TOL) -> bool:
    """True if ``v @ v^dagger`` is the identity (orthonormal rows)."""
    v = np.asarray(v)
    g = v @ v.conj().T
    return bool(np.max(np.abs(g - np.eye(g.shape[0])), initial=0.0) <= tol)


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed ``n x n`` unitary via QR of a complex Gaussian matrix."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
