"""Bounds on the convex-roof negativity and the negativity of assistance.

Both quantities optimize the average negativity over pure-state
decompositions of a density matrix: the convex roof takes the minimum,
the negativity of assistance the maximum. Every decomposition of ``rho``
with ``m`` members has the form ``M = V^dagger E`` where the rows of ``E``
are the eigenvectors scaled by ``sqrt(eigenvalue)`` and ``V`` is an
``r x m`` matrix with orthonormal rows. The search moves through that
set with two-member Givens rotations, which keep ``sum_k |x_k><x_k|``
fixed, and a derivative-free parabolic line search on the rotation angle.

Any value returned is attained by the decomposition returned with it, so
a minimum is an upper bound on the convex roof and a maximum a lower
bound on the negativity of assistance. Neither is claimed to be exact.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from ._parallel import map_ordered
from .bell import swap_outcomes
from .exceptions import DimensionError, NumericalError, StateError
from .linalg import Dims, haar_unitary, hermitian_eigs, is_isometry_rows
from .negativity import DensityMatrix, negativity_pure
from .schmidt import PureState, schmidt_decompose

RANK_TOL = 1e-12
WEIGHT_TOL = 1e-10
RECON_TOL = 1e-9
DROP_TOL = 1e-15


@dataclass(frozen=True)
class OptimizerConfig:
    decomposition_size: int | None = None  # default rank**2
    restarts: int = 16
    max_iters: int = 500
    step_tolerance: float = 1e-9
    seed: int = 0
    initial_step: float = 0.1
    min_step: float = 1e-4

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iters < 0:
            raise ValueError("max_iters must be >= 0")
        if self.decomposition_size is not None and self.decomposition_size < 1:
            raise ValueError("decomposition_size must be >= 1")


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Ensemble ``{(w_k, |psi_k>)}`` with ``sum_k w_k = 1``."""

    weights: np.ndarray
    states: tuple

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size != len(self.states):
            raise StateError("weights and states differ in length")
        if np.any(w < 0) or abs(w.sum() - 1.0) > WEIGHT_TOL:
            raise StateError(f"weights must be a probability vector (sum {w.sum():.17g})")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "states", tuple(self.states))

    def __len__(self):
        return len(self.states)

    @property
    def dims(self) -> Dims:
        return self.states[0].dims

    @classmethod
    def from_members(cls, members, dims: Dims) -> "Decomposition":
        """Build from unnormalized member vectors ``sqrt(w_k)|psi_k>``."""
        members = np.asarray(members, dtype=np.complex128)
        w = np.einsum("ij,ij->i", members.conj(), members).real
        keep = w > DROP_TOL
        w, members = w[keep], members[keep]
        states = [PureState.normalized(x, dims) for x in members]
        return cls(w / w.sum(), states)

    def members(self) -> np.ndarray:
        return np.array([np.sqrt(w) * s.amplitudes for w, s in zip(self.weights, self.states)])

    def density(self) -> np.ndarray:
        m = self.members()
        return m.T @ m.conj()

    def average_negativity(self) -> float:
        d = self.dims.d
        return float(sum(w * negativity_pure(schmidt_decompose(s)[0], d)
                         for w, s in zip(self.weights, self.states)))

    def trace_distance(self, rho) -> float:
        diff = self.density() - np.asarray(rho)
        return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (diff + diff.conj().T)))))


@dataclass(frozen=True, eq=False)
class RoofEstimate:
    """A one-sided bound: upper on the convex roof (``min``), lower on assistance (``max``)."""

    value: float
    direction: str
    decomposition: Decomposition
    restarts_used: int
    converged: bool
    restart_values: tuple = field(default=())
    sweeps: tuple = field(default=())

    @property
    def bound_kind(self) -> str:
        return "upper" if self.direction == "min" else "lower"


def _spectral_rows(rho: DensityMatrix):
    w, v = hermitian_eigs(rho.matrix)
    keep = w > RANK_TOL
    if not np.any(keep):
        raise NumericalError("density matrix has no eigenvalue above the rank threshold")
    return (np.sqrt(w[keep])[:, None] * v[:, keep].T)


def rank(rho: DensityMatrix) -> int:
    return _spectral_rows(rho).shape[0]


def decompositions_from_isometry(rho: DensityMatrix, v) -> Decomposition:
    """Decomposition ``x_k = sum_i conj(v[i, k]) sqrt(mu_i) |e_i>``.

    *v* is ``r x m`` with orthonormal rows, ``r`` the rank of *rho*.
    """
    e = _spectral_rows(rho)
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 2 or v.shape[0] != e.shape[0] or v.shape[1] < v.shape[0]:
        raise DimensionError(f"isometry must be {e.shape[0]} x m with m >= {e.shape[0]}, got {v.shape}")
    if not is_isometry_rows(v):
        raise NumericalError("v does not have orthonormal rows")
    return Decomposition.from_members(v.conj().T @ e, rho.dims)


def _norm_dim(dims: Dims) -> int:
    if dims.d < 2:
        raise DimensionError("negativity is undefined for d = 1")
    return dims.d


def _descend(members, dims, sign, cfg):
    """Improve ``sign * average negativity`` from one start; modifies *members*.

    The probe angle halves after every sweep down to ``cfg.min_step``. The
    run stops once a full sweep gains less than ``cfg.step_tolerance``.
    """
    d_a, d_b = dims.d_A, dims.d_B
    scores = kernels.member_scores(members, d_a, d_b)
    value = scores.sum() / (dims.d - 1)
    step = cfg.initial_step
    for sweep in range(1, cfg.max_iters + 1):
        kernels.coordinate_sweep(members, d_a, d_b, sign, step, scores)
        new = scores.sum() / (dims.d - 1)
        gain = sign * (new - value)
        value = new
        if gain < cfg.step_tolerance:
            return True, sweep
        step = max(0.5 * step, cfg.min_step)
    return False, cfg.max_iters


def _start_members(rho, cfg, initial):
    e = _spectral_rows(rho)
    r, n = e.shape
    m = max(cfg.decomposition_size or r * r, r)
    seed_members = None
    if initial is not None:
        if initial.dims != rho.dims:
            raise DimensionError("initial decomposition has different dimensions")
        dist = initial.trace_distance(rho.matrix)
        if dist > RECON_TOL:
            raise StateError(f"initial decomposition is {dist:.3g} from rho in trace distance")
        seed_members = initial.members()
        m = max(m, seed_members.shape[0])

    streams = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)

    def start(i):
        x = np.zeros((m, n), dtype=np.complex128)
        if i == 0:
            if seed_members is not None:
                x[: seed_members.shape[0]] = seed_members
            else:
                x[:r] = e
            return x
        v = haar_unitary(m, np.random.default_rng(streams[i]))[:r]
        return np.ascontiguousarray(v.conj().T @ e)

    return start


def _estimate(rho: DensityMatrix, cfg: OptimizerConfig | None, initial, direction):
    cfg = cfg or OptimizerConfig()
    dims = rho.dims
    _norm_dim(dims)
    sign = -1.0 if direction == "min" else 1.0
    start = _start_members(rho, cfg, initial)

    def run(i):
        x = start(i)
        converged, sweeps = _descend(x, dims, sign, cfg)
        dec = Decomposition.from_members(x, dims)
        return dec.average_negativity(), dec, converged, sweeps

    results = map_ordered(run, range(cfg.restarts))
    values = np.array([res[0] for res in results])
    # first index wins ties, so the result does not depend on thread timing
    best = int(np.argmax(sign * values))
    value, dec, converged, _ = results[best]
    return RoofEstimate(
        value=float(value),
        direction=direction,
        decomposition=dec,
        restarts_used=cfg.restarts,
        converged=bool(converged),
        restart_values=tuple(float(v) for v in values),
        sweeps=tuple(res[3] for res in results),
    )


def estimate_cren(rho: DensityMatrix, cfg: OptimizerConfig | None = None,
                  initial: Decomposition | None = None) -> RoofEstimate:
    """Smallest average negativity found: an upper bound on the convex roof."""
    return _estimate(rho, cfg, initial, "min")


def estimate_noa(rho: DensityMatrix, cfg: OptimizerConfig | None = None,
                 initial: Decomposition | None = None) -> RoofEstimate:
    """Largest average negativity found: a lower bound on the negativity of assistance."""
    return _estimate(rho, cfg, initial, "max")


def swap_decomposition(p, q, d: int) -> Decomposition:
    """Ensemble of post-measurement ``AC`` states produced by the Bell measurement."""
    outs = [o for o in swap_outcomes(p, q, d) if o.post_state is not None]
    w = np.array([o.probability for o in outs])
    return Decomposition(w / w.sum(), [o.post_state for o in outs])
