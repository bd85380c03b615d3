"""Generalized Bell basis and entanglement swapping between two qudit pairs.

Two pure states ``sum_j sqrt(p_j)|jj>_AB`` and ``sum_j sqrt(q_j)|jj>_CD``
are prepared; ``B`` and ``D`` are measured jointly in the Bell basis and
the post-measurement state of ``AC`` is recorded for each outcome.
All index arithmetic is modulo ``d``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels
from .exceptions import DimensionError
from .linalg import Dims
from .negativity import negativity_pure
from .schmidt import PureState, schmidt_decompose, schmidt_vector, state_from_schmidt


class BellIndex(NamedTuple):
    k: int
    l: int


def mod(i, d: int):
    """Residue of *i* modulo *d*; the one place index wrap-around happens."""
    return np.mod(i, d)


def _check_dim(d: int) -> int:
    d = int(d)
    if d < 2:
        raise DimensionError(f"Bell states need d >= 2, got {d}")
    Dims(d, d)
    return d


def omega(d: int) -> complex:
    return np.exp(2j * np.pi / d)


def bell_state(index, d: int) -> PureState:
    """``|Psi_{k,l}> = d^{-1/2} sum_j w^{jl} |j, j+k>`` with ``w = exp(2 pi i/d)``."""
    d = _check_dim(d)
    k, l = int(index[0]) % d, int(index[1]) % d
    j = np.arange(d)
    amps = np.zeros(d * d, dtype=np.complex128)
    # w^{jl} from the exact integer exponent, so phases stay exact at quarter turns
    amps[j * d + mod(j + k, d)] = np.exp(2j * np.pi * mod(j * l, d) / d) / np.sqrt(d)
    return PureState(amps, Dims(d, d))


def bell_basis(d: int) -> list[PureState]:
    """All ``d**2`` Bell states ordered lexicographically by ``(k, l)``."""
    d = _check_dim(d)
    return [bell_state((k, l), d) for k in range(d) for l in range(d)]


@dataclass(frozen=True, eq=False)
class SwapOutcome:
    index: BellIndex
    probability: float
    post_state: PureState | None  # None for zero-probability outcomes

    def post_schmidt(self) -> np.ndarray | None:
        if self.post_state is None:
            return None
        return schmidt_decompose(self.post_state)[0]

    def negativity(self) -> float:
        if self.post_state is None:
            return 0.0
        return negativity_pure(self.post_schmidt(), self.post_state.dims.d)


def _inputs(p, q, d):
    d = _check_dim(d)
    return schmidt_vector(p, d), schmidt_vector(q, d), d


def swap_outcomes(p, q, d: int) -> list[SwapOutcome]:
    """Outcome probabilities and normalized ``AC`` states for every Bell result.

    The unnormalized state for outcome ``(k, l)`` is
    ``d^{-1/2} sum_j sqrt(p_j q_{j+k}) w^{-lj} |j, j+k>``; its squared norm
    is the outcome probability ``sum_j p_j q_{j+k} / d``.
    """
    p, q, d = _inputs(p, q, d)
    j = np.arange(d)
    dims = Dims(d, d)
    out = []
    for k in range(d):
        shifted = mod(j + k, d)
        mag = np.sqrt(p * q[shifted] / d)
        r = float(np.dot(mag, mag))
        for l in range(d):
            if r <= 0.0:
                out.append(SwapOutcome(BellIndex(k, l), 0.0, None))
                continue
            amps = np.zeros(d * d, dtype=np.complex128)
            amps[j * d + shifted] = mag * np.exp(-2j * np.pi * mod(l * j, d) / d)
            out.append(SwapOutcome(BellIndex(k, l), r, PureState.normalized(amps, dims)))
    return out


def swap_state(p, q, d: int) -> PureState:
    """The four-party input ``|phi>_AB (x) |psi>_CD`` in ``A, B, C, D`` order."""
    p, q, d = _inputs(p, q, d)
    phi = state_from_schmidt(p, d).amplitudes
    psi = state_from_schmidt(q, d).amplitudes
    return PureState(np.kron(phi, psi), Dims(d * d, d * d))


def swap_density(p, q, d: int) -> np.ndarray:
    """Reduced state of ``AC`` averaged over outcomes, ``diag(p) (x) diag(q)``."""
    p, q, d = _inputs(p, q, d)
    return np.diag(np.kron(p, q)).astype(np.complex128)


def average_swap_negativity(p, q, d: int) -> float:
    """Outcome-weighted mean negativity of the post-measurement states.

    Evaluated the long way: every outcome state is Schmidt-decomposed
    and its negativity weighted by the outcome probability.
    """
    return float(sum(o.probability * o.negativity() for o in swap_outcomes(p, q, d)))


def rde_lower_bound(p, q, d: int) -> float:
    """``2/(d-1) sum_k sum_{j<j'} sqrt(p_j p_j') sqrt(q_{j+k} q_{j'+k})``."""
    p, q, d = _inputs(p, q, d)
    return float(kernels.bound_batch(p[None, :], q[None, :])[0])
