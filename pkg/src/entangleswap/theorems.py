"""Checks that the swapping bound dominates the product of the input negativities.

For two pure inputs with Schmidt vectors ``p`` and ``q`` the average
negativity left on ``AC`` by the Bell measurement (``bound``) is compared
with ``N(p) * N(q)`` (``product``; for pure states the convex roof equals
the negativity). The comparison is an identity for ``d = 2, 3``, holds
when either input is maximally entangled, and holds when ``p == q`` via
the cyclic partition sums computed by :func:`partition_sums`. Other cases
are only explored by :func:`scan_generic`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import kernels
from ._parallel import map_ordered
from .bell import average_swap_negativity, rde_lower_bound, swap_density
from .exceptions import DimensionError, VerificationError
from .linalg import Dims
from .negativity import DensityMatrix, negativity_pure
from .roof import OptimizerConfig, estimate_noa, swap_decomposition
from .schmidt import schmidt_vector, uniform

IDENTITY_TOL = 1e-12
NOA_TOL = 1e-9
FLAG_TOL = 1e-9
STRATA = ("unrestricted", "equal", "uniform", "near_equal", "near_uniform")
PERTURBATION = 0.01


@dataclass(frozen=True, eq=False)
class PartitionSums:
    parity: str
    sums: np.ndarray
    K: float | None = None
    L: float | None = None
    U: float | None = None
    V: float | None = None
    identity_residual: float = 0.0
    partition_residual: float = 0.0


@dataclass(eq=False)
class BoundReport:
    d: int
    p: np.ndarray
    q: np.ndarray
    bound: float
    cren_product: float
    noa_lower: float
    verdict: str = ""
    residuals: dict = field(default_factory=dict)
    failures: dict = field(default_factory=dict)
    sums: PartitionSums | None = None
    stratum: str = ""
    index: int = -1

    @property
    def gap(self) -> float:
        return self.bound - self.cren_product

    @property
    def flagged(self) -> bool:
        return self.gap < -FLAG_TOL

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self) -> "BoundReport":
        if self.failures:
            raise VerificationError(self.failures)
        return self


def _verdict(bound, product):
    if bound < product - FLAG_TOL:
        return "scan-gap"
    if abs(bound - product) <= IDENTITY_TOL:
        return "equality"
    return "strict"


def _finish(report: BoundReport, limits: dict) -> BoundReport:
    """Record every residual that exceeds its limit as a failure."""
    for name, lim in limits.items():
        val = report.residuals[name]
        if not val <= lim:
            report.failures[name] = val
    report.verdict = _verdict(report.bound, report.cren_product)
    return report


def _noa_lower(p, q, d, cfg):
    avg = average_swap_negativity(p, q, d)
    if cfg is None:
        return avg
    rho = DensityMatrix(swap_density(p, q, d), Dims(d, d))
    return estimate_noa(rho, cfg, initial=swap_decomposition(p, q, d)).value


def _pair_sum(v):
    s = np.sqrt(v)
    return float(np.triu(np.outer(s, s), 1).sum())


def verify_low_dim(p, q, d: int, cfg: OptimizerConfig | None = None) -> BoundReport:
    """Qubit and qutrit case: the bound equals the product of negativities."""
    if d not in (2, 3):
        raise DimensionError(f"verify_low_dim handles d = 2 or 3, got {d}")
    p, q = schmidt_vector(p, d), schmidt_vector(q, d)
    bound = rde_lower_bound(p, q, d)
    product = negativity_pure(p, d) * negativity_pure(q, d)
    if d == 2:
        explicit = 4.0 * np.sqrt(p[0] * p[1]) * np.sqrt(q[0] * q[1])
    else:
        explicit = _pair_sum(p) * _pair_sum(q)
    noa = _noa_lower(p, q, d, cfg)
    rep = BoundReport(d, p, q, bound, product, noa)
    rep.residuals = {
        "bound_vs_product": abs(bound - product),
        "bound_vs_explicit": abs(bound - explicit),
        "average_vs_bound": abs(average_swap_negativity(p, q, d) - bound),
        "noa_deficit": max(product - noa, 0.0),
    }
    return _finish(rep, {
        "bound_vs_product": IDENTITY_TOL,
        "bound_vs_explicit": IDENTITY_TOL,
        "average_vs_bound": IDENTITY_TOL,
        "noa_deficit": NOA_TOL,
    })


def partition_index_sets(d: int) -> list[set]:
    """Cyclic classes of index pairs ``{j, j + l}`` for ``l = 1 .. floor(d/2)``."""
    if d < 3:
        raise DimensionError(f"partition sums need d >= 3, got {d}")
    return [{tuple(sorted((j, (j + l) % d))) for j in range(d)} for l in range(1, d // 2 + 1)]


def partition_complete(d: int) -> bool:
    """The classes are pairwise disjoint and cover every pair ``i < j``."""
    sets = partition_index_sets(d)
    disjoint = all(not (a & b) for a, b in combinations(sets, 2))
    return disjoint and set().union(*sets) == set(combinations(range(d), 2))


def partition_sums(p, d: int) -> PartitionSums:
    """Sums of ``sqrt(p_j p_{j+l})`` over each cyclic class.

    Odd ``d = 2n + 1`` gives ``n`` full sums ``s_l`` with
    ``K = mean(s**2)`` and ``L = mean(s)**2``. Even ``d = 2m`` gives
    ``m - 1`` full sums ``t_l`` and a half sum ``t_m`` over ``j < m``,
    with ``U = 2 (sum t_l**2 + 2 t_m**2) / (2m - 1)`` and
    ``V = 4 (sum t_l + t_m)**2 / (2m - 1)**2``.
    """
    if d < 3:
        raise DimensionError(f"partition sums need d >= 3, got {d}")
    sp = np.sqrt(schmidt_vector(p, d))
    j = np.arange(d)
    total = _pair_sum(sp**2)
    if d % 2:
        n = (d - 1) // 2
        s = np.array([np.dot(sp, sp[(j + l) % d]) for l in range(1, n + 1)])
        K = float(np.mean(s**2))
        L = float(np.mean(s) ** 2)
        diffs = sum((s[a] - s[b]) ** 2 for a, b in combinations(range(n), 2))
        resid = abs(n * n * (K - L) - diffs)
        return PartitionSums("odd", s, K=K, L=L, identity_residual=float(resid),
                             partition_residual=abs(float(s.sum()) - total))
    m = d // 2
    full = np.array([np.dot(sp, sp[(j + l) % d]) for l in range(1, m)])
    half = float(np.dot(sp[:m], sp[m:]))
    t = np.append(full, half)
    c = 2 * m - 1
    U = 2.0 * (np.sum(full**2) + 2.0 * half**2) / c
    V = 4.0 * (np.sum(full) + half) ** 2 / c**2
    rhs = 2.0 * sum((full[a] - full[b]) ** 2 for a, b in combinations(range(m - 1), 2)) \
        + float(np.sum((full - 2.0 * half) ** 2))
    resid = abs(c * c * (U - V) / 2.0 - rhs)
    return PartitionSums("even", t, U=float(U), V=float(V), identity_residual=float(resid),
                         partition_residual=abs(float(t.sum()) - total))


def verify_equal_schmidt(p, d: int, cfg: OptimizerConfig | None = None) -> BoundReport:
    """Both inputs share the Schmidt vector ``p``: bound = K >= L = product (odd d),
    bound = U >= V = product (even d)."""
    if d < 4:
        raise DimensionError(f"verify_equal_schmidt handles d >= 4, got {d}; use verify_low_dim")
    p = schmidt_vector(p, d)
    bound = rde_lower_bound(p, p, d)
    product = negativity_pure(p, d) ** 2
    ps = partition_sums(p, d)
    hi, lo = (ps.K, ps.L) if ps.parity == "odd" else (ps.U, ps.V)
    noa = _noa_lower(p, p, d, cfg)
    rep = BoundReport(d, p, p.copy(), bound, product, noa, sums=ps)
    rep.residuals = {
        "bound_vs_square_mean": abs(bound - hi),
        "product_vs_mean_square": abs(product - lo),
        "square_identity": ps.identity_residual,
        "partition_total": ps.partition_residual,
        "partition_complete": 0.0 if partition_complete(d) else 1.0,
        "mean_order_deficit": max(lo - hi, 0.0),
        "noa_deficit": max(hi - noa, 0.0),
    }
    return _finish(rep, {
        "bound_vs_square_mean": IDENTITY_TOL,
        "product_vs_mean_square": IDENTITY_TOL,
        "square_identity": IDENTITY_TOL,
        "partition_total": IDENTITY_TOL,
        "partition_complete": 0.0,
        "mean_order_deficit": IDENTITY_TOL,
        "noa_deficit": NOA_TOL,
    })


def verify_max_entangled(q, d: int, which: str = "first",
                         cfg: OptimizerConfig | None = None) -> BoundReport:
    """One input maximally entangled: the bound reduces to the other's negativity."""
    if which not in ("first", "second"):
        raise ValueError("which must be 'first' or 'second'")
    q = schmidt_vector(q, d)
    u = uniform(d)
    p, q = (u, q) if which == "first" else (q, u)
    other = q if which == "first" else p
    bound = rde_lower_bound(p, q, d)
    n_other = negativity_pure(other, d)
    product = negativity_pure(p, d) * negativity_pure(q, d)
    noa = _noa_lower(p, q, d, cfg)
    rep = BoundReport(d, p, q, bound, product, noa)
    rep.residuals = {
        "bound_vs_negativity": abs(bound - n_other),
        "bound_vs_product": abs(bound - product),
        "product_deficit": max(product - bound, 0.0),
        "noa_deficit": max(product - noa, 0.0),
    }
    return _finish(rep, {
        "bound_vs_negativity": IDENTITY_TOL,
        "bound_vs_product": IDENTITY_TOL,
        "product_deficit": IDENTITY_TOL,
        "noa_deficit": NOA_TOL,
    })


def random_schmidt(d: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform sample from the probability simplex (flat Dirichlet)."""
    return rng.dirichlet(np.ones(d))


def perturb(p, eps: float, rng: np.random.Generator) -> np.ndarray:
    """A probability vector within sup-distance *eps* of *p*."""
    delta = rng.uniform(-0.5 * eps, 0.5 * eps, size=len(p))
    delta -= delta.mean()
    neg = delta < 0
    if np.any(neg):
        # shrink toward p until every entry is nonnegative
        t = min(1.0, float(np.min(p[neg] / -delta[neg])))
        delta *= t
    out = np.maximum(p + delta, 0.0)
    return out / out.sum()


def _draw(stratum, d, rng, eps):
    if stratum == "unrestricted":
        return random_schmidt(d, rng), random_schmidt(d, rng)
    if stratum == "equal":
        p = random_schmidt(d, rng)
        return p, p.copy()
    if stratum == "uniform":
        return uniform(d), random_schmidt(d, rng)
    if stratum == "near_equal":
        p = random_schmidt(d, rng)
        return p, perturb(p, eps, rng)
    if stratum == "near_uniform":
        return perturb(uniform(d), eps, rng), random_schmidt(d, rng)
    raise ValueError(f"unknown stratum {stratum!r}")


def scan_generic(d: int, samples: int, seed: int, strata=STRATA,
                 eps: float = PERTURBATION) -> list[BoundReport]:
    """Sample Schmidt pairs and compare the bound with the negativity product.

    Each stratum draws *samples* pairs, sample ``i`` of stratum ``s`` from
    its own RNG stream keyed on ``(seed, s, i)``. Samples with
    ``bound < product - 1e-9`` are flagged; this is reported, not raised,
    since no general inequality is claimed for ``d >= 4``.
    """
    if d < 4:
        raise DimensionError(f"scan_generic needs d >= 4, got {d}")
    strata = tuple(strata)
    for s in strata:
        if s not in STRATA:
            raise ValueError(f"unknown stratum {s!r}; choose from {STRATA}")

    def run_stratum(s):
        code = STRATA.index(s)
        ss = np.random.SeedSequence([seed, code])
        pairs = [_draw(s, d, np.random.default_rng(child), eps) for child in ss.spawn(samples)]
        if not pairs:
            return []
        P = np.array([a for a, _ in pairs])
        Q = np.array([b for _, b in pairs])
        bounds = kernels.bound_batch(P, Q)
        reps = []
        for i, (p, q) in enumerate(pairs):
            prod = negativity_pure(p, d) * negativity_pure(q, d)
            b = float(bounds[i])
            rep = BoundReport(d, p, q, b, prod, b, stratum=s, index=i)
            rep.residuals = {"gap": b - prod}
            rep.verdict = _verdict(b, prod)
            reps.append(rep)
        return reps

    out = []
    for reps in map_ordered(run_stratum, strata):
        out.extend(reps)
    return out
