import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import all_pairs, bound_direct, cyclic_class, partition_sums_enumerated
from entangleswap.exceptions import DimensionError, VerificationError
from entangleswap.negativity import negativity_pure
from entangleswap.roof import OptimizerConfig
from entangleswap.theorems import (
    STRATA, partition_complete, partition_index_sets, partition_sums, perturb, scan_generic,
    verify_equal_schmidt, verify_low_dim, verify_max_entangled,
)

P5 = np.array([0.4, 0.25, 0.15, 0.12, 0.08])


class TestLowDim:
    def test_qubit_example(self):
        rep = verify_low_dim([0.9, 0.1], [0.6, 0.4], 2)
        assert rep.passed
        assert rep.bound == pytest.approx(0.5878775382679627, abs=1e-15)
        assert rep.verdict == "equality"

    @settings(max_examples=50, deadline=None)
    @given(st.sampled_from([2, 3]), st.integers(0, 2**31))
    def test_random_pairs(self, d, seed):
        g = np.random.default_rng(seed)
        rep = verify_low_dim(g.dirichlet(np.ones(d)), g.dirichlet(np.ones(d)), d)
        assert rep.passed, rep.failures
        assert rep.residuals["bound_vs_product"] <= 1e-12

    def test_optimized_noa(self):
        rep = verify_low_dim([0.7, 0.3], [0.55, 0.45], 2, OptimizerConfig(restarts=2))
        assert rep.passed
        assert rep.noa_lower >= rep.cren_product - 1e-9

    def test_rejects_other_dims(self):
        with pytest.raises(DimensionError):
            verify_low_dim([0.25] * 4, [0.25] * 4, 4)


class TestPartition:
    @pytest.mark.parametrize("d", range(3, 12))
    def test_complete(self, d):
        assert partition_complete(d)
        sets = partition_index_sets(d)
        assert sum(len(s) for s in sets) == len(all_pairs(d))
        for l, s in enumerate(sets, start=1):
            assert s == cyclic_class(d, l)

    @pytest.mark.parametrize("d", [4, 6, 8])
    def test_even_half_class(self, d):
        # the last class has only d/2 distinct pairs
        assert len(partition_index_sets(d)[-1]) == d // 2

    @pytest.mark.parametrize("d", range(3, 10))
    def test_sums_against_enumeration(self, rng, d):
        p = rng.dirichlet(np.ones(d))
        assert np.max(np.abs(partition_sums(p, d).sums - partition_sums_enumerated(p, d))) <= 1e-14

    def test_d5_example(self):
        ps = partition_sums(P5, 5)
        assert ps.parity == "odd"
        np.testing.assert_allclose(ps.sums, [0.9209060398885065, 0.8882089457756147], atol=1e-15)
        assert ps.K == pytest.approx(0.8184915328294802, abs=1e-15)
        assert ps.L == pytest.approx(0.8182242578386233, abs=1e-15)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(4, 9), st.integers(0, 2**31))
    def test_identities(self, d, seed):
        p = np.random.default_rng(seed).dirichlet(np.ones(d))
        ps = partition_sums(p, d)
        assert ps.identity_residual <= 1e-12
        assert ps.partition_residual <= 1e-12
        hi, lo = (ps.K, ps.L) if d % 2 else (ps.U, ps.V)
        assert abs(hi - bound_direct(p, p, d)) <= 1e-12
        assert abs(lo - negativity_pure(p, d) ** 2) <= 1e-12
        assert hi >= lo - 1e-12

    def test_small_d_rejected(self):
        with pytest.raises(DimensionError):
            partition_sums([0.5, 0.5], 2)


class TestEqualSchmidt:
    def test_d5_example(self):
        rep = verify_equal_schmidt(P5, 5)
        assert rep.passed
        assert rep.bound == pytest.approx(0.8184915328294802, abs=1e-15)
        assert rep.cren_product == pytest.approx(0.8182242578386233, abs=1e-15)
        assert rep.verdict == "strict"

    @pytest.mark.parametrize("d", [4, 6, 8])
    def test_uniform_is_equality(self, d):
        rep = verify_equal_schmidt(np.full(d, 1.0 / d), d)
        assert rep.passed and rep.verdict == "equality"

    @settings(max_examples=40, deadline=None)
    @given(st.integers(4, 9), st.integers(0, 2**31))
    def test_random(self, d, seed):
        rep = verify_equal_schmidt(np.random.default_rng(seed).dirichlet(np.ones(d)), d)
        assert rep.passed, rep.failures
        assert not rep.flagged

    def test_small_d_rejected(self):
        with pytest.raises(DimensionError):
            verify_equal_schmidt([0.5, 0.3, 0.2], 3)


class TestMaxEntangled:
    def test_example(self):
        rep = verify_max_entangled([0.7, 0.1, 0.1, 0.1], 4)
        assert rep.passed and rep.verdict == "equality"
        assert rep.bound == pytest.approx(0.7291502622129181, abs=1e-15)

    @pytest.mark.parametrize("which", ["first", "second"])
    def test_either_side(self, rng, which):
        for d in (2, 4, 7):
            q = rng.dirichlet(np.ones(d))
            rep = verify_max_entangled(q, d, which=which)
            assert rep.passed
            assert abs(rep.bound - negativity_pure(q, d)) <= 1e-12

    def test_bad_which(self):
        with pytest.raises(ValueError):
            verify_max_entangled([0.5, 0.5], 2, which="both")


def test_check_raises_on_failure():
    rep = verify_low_dim([0.9, 0.1], [0.6, 0.4], 2)
    assert rep.check() is rep
    rep.failures["bound_vs_product"] = 1.0
    with pytest.raises(VerificationError):
        rep.check()


class TestScan:
    def test_strata_and_sizes(self):
        reps = scan_generic(4, 30, seed=1)
        assert len(reps) == 30 * len(STRATA)
        assert [r.stratum for r in reps[::30]] == list(STRATA)

    @pytest.mark.parametrize("d", [4, 5, 6])
    def test_equal_and_uniform_never_flagged(self, d):
        reps = scan_generic(d, 200, seed=3, strata=("equal", "uniform"))
        assert not any(r.flagged for r in reps)

    def test_deterministic(self):
        a = scan_generic(5, 50, seed=11)
        b = scan_generic(5, 50, seed=11)
        assert [r.bound for r in a] == [r.bound for r in b]
        assert all(np.array_equal(x.p, y.p) for x, y in zip(a, b))

    def test_stratum_subset_reproduces_full_run(self):
        full = [r for r in scan_generic(4, 20, seed=2) if r.stratum == "near_equal"]
        sub = scan_generic(4, 20, seed=2, strata=("near_equal",))
        assert [r.bound for r in full] == [r.bound for r in sub]

    def test_bounds_match_direct(self):
        for r in scan_generic(6, 10, seed=5):
            assert abs(r.bound - bound_direct(r.p, r.q, 6)) <= 1e-13

    def test_bad_inputs(self):
        with pytest.raises(DimensionError):
            scan_generic(3, 5, seed=0)
        with pytest.raises(ValueError):
            scan_generic(4, 5, seed=0, strata=("bogus",))


def test_perturb_stays_close(rng):
    for _ in range(100):
        p = rng.dirichlet(np.ones(5))
        r = perturb(p, 0.01, rng)
        assert np.all(r >= 0) and abs(r.sum() - 1) <= 1e-15
        assert np.max(np.abs(r - p)) <= 0.01
