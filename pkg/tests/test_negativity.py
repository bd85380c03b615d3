import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from conftest import random_density, random_state
from oracles import negativity_by_eigs
from entangleswap.exceptions import DimensionError, StateError
from entangleswap.linalg import Dims, haar_unitary
from entangleswap.negativity import DensityMatrix, negativity_mixed, negativity_pure
from entangleswap.schmidt import PureState, schmidt_decompose, state_from_schmidt


def bell_dm():
    v = np.array([1, 0, 0, 1]) / np.sqrt(2)
    return DensityMatrix(np.outer(v, v), Dims(2, 2))


def test_bell_state():
    assert negativity_mixed(bell_dm()) == pytest.approx(1.0, abs=1e-14)


def test_product_state_zero(rng):
    ra, rb = random_density(rng, 2), random_density(rng, 3)
    assert negativity_mixed(DensityMatrix(np.kron(ra, rb), Dims(2, 3))) == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_maximally_entangled(d):
    psi = state_from_schmidt(np.full(d, 1.0 / d), d)
    assert negativity_mixed(DensityMatrix.from_pure(psi)) == pytest.approx(1.0, abs=1e-13)
    assert negativity_pure(np.full(d, 1.0 / d), d) == pytest.approx(1.0, abs=1e-14)


def test_pure_closed_form_examples():
    assert negativity_pure([0.5, 0.5], 2) == pytest.approx(1.0, abs=1e-15)
    assert negativity_pure([0.9, 0.1], 2) == pytest.approx(0.6, abs=1e-15)
    lam = [0.5, 0.3, 0.2]
    mixed = negativity_mixed(DensityMatrix.from_pure(state_from_schmidt(lam, 3)))
    assert abs(negativity_pure(lam, 3) - mixed) <= 1e-12
    # sqrt(.15) + sqrt(.10) + sqrt(.06) at 40 digits
    assert negativity_pure(lam, 3) == pytest.approx(0.9484750749158974315, abs=1e-15)


def test_pure_consistency_random(rng):
    for da, db in [(2, 2), (3, 3), (2, 4), (4, 3), (5, 5)]:
        for _ in range(10):
            psi = PureState(random_state(rng, da * db), Dims(da, db))
            lam, _, _ = schmidt_decompose(psi)
            mixed = negativity_mixed(DensityMatrix.from_pure(psi))
            assert abs(negativity_pure(lam, min(da, db)) - mixed) <= 1e-11


def test_mixed_matches_eigen_oracle(rng):
    for da, db in [(2, 2), (2, 3), (3, 3)]:
        rho = random_density(rng, da * db, rank=2)
        assert abs(negativity_mixed(DensityMatrix(rho, Dims(da, db)))
                   - max(negativity_by_eigs(rho, da, db), 0.0)) <= 1e-12


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=2, max_value=6), st.integers(min_value=0, max_value=2**31))
def test_range_and_maximum(d, seed):
    lam = np.random.default_rng(seed).dirichlet(np.ones(d))
    n = negativity_pure(lam, d)
    assert 0.0 <= n <= 1.0
    # only the uniform vector attains 1
    assert n < 1.0 or np.allclose(lam, 1.0 / d)


def test_local_unitary_invariance(rng):
    psi = PureState(random_state(rng, 9), Dims(3, 3))
    rho = psi.density()
    u = np.kron(haar_unitary(3, rng), haar_unitary(3, rng))
    a = negativity_mixed(DensityMatrix(rho, Dims(3, 3)))
    b = negativity_mixed(DensityMatrix(u @ rho @ u.conj().T, Dims(3, 3)))
    assert abs(a - b) <= 1e-10


def test_d_one_undefined():
    with pytest.raises(DimensionError):
        negativity_pure([1.0], 1)
    with pytest.raises(DimensionError):
        negativity_mixed(DensityMatrix(np.eye(3) / 3, Dims(1, 3)))


def test_density_validation():
    with pytest.raises(StateError):
        DensityMatrix(np.eye(4), Dims(2, 2))
    with pytest.raises(StateError):
        DensityMatrix(np.diag([1.5, -0.5, 0, 0]), Dims(2, 2))
    with pytest.raises(StateError):
        DensityMatrix(np.array([[0.5, 1], [0, 0.5]]), Dims(1, 2))


def test_separable_clamped_nonnegative():
    rho = np.diag([0.5, 0, 0, 0.5]).astype(complex)
    assert negativity_mixed(DensityMatrix(rho, Dims(2, 2))) == 0.0
