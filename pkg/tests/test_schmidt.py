import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from conftest import random_state
from entangleswap.exceptions import DimensionError, StateError
from entangleswap.linalg import Dims, haar_unitary
from entangleswap.schmidt import PureState, schmidt_decompose, schmidt_vector, state_from_schmidt

simplex = st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=1, max_size=6).filter(
    lambda xs: sum(xs) > 1e-3).map(lambda xs: np.array(xs) / sum(xs))


def test_bell_coefficients():
    psi = PureState(np.array([1, 0, 0, 1]) / np.sqrt(2), Dims(2, 2))
    lam, _, _ = schmidt_decompose(psi)
    assert_allclose(lam, [0.5, 0.5], atol=1e-15)


def test_product_state():
    psi = PureState(np.array([0, 1, 0, 0]), Dims(2, 2))
    lam, _, _ = schmidt_decompose(psi)
    assert np.array_equal(lam, [1.0, 0.0])


def test_random_reconstruction(rng):
    for _ in range(20):
        psi = PureState(random_state(rng, 9), Dims(3, 3))
        lam, left, right = schmidt_decompose(psi)
        sv = np.linalg.svd(psi.matrix(), compute_uv=False)
        assert_allclose(lam, sv**2, atol=1e-14)
        rebuilt = sum(np.sqrt(lam[i]) * np.kron(left[:, i], right[:, i]) for i in range(3))
        assert np.linalg.norm(rebuilt - psi.amplitudes) <= 1e-10
        assert np.all(np.diff(lam) <= 0)


def test_rectangular(rng):
    psi = PureState(random_state(rng, 10), Dims(2, 5))
    lam, left, right = schmidt_decompose(psi)
    assert lam.shape == (2,)
    rebuilt = sum(np.sqrt(lam[i]) * np.kron(left[:, i], right[:, i]) for i in range(2))
    assert np.linalg.norm(rebuilt - psi.amplitudes) <= 1e-10


def test_state_from_schmidt_examples():
    assert_allclose(state_from_schmidt([1.0], 2).amplitudes, [1, 0, 0, 0])
    assert_allclose(state_from_schmidt([0.5, 0.5], 2).amplitudes, np.array([1, 0, 0, 1]) / np.sqrt(2))


def test_round_trip_example():
    lam, _, _ = schmidt_decompose(state_from_schmidt([0.5, 0.3, 0.2], 3))
    assert_allclose(lam, [0.5, 0.3, 0.2], atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(simplex)
def test_round_trip_sorted(p):
    d = max(len(p), 2)
    lam, _, _ = schmidt_decompose(state_from_schmidt(p, d))
    expected = np.sort(np.concatenate([p, np.zeros(d - len(p))]))[::-1]
    expected[expected < 1e-14] = 0.0
    assert np.max(np.abs(lam - expected)) <= 1e-12


def test_local_unitary_invariance(rng):
    for d in (2, 3, 4):
        p = rng.dirichlet(np.ones(d))
        psi = state_from_schmidt(p, d)
        u = np.kron(haar_unitary(d, rng), haar_unitary(d, rng))
        lam, _, _ = schmidt_decompose(PureState(u @ psi.amplitudes, psi.dims))
        assert np.max(np.abs(lam - np.sort(p)[::-1])) <= 1e-10


def test_rejects_unnormalized():
    with pytest.raises(StateError):
        PureState(np.array([1, 0, 0, 1.0]), Dims(2, 2))


def test_rejects_bad_vectors():
    with pytest.raises(StateError):
        schmidt_vector([0.5, 0.6])
    with pytest.raises(StateError):
        schmidt_vector([1.2, -0.2])
    with pytest.raises(DimensionError):
        state_from_schmidt([0.25] * 4, 3)


def test_schmidt_vector_keeps_order_unless_asked():
    assert list(schmidt_vector([0.2, 0.8])) == [0.2, 0.8]
    assert list(schmidt_vector([0.2, 0.8], sort=True)) == [0.8, 0.2]
    assert list(schmidt_vector([1.0], 3)) == [1.0, 0.0, 0.0]
