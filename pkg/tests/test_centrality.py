import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from instances import random_instance
from netpricing.centrality import (bonacich, centrality_gain, spectral_radius_bound,
                                   weighted_bonacich)
from netpricing.errors import IllDefined


def neumann(M, v, terms=60):
    """Truncated series sum_{t<=terms} M^t v."""
    out = np.zeros_like(v, dtype=float)
    term = np.array(v, dtype=float)
    for _ in range(terms + 1):
        out += term
        term = M @ term
    return out


def test_bonacich_trivial():
    assert np.array_equal(bonacich(np.zeros((3, 3)), 0.7), np.ones(3))
    assert np.array_equal(bonacich(np.zeros((1, 1)), 0.3), np.ones(1))


def test_bonacich_pair():
    G = np.array([[0, 1.0], [1.0, 0]])
    oracle = neumann(0.25 * G, np.ones(2))
    assert oracle == pytest.approx([4 / 3, 4 / 3], abs=1e-12)
    assert bonacich(G, 0.25) == pytest.approx(oracle, abs=1e-12)


def test_bonacich_ill_defined():
    G = np.array([[0, 1.0], [1.0, 0]])
    with pytest.raises(IllDefined):
        bonacich(G, 1.0)
    with pytest.raises(IllDefined):
        bonacich(G, 2.0)


def test_weighted_trivial():
    v = np.array([0.3, 1.2, 2.0])
    D = np.diag([0.2, 0.1, 0.3])
    assert np.array_equal(weighted_bonacich(np.zeros((3, 3)), D, v), v)
    G = np.ones((3, 3)) - np.eye(3)
    assert np.array_equal(weighted_bonacich(G, D, np.zeros(3)), np.zeros(3))


def test_weighted_matches_series_random():
    rng = np.random.default_rng(3)
    inst = random_instance(rng, 4)
    D = 1.0 / inst.lam
    ref = neumann(inst.G * D[None, :], inst.a)
    assert weighted_bonacich(inst.G, np.diag(D), inst.a) == pytest.approx(ref, abs=1e-8)


def test_gain_trivial():
    rng = np.random.default_rng(4)
    inst = random_instance(rng, 5)
    D = 1.0 / inst.lam
    assert centrality_gain(inst.G, D, np.ones(5)) == pytest.approx(np.ones(5), abs=1e-14)
    assert np.array_equal(centrality_gain(np.zeros((5, 5)), D, inst.a), inst.a)


def test_gain_two_routes():
    rng = np.random.default_rng(5)
    inst = random_instance(rng, 5)
    D = 1.0 / inst.lam
    # route 2: explicit LU factor from scipy, two separate solves
    lu = scipy.linalg.lu_factor(np.eye(5) - inst.G @ np.diag(D))
    ref = scipy.linalg.lu_solve(lu, inst.a) / scipy.linalg.lu_solve(lu, np.ones(5))
    assert centrality_gain(inst.G, D, inst.a) == pytest.approx(ref, rel=1e-12)


def test_spectral_radius_bound_brackets():
    rng = np.random.default_rng(6)
    for _ in range(50):
        A = rng.random((6, 6)) * (rng.random((6, 6)) < 0.5)
        lo, hi = spectral_radius_bound(A, iterations=2000, tol=1e-12)
        rho = max(abs(np.linalg.eigvals(A)))
        assert lo - 1e-9 <= rho <= hi + 1e-9


def test_spectral_radius_periodic_star():
    G = np.zeros((5, 5))
    G[0, 1:] = 1
    G[1:, 0] = 1
    lo, hi = spectral_radius_bound(0.1 * G)
    assert hi < 1


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_neumann_consistency_and_nonnegativity(n, seed):
    rng = np.random.default_rng(seed)
    inst = random_instance(rng, n)
    D = 1.0 / inst.lam
    M = inst.G * D[None, :]
    # similar to Lambda^{-1} G, whose row sums stay below 1/2 under diagonal dominance
    assert np.abs(np.linalg.eigvals(M)).max() <= 0.5
    for v in (inst.a, np.ones(n), rng.random(n)):
        k = weighted_bonacich(inst.G, D, v)
        assert np.max(np.abs(k - neumann(M, v))) <= 1e-6
        assert np.all(k >= -1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1), st.floats(0.01, 100))
def test_gain_scale(n, seed, sigma):
    rng = np.random.default_rng(seed)
    inst = random_instance(rng, n)
    D = 1.0 / inst.lam
    h = centrality_gain(inst.G, D, inst.a)
    assert centrality_gain(inst.G, D, sigma * inst.a) == pytest.approx(sigma * h, rel=1e-10)
