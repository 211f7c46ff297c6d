import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from instances import random_G, random_instance, random_pd_instance
from netpricing.discriminatory import optimal_prices
from netpricing.equilibrium import solve_equilibrium
from netpricing.errors import NotPositiveDefinite
from netpricing.generators import BlendSpec, blend, homogeneous_instance, star_pair
from netpricing.model import MarketInstance, profit
from netpricing.value_of_info import compare, profits, ratio_bounds


def test_empty_network():
    inst = MarketInstance(np.zeros((3, 3)), [2, 3, 4], [1, 2, 0.5], 1)
    pi0, piN = profits(inst)
    ref = np.sum((inst.a - 1) ** 2 / (8 * inst.b))
    assert pi0 == pytest.approx(ref) and piN == pytest.approx(ref)
    assert ratio_bounds(inst) == pytest.approx((1.0, 1.0), abs=1e-12)


def test_symmetric_network():
    rng = np.random.default_rng(70)
    inst = random_instance(rng, 8, symmetric=True)
    cmp = compare(inst)
    assert cmp.ratio == pytest.approx(1.0, abs=1e-12)
    assert cmp.lower_bound == pytest.approx(1.0, abs=1e-12)
    assert cmp.upper_bound == pytest.approx(1.0, abs=1e-12)


def test_star_two_routes():
    n = 5
    G1, _ = star_pair(n)
    inst = MarketInstance(0.2 * G1, np.full(n, 2.0), np.full(n, 1.0), 0.5)
    cmp = compare(inst)
    assert cmp.piN > cmp.pi0
    assert cmp.piN == pytest.approx(optimal_prices(inst).profit, rel=1e-12)
    naive = 0.5 * (inst.a + inst.c)
    x = solve_equilibrium(inst, naive).x
    assert cmp.pi0 == pytest.approx(profit(inst, naive, x), rel=1e-10)
    assert cmp.gain == pytest.approx(cmp.piN / cmp.pi0 - 1)


def test_star_blend_lower_bound_tight():
    n = 100
    G1, G2 = star_pair(n)
    inst = homogeneous_instance(blend(BlendSpec(G1, G2, 0.0)), n / 10)
    cmp = compare(inst)
    assert cmp.lower_bound == pytest.approx(cmp.ratio, abs=1e-6)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 9), st.integers(0, 2**32 - 1))
def test_spectral_properties(n, seed):
    rng = np.random.default_rng(seed)
    inst = random_pd_instance(rng, n)
    M = inst.M
    P = M @ np.linalg.inv(M.T)
    assert np.abs(np.linalg.eigvals(P)) == pytest.approx(np.ones(n), abs=1e-8)
    T = P + M.T @ np.linalg.inv(M)
    assert np.abs(np.linalg.eigvals(T)).max() <= 2 + 1e-8
    cmp = compare(inst)
    assert 0 <= cmp.lower_bound <= cmp.ratio + 1e-8
    assert cmp.ratio <= cmp.upper_bound + 1e-8
    assert cmp.upper_bound <= 1 + 1e-8
    # second route: eigenvalues of the nonsymmetric form directly
    ev = np.linalg.eigvals((2 * np.eye(n) + T) / 4).real
    assert (cmp.lower_bound, cmp.upper_bound) == pytest.approx((ev.min(), ev.max()), abs=1e-8)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 10), st.integers(0, 2**32 - 1))
def test_gershgorin_condition_is_sufficient(n, seed):
    rng = np.random.default_rng(seed)
    G = random_G(rng, n)
    b = np.maximum(G.sum(1), G.sum(0)) + rng.uniform(1e-6, 0.5, size=n)
    ratio_bounds(MarketInstance(G, np.full(n, 2.0), b, 0))


def test_not_positive_definite():
    G = np.array([[0, 1.0], [1.0, 0]])
    inst = MarketInstance(G, [2, 2], [0.2, 0.2], 0)
    with pytest.raises(NotPositiveDefinite):
        ratio_bounds(inst)
