"""Random admissible instances shared by the test modules."""
import numpy as np

from netpricing.model import MarketInstance
from netpricing.two_price import TwoPriceInstance


def random_G(rng, n, density=0.6, symmetric=False):
    G = rng.random((n, n)) * (rng.random((n, n)) < density)
    if symmetric:
        G = np.triu(G, 1)
        G = G + G.T
    np.fill_diagonal(G, 0.0)
    return G


def random_instance(rng, n, density=0.6, symmetric=False, slack=(0.05, 1.0)):
    """Diagonal dominance and positive margins hold; Lambda - G is positive definite.

    ``b_i`` exceeds both the row and the column sum of ``G``, which is
    sufficient for positive definiteness (Gershgorin on the symmetric part).
    """
    G = random_G(rng, n, density, symmetric)
    load = np.maximum(G.sum(axis=1), G.sum(axis=0))
    b = load * (1.0 + rng.uniform(*slack, size=n)) + rng.uniform(0.05, 0.5, size=n)
    c = rng.uniform(0.0, 1.0)
    a = c + rng.uniform(0.5, 3.0, size=n)
    return MarketInstance(G, a, b, c)


def random_two_price(rng, n, **kw):
    inst = random_instance(rng, n, **kw)
    amin = inst.a.min()
    lo, hi = np.sort(rng.uniform(inst.c, amin, size=2))
    return TwoPriceInstance(inst, lo, hi)


def random_prices(rng, inst):
    """Prices spread so that some agents drop out and some buy."""
    return rng.uniform(inst.c - 0.5, inst.a.max() + 0.5, size=inst.n)


def random_pd_instance(rng, n, density=0.6):
    """``Lambda - G`` positive definite but diagonal dominance not enforced."""
    while True:
        G = random_G(rng, n, density)
        load = np.maximum(G.sum(axis=1), G.sum(axis=0))
        b = load * rng.uniform(0.3, 1.5, size=n) + 0.05
        S = np.diag(2 * b) - 0.5 * (G + G.T)
        if np.linalg.eigvalsh(S)[0] > 1e-6:
            c = rng.uniform(0.0, 1.0)
            return MarketInstance(G, c + rng.uniform(0.5, 3.0, size=n), b, c)
