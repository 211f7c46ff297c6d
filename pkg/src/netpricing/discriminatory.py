"""Optimal individualized prices under perfect price discrimination."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .centrality import weighted_bonacich
from .errors import NotPositiveDefinite, SingularSystem
from .model import MarketInstance


@dataclass(frozen=True)
class DiscriminatoryPricingResult:
    p: np.ndarray
    x: np.ndarray
    profit: float
    nominal: np.ndarray
    markup: np.ndarray
    discount: np.ndarray


def _avg_network(G):
    return 0.5 * (G + G.T)


def optimal_prices(instance: MarketInstance) -> DiscriminatoryPricingResult:
    """Closed-form optimum ``p = a - (Lambda - G)(Lambda - (G+G^T)/2)^{-1} (a - c1)/2``.

    Equilibrium consumption at these prices is
    ``x = (Lambda - (G+G^T)/2)^{-1} (a - c1)/2``, strictly positive for
    admissible instances.

    The profit Hessian is ``-(A + A^T)`` with ``A = (Lambda - G)^{-1}``, so the
    stationary point is the maximum only if ``Lambda - G`` is positive
    definite; otherwise :class:`NotPositiveDefinite` is raised.
    """
    G, a, c = instance.G, instance.a, instance.c
    lam = instance.lam
    v = 0.5 * (a - c)
    M_avg = np.diag(lam) - _avg_network(G)
    try:
        chol = np.linalg.cholesky(M_avg)
    except np.linalg.LinAlgError:
        raise NotPositiveDefinite("Lambda - (G+G^T)/2 is not positive definite; "
                                  "profit has no interior maximum") from None
    x = np.linalg.solve(chol.T, np.linalg.solve(chol, v))
    if not np.all(np.isfinite(x)):
        raise SingularSystem("non-finite solution of the average-network system")
    p = a - (lam * x - G @ x)
    nominal, markup, discount = decompose_prices(instance)
    return DiscriminatoryPricingResult(p, x, float((p - c) @ x), nominal, markup, discount)


def decompose_prices(instance: MarketInstance):
    """Split the optimal prices into ``nominal + markup - discount``.

    ``nominal = (a + c1)/2``; markup and discount are the influence received
    and exerted, weighted by the weighted Bonacich centrality of the average
    interaction network::

        k = K(G_avg, Lambda^{-1}, (a - c1)/2)
        markup   = G   Lambda^{-1} k / 2
        discount = G^T Lambda^{-1} k / 2
    """
    G, a, c = instance.G, instance.a, instance.c
    inv_lam = 1.0 / instance.lam
    v = 0.5 * (a - c)
    k = weighted_bonacich(_avg_network(G), inv_lam, v)
    w = 0.5 * inv_lam * k
    return 0.5 * (a + c), G @ w, G.T @ w
