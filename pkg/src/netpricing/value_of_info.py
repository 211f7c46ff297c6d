"""Profit of a network-blind monopolist versus one pricing with full knowledge.

``pi0``: prices set as if ``G = 0`` (i.e. ``(a + c1)/2``) while consumers
still react to the network. ``piN``: optimal discriminatory prices. With
``v = (a - c1)/2`` and ``M = Lambda - G``::

    pi0 = v^T M^{-1} v,    piN = v^T ((M + M^T)/2)^{-1} v

and ``pi0 / piN`` lies between the extreme eigenvalues of
``(2I + M M^{-T} + M^T M^{-1}) / 4``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotPositiveDefinite, SingularSystem
from .model import MarketInstance


@dataclass(frozen=True)
class ProfitComparison:
    pi0: float
    piN: float
    ratio: float
    lower_bound: float
    upper_bound: float

    @property
    def gain(self) -> float:
        """``piN / pi0 - 1``."""
        return self.piN / self.pi0 - 1.0


def _solve(M, v):
    try:
        return np.linalg.solve(M, v)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from None


def profits(instance: MarketInstance):
    v = 0.5 * (instance.a - instance.c)
    M = instance.M
    pi0 = float(v @ _solve(M, v))
    piN = float(v @ _solve(0.5 * (M + M.T), v))
    return pi0, piN


def _sym_sqrt(M):
    S = 0.5 * (M + M.T)
    w, V = np.linalg.eigh(S)
    if w[0] <= 0.0:
        raise NotPositiveDefinite(
            f"Lambda - G is not positive definite (min eigenvalue of symmetric part {w[0]:.3g})")
    return (V * np.sqrt(w)) @ V.T


def ratio_bounds(instance: MarketInstance):
    """Extreme eigenvalues of ``R ((M^{-1} + M^{-T})/2) R``, ``R = sqrt((M + M^T)/2)``.

    This symmetric matrix is similar to ``(2I + M M^{-T} + M^T M^{-1}) / 4``,
    so a symmetric eigensolver suffices.
    """
    M = instance.M
    R = _sym_sqrt(M)
    # R M^{-1} R without forming M^{-1}
    X = R @ _solve(M, R)
    B = 0.5 * (X + X.T)
    w = np.linalg.eigvalsh(B)
    return float(w[0]), float(w[-1])


def compare(instance: MarketInstance) -> ProfitComparison:
    lo, hi = ratio_bounds(instance)
    pi0, piN = profits(instance)
    return ProfitComparison(pi0, piN, pi0 / piN, lo, hi)
