"""Bonacich-family centralities.

``bonacich(G, alpha)``             (I - alpha G)^{-1} 1
``weighted_bonacich(G, D, v)``     (I - G D)^{-1} v
``centrality_gain(G, D, v)``       K(G, D, v) / K(G, D, 1), entrywise
"""
from __future__ import annotations

import numpy as np

from .errors import IllDefined

POWER_ITERATIONS = 200
POWER_TOL = 1e-10
NEG_TOL = 1e-12


def spectral_radius_bound(A, iterations: int = POWER_ITERATIONS, tol: float = POWER_TOL):
    """Collatz-Wielandt bracket ``(lo, hi)`` on the spectral radius of ``|A|``.

    Power iteration on ``|A| + I`` (the shift removes periodicity, e.g. in
    bipartite stars). For any positive ``x`` the min/max of
    ``(|A| x)_i / x_i`` bracket the Perron root, and ``rho(A) <= rho(|A|)``.
    """
    B = np.abs(np.asarray(A, dtype=float))
    n = B.shape[0]
    if n == 0:
        return 0.0, 0.0
    x = np.ones(n)
    lo, hi = 0.0, np.inf
    for _ in range(iterations):
        y = B @ x
        ratio = y / x
        lo, hi = max(lo, ratio.min()), min(hi, ratio.max())
        if hi - lo <= tol * max(1.0, hi) or hi < 1.0 - tol:
            break
        x = y + x
        x /= x.max()
        # keep x strictly positive; the bracket stays valid, only looser
        np.maximum(x, 1e-200, out=x)
    return float(lo), float(hi)


def _solve_resolvent(GD, rhs):
    """Solve ``(I - GD) k = rhs`` after certifying a nonnegative inverse."""
    GD = np.asarray(GD, dtype=float)
    n = GD.shape[0]
    if np.any(GD < -NEG_TOL):
        raise IllDefined("matrix has negative entries; nonnegative inverse not certified")
    lo, hi = spectral_radius_bound(GD)
    if not hi < 1.0:
        raise IllDefined(f"spectral radius not certified below 1 (bracket [{lo:.6g}, {hi:.6g}])")
    try:
        k = np.linalg.solve(np.eye(n) - GD, rhs)
    except np.linalg.LinAlgError as exc:
        raise IllDefined(f"I - GD is singular: {exc}") from None
    return k


def bonacich(G, alpha: float) -> np.ndarray:
    G = np.asarray(G, dtype=float)
    k = _solve_resolvent(alpha * G, np.ones(G.shape[0]))
    if np.any(k < -NEG_TOL):
        raise IllDefined("Bonacich centrality has a negative entry")
    return k


def weighted_bonacich(G, D, v) -> np.ndarray:
    """``(I - G D)^{-1} v``; ``D`` may be given as a matrix or its diagonal."""
    G = np.asarray(G, dtype=float)
    d = _diag(D)
    v = np.asarray(v, dtype=float)
    k = _solve_resolvent(G * d[None, :], v)
    if np.all(v >= 0) and np.all(d >= 0) and np.any(k < -NEG_TOL):
        raise IllDefined("weighted centrality has a negative entry for a nonnegative seed")
    return k


def centrality_gain(G, D, v) -> np.ndarray:
    G = np.asarray(G, dtype=float)
    d = _diag(D)
    v = np.asarray(v, dtype=float)
    n = G.shape[0]
    # one factorisation, both seeds
    both = _solve_resolvent(G * d[None, :], np.column_stack([v, np.ones(n)]))
    num, den = both[:, 0], both[:, 1]
    if np.any(den <= 0):
        raise IllDefined("zero or negative denominator in centrality gain")
    return num / den


def _diag(D):
    D = np.asarray(D, dtype=float)
    return np.diag(D).copy() if D.ndim == 2 else D
