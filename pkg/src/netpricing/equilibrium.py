"""Consumption equilibrium of the second-stage game at fixed prices.

Two routes: simultaneous best-response iteration followed by an exact
re-solve on the detected support, and exhaustive support enumeration, which
is kept as a test oracle for small markets.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import Inconsistent, NoConvergence, TooLarge
from .model import MarketInstance

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 10_000
ACTIVE_THRESHOLD = 1e-9
MAX_ENUMERATION = 20


@dataclass(frozen=True)
class ConsumptionEquilibrium:
    x: np.ndarray
    support: tuple
    residual: float
    iterations: int

    @property
    def inactive(self) -> tuple:
        s = set(self.support)
        return tuple(i for i in range(self.x.shape[0]) if i not in s)


def _prices(instance, p):
    if np.ndim(p) == 0:
        return np.full(instance.n, float(p))
    p = np.asarray(p, dtype=float)
    if p.shape != (instance.n,):
        raise ValueError(f"price vector has shape {p.shape}, expected ({instance.n},)")
    return p


def best_response(instance: MarketInstance, i: int, x, p_i: float) -> float:
    x = np.asarray(x, dtype=float)
    drive = instance.a[i] - p_i + instance.G[i] @ x
    return max(drive / (2.0 * instance.b[i]), 0.0)


def best_response_map(instance: MarketInstance, x, p) -> np.ndarray:
    """All agents' best responses to ``x`` at once (Jacobi update)."""
    return np.maximum((instance.a - p + instance.G @ x) / instance.lam, 0.0)


def kkt_residual(instance: MarketInstance, x, p) -> float:
    """Infinity-norm gap between ``x`` and the best response to ``x``."""
    p = _prices(instance, p)
    x = np.asarray(x, dtype=float)
    return float(np.max(np.abs(best_response_map(instance, x, p) - x), initial=0.0))


def support_solution(instance: MarketInstance, support, p) -> np.ndarray:
    """``x_S = (Lambda_S - G_S)^{-1} (a_S - p_S)`` and zero elsewhere."""
    p = _prices(instance, p)
    x = np.zeros(instance.n)
    S = np.asarray(sorted(support), dtype=int)
    if S.size:
        M = np.diag(instance.lam[S]) - instance.G[np.ix_(S, S)]
        x[S] = np.linalg.solve(M, instance.a[S] - p[S])
    return x


def _polish(instance, x, p, tol):
    """Re-solve exactly on the support and repair it until KKT holds."""
    active = set(np.flatnonzero(x > ACTIVE_THRESHOLD).tolist())
    for _ in range(instance.n + 1):
        xs = support_solution(instance, active, p)
        drive = instance.a - p + instance.G @ xs
        drop = {i for i in active if xs[i] <= ACTIVE_THRESHOLD}
        add = {i for i in range(instance.n) if i not in active and drive[i] > tol}
        if not drop and not add:
            return xs, active
        active = (active - drop) | add
    return None, None


def solve_equilibrium(instance: MarketInstance, p, tol: float = DEFAULT_TOL,
                      max_iter: int = DEFAULT_MAX_ITER, x0=None) -> ConsumptionEquilibrium:
    """Unique consumption equilibrium at prices ``p``.

    The Jacobi best-response map is a contraction in the infinity norm
    (factor ``max_i sum_j g_ij / (2 b_i) < 1/2``), so the iteration converges
    from any nonnegative start ``x0``.
    """
    p = _prices(instance, p)
    x = np.zeros(instance.n) if x0 is None else np.maximum(np.asarray(x0, dtype=float), 0.0)
    scale = max(1.0, float(np.max(np.abs(instance.a - p), initial=0.0)
                           / np.min(instance.lam, initial=1.0)))
    it = 0
    step = np.inf
    while it < max_iter:
        it += 1
        nxt = best_response_map(instance, x, p)
        step = float(np.max(np.abs(nxt - x), initial=0.0))
        x = nxt
        if step <= tol * scale:
            break
    polished, active = _polish(instance, x, p, tol)
    if polished is not None:
        res = kkt_residual(instance, polished, p)
        if res <= tol * scale:
            return ConsumptionEquilibrium(polished, tuple(sorted(active)), res, it)
    res = kkt_residual(instance, x, p)
    if res <= tol * scale:
        support = tuple(np.flatnonzero(x > ACTIVE_THRESHOLD).tolist())
        return ConsumptionEquilibrium(x, support, res, it)
    best = ConsumptionEquilibrium(x, tuple(np.flatnonzero(x > 0).tolist()), res, it)
    raise NoConvergence(f"best-response residual {res:.3g} after {it} iterations", best)


def solve_equilibrium_exact(instance: MarketInstance, p, tol: float = 1e-9) -> ConsumptionEquilibrium:
    """Equilibrium by trying every support ``S``; only for ``n <= 20``."""
    n = instance.n
    if n > MAX_ENUMERATION:
        raise TooLarge(f"support enumeration limited to n <= {MAX_ENUMERATION}, got {n}")
    p = _prices(instance, p)
    found = []
    for r in range(n + 1):
        for S in itertools.combinations(range(n), r):
            x = support_solution(instance, S, p)
            idx = list(S)
            if idx and np.any(x[idx] < -tol):
                continue
            out = [i for i in range(n) if i not in S]
            drive = instance.a - p + instance.G @ x
            if out and np.any(drive[out] > tol):
                continue
            found.append((S, x))
    if not found:
        raise Inconsistent("no support satisfies the equilibrium conditions")
    S0, x0 = found[0]
    for S, x in found[1:]:
        if np.max(np.abs(x - x0)) > 1e3 * tol:
            raise Inconsistent(f"supports {S0} and {S} give different equilibria")
    # several supports can only differ by agents sitting exactly at zero;
    # report the smallest, i.e. ties resolved toward inactive
    S0, x0 = min(found, key=lambda t: len(t[0]))
    x0 = np.maximum(x0, 0.0)
    return ConsumptionEquilibrium(x0, tuple(S0), kkt_residual(instance, x0, p), 0)
