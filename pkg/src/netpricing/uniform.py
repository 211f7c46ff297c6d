"""Optimal single uniform price via centrality-gain breakpoints.

As the common price rises, agents stop buying in increasing order of their
centrality gain ``H_i(G_S, Lambda_S^{-1}, a_S)`` computed on the agents ``S``
still buying. Between consecutive breakpoints the active set is fixed, the
profit is a concave quadratic in the price, and its maximizer is available in
closed form.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .centrality import centrality_gain
from .model import MarketInstance

GAIN_TIE_TOL = 1e-9


@dataclass(frozen=True)
class Segment:
    lo: float
    hi: float
    active: tuple
    p_best: float
    profit: float


@dataclass(frozen=True)
class UniformPriceResult:
    p_opt: float
    profit: float
    breakpoints: tuple
    dropout_sets: tuple
    active_profile: tuple
    segments: tuple


def breakpoints(instance: MarketInstance, tie_tol: float = GAIN_TIE_TOL):
    """Breakpoint prices ``p_1 < p_2 < ...`` and the agents dropping at each.

    Agents whose gain is within ``tie_tol`` (relative to ``max(1, |p_k|)``) of
    the minimum drop together.
    """
    remaining = np.arange(instance.n)
    prices, drops = [], []
    while remaining.size:
        sub = instance.restrict(remaining)
        H = centrality_gain(sub.G, 1.0 / sub.lam, sub.a)
        pk = float(H.min())
        mask = H <= pk + tie_tol * max(1.0, abs(pk))
        prices.append(pk)
        drops.append(tuple(int(i) for i in remaining[mask]))
        remaining = remaining[~mask]
    return prices, drops


def _segment_quadratic(instance, active):
    """``(1^T A a_S, 1^T A 1)`` with ``A = (Lambda_S - G_S)^{-1}``."""
    S = np.asarray(active, dtype=int)
    M = np.diag(instance.lam[S]) - instance.G[np.ix_(S, S)]
    # 1^T A = (A^T 1)^T, one transposed solve
    w = np.linalg.solve(M.T, np.ones(S.size))
    return float(w @ instance.a[S]), float(w.sum())


def segment_profit(instance, active, p) -> float:
    """``(p - c) 1^T (Lambda_S - G_S)^{-1} (a_S - p 1)``."""
    alpha, beta = _segment_quadratic(instance, active)
    return (p - instance.c) * (alpha - p * beta)


def optimal_uniform_price(instance: MarketInstance,
                          tie_tol: float = GAIN_TIE_TOL) -> UniformPriceResult:
    """Scan the segments ``[c, p_1], [p_1, p_2], ...`` and keep the best.

    On a segment with active set ``S`` the profit is
    ``(p - c)(alpha - p beta)``; its unconstrained maximizer is
    ``(alpha + c beta) / (2 beta)``, clamped to the segment.
    """
    c = instance.c
    prices, drops = breakpoints(instance, tie_tol)
    active = list(range(instance.n))
    lo = c
    segments = []
    best = (0.0, c, ())
    for pk, dk in zip(prices, drops):
        hi = pk
        if hi > lo and active:
            alpha, beta = _segment_quadratic(instance, active)
            p_hat = (alpha + c * beta) / (2.0 * beta)
            p = min(max(p_hat, lo), hi)
            re = (p - c) * (alpha - p * beta)
            segments.append(Segment(lo, hi, tuple(active), p, re))
            if re > best[0]:
                best = (re, p, tuple(active))
        lo = max(lo, hi)
        gone = set(dk)
        active = [i for i in active if i not in gone]
    profit_opt, p_opt, profile = best
    return UniformPriceResult(p_opt, profit_opt, tuple(prices), tuple(drops),
                              profile, tuple(segments))
