"""Network families used in the value-of-information study.

Each generator returns a pair ``(G1, G2)`` of influence matrices that are
polar opposites in who influences whom; :func:`blend` interpolates between
them as ``alpha G1 + (1 - alpha) G2``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .model import MarketInstance


@dataclass(frozen=True, eq=False)
class BlendSpec:
    g1: np.ndarray
    g2: np.ndarray
    alpha: float


def star_pair(n: int):
    """``G1``: agent 0 is influenced by everybody else; ``G2 = G1^T``."""
    if n < 2:
        raise ValueError(f"star needs n >= 2, got {n}")
    G1 = np.zeros((n, n))
    G1[0, 1:] = 1.0
    return G1, G1.T.copy()


def triangular_pair(n: int, seed=None):
    """Strictly upper-triangular ``U`` with i.i.d. uniform [0, 1] entries, and ``U^T``."""
    if n < 2:
        raise ValueError(f"triangular pair needs n >= 2, got {n}")
    rng = np.random.default_rng(seed)
    U = np.triu(rng.random((n, n)), k=1)
    return U, U.T.copy()


def preferential_attachment_graph(n: int, seed=None):
    """Edges ``(newcomer, older)`` of a degree-proportional growth process.

    Starts from agents 0 and 1 joined by an edge; each later agent links to
    two distinct earlier agents, drawn one after the other with probability
    proportional to current degree (the first pick is excluded from the
    second draw).
    """
    if n < 3:
        raise ValueError(f"preferential attachment needs n >= 3, got {n}")
    rng = np.random.default_rng(seed)
    deg = np.zeros(n)
    deg[:2] = 1.0
    edges = [(1, 0)]
    for t in range(2, n):
        w = deg[:t].copy()
        first = int(rng.choice(t, p=w / w.sum()))
        w[first] = 0.0
        second = int(rng.choice(t, p=w / w.sum()))
        for j in (first, second):
            edges.append((t, j))
            deg[j] += 1.0
        deg[t] = 2.0
    return edges


def _row_normalize(G):
    s = G.sum(axis=1, keepdims=True)
    return np.divide(G, s, out=np.zeros_like(G), where=s > 0)


def preferential_attachment_pair(n: int, seed=None):
    """``G1``: newer agents influence older ones; ``G2``: older influence newer.

    Each nonzero row is normalized to equal weights ``1/d_i`` separately in
    the two matrices; rows without links stay zero.
    """
    G1 = np.zeros((n, n))
    G2 = np.zeros((n, n))
    for new, old in preferential_attachment_graph(n, seed):
        G1[old, new] = 1.0
        G2[new, old] = 1.0
    return _row_normalize(G1), _row_normalize(G2)


def blend(spec: BlendSpec) -> np.ndarray:
    alpha = float(spec.alpha)
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    if alpha == 1.0:
        return np.array(spec.g1, dtype=float)
    if alpha == 0.0:
        return np.array(spec.g2, dtype=float)
    return alpha * np.asarray(spec.g1, dtype=float) + (1.0 - alpha) * np.asarray(spec.g2, dtype=float)


def parse_b_rule(rule, n: int) -> float:
    """``"n/10"``, ``"n/3"``, ``"2"``, ``"1.5"``, ``"n"`` -> a number."""
    text = str(rule).replace(" ", "")
    if text.startswith("n"):
        rest = text[1:]
        if not rest:
            return float(n)
        if rest[0] == "/":
            return n / float(Fraction(rest[1:]))
        if rest[0] == "*":
            return n * float(Fraction(rest[1:]))
        raise ValueError(f"cannot parse b rule {rule!r}")
    return float(Fraction(text))


def homogeneous_instance(G, b: float, margin: float = 1.0, c: float = 0.0,
                         b_is_diagonal: bool = False) -> MarketInstance:
    """Identical agents with ``a_i - c = margin`` and curvature ``b``.

    With ``b_is_diagonal`` the value is used as the diagonal of
    ``Lambda`` itself (so ``b_i = b / 2``) instead of as ``b_i``.
    """
    n = np.asarray(G).shape[0]
    bi = 0.5 * b if b_is_diagonal else b
    return MarketInstance(G, np.full(n, c + margin), np.full(n, bi), c)
