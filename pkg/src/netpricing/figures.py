"""Profit-ratio sweeps over blended networks (star, triangular, preferential attachment)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import generators
from .generators import BlendSpec, blend, homogeneous_instance, parse_b_rule
from .value_of_info import compare

FAMILIES = ("star", "triangular", "pa")
COLUMNS = ("alpha", "ratio_mean", "lower_mean", "upper_mean")


@dataclass(frozen=True)
class SweepRow:
    alpha: float
    ratio_mean: float
    lower_mean: float
    upper_mean: float
    ratio_std: float
    lower_min_gap: float  # min over instances of ratio - lower
    upper_min_gap: float  # min over instances of upper - ratio
    count: int


def instance_seeds(seed: int, count: int):
    return np.random.SeedSequence(seed).spawn(count)


def family_pairs(family: str, n: int, instances: int, seed: int):
    if family == "star":
        return [generators.star_pair(n)]
    if family == "triangular":
        return [generators.triangular_pair(n, s) for s in instance_seeds(seed, instances)]
    if family == "pa":
        return [generators.preferential_attachment_pair(n, s)
                for s in instance_seeds(seed, instances)]
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def alpha_grid(points: int) -> np.ndarray:
    if points < 2:
        raise ValueError("need at least 2 alpha points")
    return np.linspace(0.0, 1.0, points)


def sweep(family: str, n: int = 100, b_rule="n/10", alpha_points: int = 101,
          instances: int = 100, seed: int = 0, margin: float = 1.0,
          b_is_diagonal: bool = False):
    """Average ``pi0/piN`` and its spectral bounds over instances, per alpha.

    The same sampled networks are reused at every alpha. Rows are ordered by
    alpha; within a row, instances are accumulated in index order.
    """
    b = parse_b_rule(b_rule, n)
    pairs = family_pairs(family, n, instances, seed)
    rows = []
    for alpha in alpha_grid(alpha_points):
        vals = np.empty((len(pairs), 3))
        for k, (g1, g2) in enumerate(pairs):
            G = blend(BlendSpec(g1, g2, alpha))
            cmp = compare(homogeneous_instance(G, b, margin, b_is_diagonal=b_is_diagonal))
            vals[k] = cmp.ratio, cmp.lower_bound, cmp.upper_bound
        mean = vals.mean(axis=0)
        std = float(vals[:, 0].std(ddof=1)) if len(pairs) > 1 else 0.0
        rows.append(SweepRow(float(alpha), *map(float, mean), std,
                             float(np.min(vals[:, 0] - vals[:, 1])),
                             float(np.min(vals[:, 2] - vals[:, 0])), len(pairs)))
    return rows
