"""Market instances, admissibility checks, and the utility/profit primitives.

Agents are indexed ``0..n-1``. ``G[i, j]`` is the influence of agent ``j`` on
agent ``i``; the quadratic curvature enters the equilibrium equations through
``Lambda = diag(2 b)``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InvalidInstance

# absolute slack used when checking the structural invariants of G
STRUCT_TOL = 1e-12


def _frozen(arr, ndim, name):
    out = np.array(arr, dtype=float, copy=True)
    if out.ndim != ndim:
        raise InvalidInstance(f"{name} must be {ndim}-dimensional, got shape {out.shape}")
    if not np.all(np.isfinite(out)):
        raise InvalidInstance(f"{name} contains NaN or Inf")
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class MarketInstance:
    """Agents' utility coefficients, the influence matrix and marginal cost.

    Construction checks shapes and finiteness only. Whether the instance
    satisfies the modelling assumptions is reported by :func:`validate`, so
    that out-of-assumption instances (e.g. the star networks used in the
    value-of-information study) can still be represented.
    """

    G: np.ndarray
    a: np.ndarray
    b: np.ndarray
    c: float

    def __post_init__(self):
        G = _frozen(self.G, 2, "G")
        a = _frozen(self.a, 1, "a")
        b = _frozen(self.b, 1, "b")
        n = a.shape[0]
        if G.shape != (n, n) or b.shape != (n,):
            raise InvalidInstance(
                f"dimension mismatch: G {G.shape}, a {a.shape}, b {b.shape}"
            )
        c = float(self.c)
        if not math.isfinite(c):
            raise InvalidInstance("c must be finite")
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def lam(self) -> np.ndarray:
        """Diagonal of Lambda, i.e. ``2 b``."""
        return 2.0 * self.b

    @property
    def M(self) -> np.ndarray:
        """``Lambda - G``."""
        return np.diag(self.lam) - self.G

    def restrict(self, idx) -> "MarketInstance":
        """Sub-market on the agents ``idx`` (in the given order)."""
        idx = np.asarray(idx, dtype=int)
        return MarketInstance(self.G[np.ix_(idx, idx)], self.a[idx], self.b[idx], self.c)

    def with_G(self, G) -> "MarketInstance":
        return MarketInstance(G, self.a, self.b, self.c)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "G": self.G.tolist(),
            "a": self.a.tolist(),
            "b": self.b.tolist(),
            "c": self.c,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MarketInstance":
        try:
            inst = cls(data["G"], data["a"], data["b"], data["c"])
        except KeyError as exc:
            raise InvalidInstance(f"missing field {exc.args[0]!r}") from None
        except (TypeError, ValueError) as exc:
            raise InvalidInstance(f"malformed instance: {exc}") from None
        if "n" in data and int(data["n"]) != inst.n:
            raise InvalidInstance(f"declared n={data['n']} but arrays have n={inst.n}")
        return inst


@dataclass(frozen=True)
class Violation:
    code: str  # "shape", "diagonal", "range", "dominance", "margin"
    indices: tuple
    message: str

    def __str__(self):
        return self.message


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> set:
        return {v.code for v in self.violations}

    def __iter__(self):
        return iter(self.violations)

    def __len__(self):
        return len(self.violations)

    def to_list(self) -> list:
        return [{"code": v.code, "indices": list(v.indices), "message": v.message}
                for v in self.violations]


def _idx_str(idx):
    return ",".join(str(int(i)) for i in idx)


def validate(instance: MarketInstance, tol: float = STRUCT_TOL) -> ValidationReport:
    """Report every violated invariant; an empty report means admissible."""
    G, a, b, c = instance.G, instance.a, instance.b, instance.c
    out = []
    diag = np.flatnonzero(np.abs(np.diag(G)) > tol)
    if diag.size:
        out.append(Violation("diagonal", tuple(diag.tolist()),
                             f"nonzero diagonal g_ii at i={_idx_str(diag)}"))
    bad = np.argwhere((G < -tol) | (G > 1 + tol))
    if bad.size:
        rows = np.unique(bad[:, 0])
        out.append(Violation("range", tuple(map(tuple, bad.tolist())),
                             f"entries of G outside [0,1] in rows i={_idx_str(rows)}"))
    a1 = np.flatnonzero(~(b > G.sum(axis=1)))
    if a1.size:
        out.append(Violation("dominance", tuple(a1.tolist()),
                             f"diagonal dominance (b_i > sum_j g_ij) fails at i={_idx_str(a1)}"))
    a2 = np.flatnonzero(~(a > c))
    if a2.size:
        out.append(Violation("margin", tuple(a2.tolist()),
                             f"positive margin (a_i > c) fails at i={_idx_str(a2)}"))
    return ValidationReport(tuple(out))


def utility(instance: MarketInstance, i: int, x, p_i: float) -> float:
    """``a_i x_i - b_i x_i^2 + x_i sum_j g_ij x_j - p_i x_i``."""
    n = instance.n
    if not -n <= i < n:
        raise IndexError(f"agent index {i} out of range for n={n}")
    x = np.asarray(x, dtype=float)
    xi = x[i]
    return float(instance.a[i] * xi - instance.b[i] * xi * xi
                 + xi * (instance.G[i] @ x) - p_i * xi)


def profit(instance: MarketInstance, p, x) -> float:
    """Monopolist profit ``sum_i (p_i - c) x_i``."""
    if np.ndim(p) == 0:
        p = np.full(instance.n, float(p))
    p = np.asarray(p, dtype=float)
    x = np.asarray(x, dtype=float)
    if p.shape != (instance.n,) or x.shape != (instance.n,):
        raise ValueError(f"expected length-{instance.n} vectors, got {p.shape} and {x.shape}")
    return float((p - instance.c) @ x)


def load_instance(path, strict: bool = True) -> MarketInstance:
    """Read the JSON instance format ``{"n", "G", "a", "b", "c"}``.

    With ``strict`` the instance must pass :func:`validate`; otherwise only
    the structural checks (shapes, finiteness, diagonal, entry range) apply.
    """
    text = Path(path).read_text()
    # json accepts the NaN/Infinity literals; the dataclass rejects them
    data = json.loads(text)
    inst = MarketInstance.from_dict(data)
    report = validate(inst)
    fatal = [v for v in report if strict or v.code in ("diagonal", "range")]
    if fatal:
        raise InvalidInstance("; ".join(map(str, fatal)), fatal)
    return inst


def dump_instance(instance: MarketInstance, path) -> None:
    Path(path).write_text(json.dumps(instance.to_dict()) + "\n")
