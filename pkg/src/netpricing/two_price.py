"""Two exogenous prices: which agents get the discount.

Writing every feasible price vector as ``p = p_N 1 + delta y`` with
``y in {-1, +1}^n`` (``+1`` is the full price ``p_H``) turns the profit into
a binary quadratic program::

    W(y) = (delta y + c_hat 1)^T A (a_hat - delta y),   A = (Lambda - G)^{-1}
         = y^T Q y + 2 d^T y + z

with ``Q`` symmetric and zero-diagonal. The homogenized matrix
``Q_hat = [[Q, d], [d^T, 0]]`` gives a max-cut style semidefinite relaxation
over unit-diagonal PSD matrices, rounded with random hyperplanes.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInstance, NoConvergence, TooLarge
from .model import MarketInstance

GW_RATIO = 0.878
MAX_BRUTE_FORCE = 20
SDP_TOL = 1e-7
SDP_MAX_ITER = 20_000
ROUNDING_CHUNK = 1024
TIE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class TwoPriceInstance:
    base: MarketInstance
    p_low: float
    p_high: float
    # delta = 0 is only meaningful for algebra checks
    allow_degenerate: bool = field(default=False, repr=False)

    def __post_init__(self):
        lo, hi = float(self.p_low), float(self.p_high)
        object.__setattr__(self, "p_low", lo)
        object.__setattr__(self, "p_high", hi)
        if not (lo < hi or (self.allow_degenerate and lo == hi)):
            raise InvalidInstance(f"need p_low < p_high, got {lo} and {hi}")
        amin = float(self.base.a.min())
        if not hi < amin:
            raise InvalidInstance(
                f"both prices must lie below min_i a_i = {amin}")

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def p_mid(self) -> float:
        return 0.5 * (self.p_low + self.p_high)

    @property
    def delta(self) -> float:
        return self.p_high - self.p_mid

    @property
    def a_hat(self) -> np.ndarray:
        return self.base.a - self.p_mid

    @property
    def c_hat(self) -> float:
        return self.p_mid - self.base.c

    def A(self) -> np.ndarray:
        """``(Lambda - G)^{-1}``, formed explicitly (needed entrywise)."""
        return np.linalg.inv(self.base.M)

    def prices(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        return self.p_mid + self.delta * y

    def objective(self, y) -> float:
        """Profit of assignment ``y`` straight from the definition."""
        y = np.asarray(y, dtype=float)
        A = self.A()
        return float((self.delta * y + self.c_hat) @ A @ (self.a_hat - self.delta * y))


@dataclass(frozen=True, eq=False)
class QuboProblem:
    Q: np.ndarray
    d: np.ndarray
    z: float
    source: TwoPriceInstance | None = None

    @property
    def n(self) -> int:
        return self.d.shape[0]

    @property
    def Q_hat(self) -> np.ndarray:
        n = self.n
        out = np.zeros((n + 1, n + 1))
        out[:n, :n] = self.Q
        out[:n, n] = self.d
        out[n, :n] = self.d
        return out

    def value(self, y) -> np.ndarray | float:
        """``y^T Q y + 2 d^T y + z``; ``y`` may be a batch of rows."""
        y = np.asarray(y, dtype=float)
        if y.ndim == 1:
            return float(y @ self.Q @ y + 2.0 * self.d @ y + self.z)
        return np.einsum("ij,jk,ik->i", y, self.Q, y) + 2.0 * (y @ self.d) + self.z


@dataclass(frozen=True)
class SdpSolution:
    Y: np.ndarray
    objective: float
    factor: np.ndarray
    dual_bound: float
    iterations: int
    primal_residual: float
    dual_residual: float
    converged: bool
    problem: QuboProblem | None = None


@dataclass(frozen=True)
class RoundingStats:
    count: int
    mean: float
    std: float
    best: float


@dataclass(frozen=True)
class TwoPriceResult:
    y: np.ndarray
    prices: np.ndarray | None
    profit: float
    sdp_upper_bound: float | None
    m_offset: float | None
    guarantee_holds: bool | None
    trials: RoundingStats | None
    method: str


def to_qubo(tp: TwoPriceInstance) -> QuboProblem:
    """Expand the profit into ``y^T Q y + 2 d^T y + z``.

    ``W(y) = -delta^2 y^T A y + delta (A a_hat - c_hat A^T 1)^T y + c_hat 1^T A a_hat``;
    symmetrizing ``A`` and folding its diagonal (``y_i^2 = 1``) into the
    constant leaves a zero-diagonal ``Q``.
    """
    A = tp.A()
    delta, c_hat, a_hat = tp.delta, tp.c_hat, tp.a_hat
    Q = -delta ** 2 * 0.5 * (A + A.T)
    z = c_hat * float(A.sum(axis=0) @ a_hat) + float(np.trace(Q))
    np.fill_diagonal(Q, 0.0)
    d = 0.5 * delta * (A @ a_hat - c_hat * A.sum(axis=0))
    return QuboProblem(Q, d, z, tp)


def m_offset(tp: TwoPriceInstance) -> float:
    """Additive offset of the approximation guarantee.

    ``m = delta^2 1^T A 1 + delta 1^T |A a_hat - A^T c_hat 1|
    - c_hat 1^T A a_hat - 2 delta^2 tr(A)``.
    """
    A = tp.A()
    delta, c_hat, a_hat = tp.delta, tp.c_hat, tp.a_hat
    one = np.ones(tp.n)
    return float(delta ** 2 * A.sum()
                 + delta * np.abs(A @ a_hat - c_hat * (A.T @ one)).sum()
                 - c_hat * one @ A @ a_hat
                 - 2.0 * delta ** 2 * np.trace(A))


def qubo_offset(q: QuboProblem) -> float:
    """``sum_ij |Q_hat_ij| - z``: the shift making every objective value nonnegative.

    This is the offset the rounding guarantee is proved with. For a QUBO built
    by :func:`to_qubo` it equals ``m_offset + 2 delta^2 tr(A)``.
    """
    return float(np.abs(q.Q_hat).sum() - q.z)


def _all_assignments(n, start, stop):
    codes = np.arange(start, stop, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(n - 1, -1, -1)) & 1
    return 2.0 * bits - 1.0


def brute_force_qubo(q: QuboProblem, tie_tol: float = TIE_TOL):
    """Exact maximizer by enumeration.

    Assignments are enumerated with agent 0 as the most significant bit and
    ``+1`` encoded as 1, so among ties the lexicographically largest ``y``
    (full price to the earliest agents) wins.
    """
    n = q.n
    if n > MAX_BRUTE_FORCE:
        raise TooLarge(f"brute force limited to n <= {MAX_BRUTE_FORCE}, got {n}")
    chunk = 1 << 14
    best_val, best_y = -np.inf, None
    # descending codes visit lexicographically larger y first
    for hi in range(1 << n, 0, -chunk):
        ys = _all_assignments(n, max(0, hi - chunk), hi)[::-1]
        vals = q.value(ys)
        top = float(vals.max())
        if best_y is None or top > best_val + tie_tol * max(1.0, abs(best_val)):
            k = int(np.argmax(vals >= top - tie_tol * max(1.0, abs(top))))
            best_val, best_y = float(vals[k]), ys[k].copy()
    return best_y, best_val


def brute_force(tp: TwoPriceInstance) -> TwoPriceResult:
    q = to_qubo(tp)
    y, val = brute_force_qubo(q)
    return TwoPriceResult(y, tp.prices(y), val, None, m_offset(tp), None, None, "brute_force")


def _proj_psd(X):
    w, V = np.linalg.eigh(0.5 * (X + X.T))
    w = np.maximum(w, 0.0)
    return (V * w) @ V.T


def _normalize_diag(Z):
    dg = np.sqrt(np.maximum(np.diag(Z), 1e-300))
    Y = Z / np.outer(dg, dg)
    np.fill_diagonal(Y, 1.0)
    return Y


def _dual_bound(C, Y):
    """Upper bound on ``max <C, Y>`` over unit-diagonal PSD ``Y``.

    For any vector ``u``: ``<C, Y> = <C - diag(u), Y> + sum(u)
    <= (n+1) lambda_max(C - diag(u)) + sum(u)`` since ``tr Y = n+1``.
    ``u_i = (C Y)_ii`` is the complementary-slackness estimate.
    """
    u = np.einsum("ij,ji->i", C, Y)
    lmax = float(np.linalg.eigvalsh(C - np.diag(u))[-1])
    return float(u.sum() + C.shape[0] * max(lmax, 0.0))


def solve_sdp(q: QuboProblem, tol: float = SDP_TOL, max_iter: int = SDP_MAX_ITER,
              strict: bool = False) -> SdpSolution:
    """Maximize ``<Q_hat, Y> + z`` over PSD ``Y`` with unit diagonal.

    ADMM on the split ``Y = Z``: the ``Y`` step is a gradient step on the
    linear objective followed by re-imposing the unit diagonal, the ``Z``
    step projects onto the PSD cone by clamping negative eigenvalues. The
    penalty is rebalanced when primal and dual residuals drift apart.
    The returned ``Y`` is the PSD iterate rescaled to unit diagonal, so it is
    exactly feasible and its objective is a valid lower bound on the optimum;
    ``dual_bound`` is a valid upper bound.
    """
    Qh = q.Q_hat
    N = Qh.shape[0]
    scale = float(np.abs(Qh).max())
    if scale == 0.0:
        Y = np.eye(N)
        return SdpSolution(Y, q.z, np.eye(N), q.z, 0, 0.0, 0.0, True, q)
    C = Qh / scale
    Z = np.eye(N)
    U = np.zeros((N, N))
    rho = 1.0
    eye = np.eye(N, dtype=bool)
    rp = rd = np.inf
    it = 0
    for it in range(1, max_iter + 1):
        Y = Z - U + C / rho
        Y[eye] = 1.0
        Z_old = Z
        Z = _proj_psd(Y + U)
        R = Y - Z
        U += R
        rp = float(np.linalg.norm(R)) / N
        rd = rho * float(np.linalg.norm(Z - Z_old)) / N
        if rp < tol and rd < tol:
            break
        if it % 10 == 0:
            if rp > 10.0 * rd:
                rho *= 2.0
                U /= 2.0
            elif rd > 10.0 * rp:
                rho /= 2.0
                U *= 2.0
    converged = rp < tol and rd < tol
    Y = _normalize_diag(Z)
    w, V = np.linalg.eigh(Y)
    F = (V * np.sqrt(np.maximum(w, 0.0))).T
    obj = scale * float(np.sum(C * Y)) + q.z
    bound = scale * _dual_bound(C, Y) + q.z
    sol = SdpSolution(Y, obj, F, max(bound, obj), it, rp, rd, converged, q)
    if strict and not converged:
        raise NoConvergence(f"SDP residuals ({rp:.2e}, {rd:.2e}) after {it} iterations", sol)
    return sol


def _round_chunk(F, rng, k):
    r = rng.standard_normal((k, F.shape[0]))
    r /= np.linalg.norm(r, axis=1, keepdims=True)
    side = np.where(r @ F >= 0.0, 1.0, -1.0)
    # align with the homogenizing variable (last column): y_i = +1 iff same side
    return side[:, :-1] * side[:, -1:]


def round_hyperplane(sol: SdpSolution, trials: int = 1000, seed: int = 0,
                     q: QuboProblem | None = None) -> TwoPriceResult:
    """Random-hyperplane rounding of the SDP factor.

    Trials are drawn in fixed-size chunks; chunk ``j`` uses the generator
    seeded by ``(seed, j)``, so results do not depend on how chunks are
    scheduled. The best trial (lowest index among ties) is returned.
    """
    q = q if q is not None else sol.problem
    if q is None:
        raise ValueError("no QUBO attached to the SDP solution")
    F = sol.factor
    best_val, best_y = -np.inf, None
    mean = m2 = 0.0
    done = 0
    chunk_id = 0
    while done < trials:
        k = min(ROUNDING_CHUNK, trials - done)
        rng = np.random.default_rng([seed, chunk_id])
        ys = _round_chunk(F, rng, k)
        vals = q.value(ys)
        j = int(np.argmax(vals))
        if vals[j] > best_val:
            best_val, best_y = float(vals[j]), ys[j].copy()
        # pairwise merge of chunk moments (Chan et al.)
        cm = float(vals.mean())
        c2 = float(((vals - cm) ** 2).sum())
        tot = done + k
        diff = cm - mean
        mean += diff * k / tot
        m2 += c2 + diff ** 2 * done * k / tot
        done = tot
        chunk_id += 1
    std = float(np.sqrt(m2 / trials))
    stats = RoundingStats(trials, mean, std, best_val)
    tp = q.source
    prices = tp.prices(best_y) if tp is not None else None
    m = m_offset(tp) if tp is not None else None
    ub = sol.dual_bound
    # certificate: dual bound stands in for the unknown optimum, shift by
    # the offset the guarantee is actually proved with
    shift = qubo_offset(q)
    holds = bool(mean + shift > GW_RATIO * (ub + shift))
    return TwoPriceResult(best_y, prices, best_val, ub, m, holds, stats, "sdp")


def approximate(tp: TwoPriceInstance, trials: int = 1000, seed: int = 0,
                force_sdp: bool = False, tol: float = SDP_TOL,
                max_iter: int = SDP_MAX_ITER) -> TwoPriceResult:
    """Best two-price assignment: exact for ``n <= 20`` unless ``force_sdp``."""
    if tp.n <= MAX_BRUTE_FORCE and not force_sdp:
        return brute_force(tp)
    q = to_qubo(tp)
    sol = solve_sdp(q, tol=tol, max_iter=max_iter)
    return round_hyperplane(sol, trials=trials, seed=seed, q=q)
