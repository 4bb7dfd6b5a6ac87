"""Bounded-variable two-phase primal simplex with Bland's rule.

Solves

    min c @ w   s.t.  A_eq @ w = b_eq,  lb <= w <= ub

where bounds may be infinite. The tableau is dense; the intended instances
have at most a few dozen rows and columns.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

PIVOT_TOL = 1e-9
FEAS_TOL = 1e-9
COST_TOL = 1e-10
MAX_ITER = 50_000


class LPStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class LPNumericalError(RuntimeError):
    """Raised when the simplex loses feasibility or exceeds its pivot budget."""


@dataclass
class LPProblem:
    c: np.ndarray
    A_eq: np.ndarray
    b_eq: np.ndarray
    lb: np.ndarray = None
    ub: np.ndarray = None

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float).ravel()
        n = self.c.size
        self.A_eq = np.asarray(self.A_eq, dtype=float).reshape(-1, n)
        self.b_eq = np.asarray(self.b_eq, dtype=float).ravel()
        self.lb = np.full(n, -np.inf) if self.lb is None else np.asarray(self.lb, dtype=float).ravel().copy()
        self.ub = np.full(n, np.inf) if self.ub is None else np.asarray(self.ub, dtype=float).ravel().copy()
        if self.A_eq.shape[0] != self.b_eq.size:
            raise ValueError(f"A_eq has {self.A_eq.shape[0]} rows but b_eq has {self.b_eq.size} entries")
        if self.lb.size != n or self.ub.size != n:
            raise ValueError("bound vectors must match the number of variables")
        if np.any(self.lb > self.ub):
            raise ValueError("lower bound exceeds upper bound")
        for arr in (self.c, self.A_eq, self.b_eq):
            if not np.all(np.isfinite(arr)):
                raise ValueError("LP data must be finite")


@dataclass
class LPOutcome:
    status: LPStatus
    value: float
    primal: np.ndarray
    dual: np.ndarray
    iterations: int = 0
    reduced_costs: np.ndarray = field(default=None, repr=False)

    @property
    def optimal(self) -> bool:
        return self.status is LPStatus.OPTIMAL


class _Tableau:
    """B^{-1} [A | I_art] with explicit variable values (bounded simplex state)."""

    def __init__(self, A, b, lb, ub):
        m, n = A.shape
        self.m, self.n = m, n
        x = np.where(np.isfinite(lb), lb, np.where(np.isfinite(ub), ub, 0.0))
        r = b - A @ x
        sign = np.where(r >= 0, 1.0, -1.0)
        # artificial columns are sign_i * e_i, so B = diag(sign) = B^{-1}
        self.T = np.hstack([sign[:, None] * A, np.eye(m)])
        self.sign = sign
        self.x = np.concatenate([x, np.abs(r)])
        self.lb = np.concatenate([lb, np.zeros(m)])
        self.ub = np.concatenate([ub, np.full(m, np.inf)])
        self.basis = list(range(n, n + m))
        self.iterations = 0

    def pivot(self, row: int, col: int) -> None:
        T = self.T
        T[row] /= T[row, col]
        colv = T[:, col].copy()
        colv[row] = 0.0
        T -= np.outer(colv, T[row])
        self.basis[row] = col

    def run(self, cost: np.ndarray) -> LPStatus:
        """Primal simplex from the current basic feasible state."""
        T, x, lb, ub = self.T, self.x, self.lb, self.ub
        N = T.shape[1]
        movable = ub > lb
        while True:
            if self.iterations > MAX_ITER:
                raise LPNumericalError("simplex pivot budget exhausted")
            cb = cost[self.basis]
            d = cost - cb @ T
            d[self.basis] = 0.0
            can_up = movable & (x < ub - FEAS_TOL) & (d < -COST_TOL)
            can_down = movable & (x > lb + FEAS_TOL) & (d > COST_TOL)
            candidates = np.flatnonzero(can_up | can_down)
            if candidates.size == 0:
                self.reduced = d
                return LPStatus.OPTIMAL
            j = int(candidates[0])  # Bland: smallest eligible index
            direction = 1.0 if can_up[j] else -1.0
            alpha = direction * T[:, j]
            theta = ub[j] - lb[j]
            leave = -1
            leave_var = N
            for i in range(self.m):
                a = alpha[i]
                bi = self.basis[i]
                if a > PIVOT_TOL:
                    lim = (x[bi] - lb[bi]) / a
                elif a < -PIVOT_TOL:
                    lim = (ub[bi] - x[bi]) / -a
                else:
                    continue
                lim = max(lim, 0.0)
                if lim < theta - 1e-12 or (leave >= 0 and abs(lim - theta) <= 1e-12 and bi < leave_var):
                    theta, leave, leave_var = lim, i, bi
            if not np.isfinite(theta):
                self.unbounded_dir = j
                return LPStatus.UNBOUNDED
            x[j] += direction * theta
            basic = np.asarray(self.basis)
            x[basic] -= theta * alpha
            if leave >= 0:
                bi = self.basis[leave]
                x[bi] = lb[bi] if alpha[leave] > 0 else ub[bi]
                self.pivot(leave, j)
            self.iterations += 1


def solve_lp(p: LPProblem) -> LPOutcome:
    """Solve ``p`` to optimality, or report infeasibility/unboundedness.

    The pivot sequence is a deterministic function of the input data.
    """
    A, b, c = p.A_eq, p.b_eq, p.c
    m, n = A.shape
    if m == 0:
        return _solve_box(p)
    tab = _Tableau(A, b, p.lb, p.ub)
    phase1 = np.concatenate([np.zeros(n), np.ones(m)])
    tab.run(phase1)
    infeas = float(tab.x[n:].sum())
    scale = 1.0 + float(np.abs(b).max(initial=0.0))
    if infeas > FEAS_TOL * scale:
        return LPOutcome(LPStatus.INFEASIBLE, np.nan, np.full(n, np.nan), np.full(m, np.nan), tab.iterations)
    # artificials are pinned at zero for phase 2
    tab.ub[n:] = 0.0
    tab.x[n:] = 0.0
    phase2 = np.concatenate([c, np.zeros(m)])
    status = tab.run(phase2)
    if status is LPStatus.UNBOUNDED:
        return LPOutcome(LPStatus.UNBOUNDED, -np.inf, tab.x[:n].copy(), np.full(m, np.nan), tab.iterations)
    x = _polish(tab, A, b)
    # B^{-1} sits in the artificial block: T[:, n+i] = B^{-1} sign_i e_i
    Binv = tab.T[:, n:] * tab.sign[None, :]
    y = phase2[tab.basis] @ Binv
    resid = np.abs(A @ x - b).max(initial=0.0)
    if resid > 1e-7 * scale:
        raise LPNumericalError(f"primal residual {resid:.3e} after phase 2")
    return LPOutcome(LPStatus.OPTIMAL, float(c @ x), x, y, tab.iterations, tab.reduced[:n].copy())


def _polish(tab: _Tableau, A: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Recompute basic values from the original data to shed pivot drift."""
    n = tab.n
    x = tab.x[:n].copy()
    basic = [j for j in tab.basis if j < n]
    if not basic:
        return np.clip(x, tab.lb[:n], tab.ub[:n])
    nonbasic = np.ones(n, dtype=bool)
    nonbasic[basic] = False
    rhs = b - A[:, nonbasic] @ x[nonbasic]
    sol, *_ = np.linalg.lstsq(A[:, basic], rhs, rcond=None)
    x[basic] = sol
    return np.clip(x, tab.lb[:n], tab.ub[:n])


def _solve_box(p: LPProblem) -> LPOutcome:
    """No equality rows: each variable sits at its cheaper bound."""
    c, lb, ub = p.c, p.lb, p.ub
    x = np.where(np.isfinite(lb), lb, np.where(np.isfinite(ub), ub, 0.0))
    x = np.where(c > 0, lb, np.where(c < 0, ub, x))
    if not np.all(np.isfinite(x)):
        return LPOutcome(LPStatus.UNBOUNDED, -np.inf, x, np.zeros(0))
    return LPOutcome(LPStatus.OPTIMAL, float(c @ x), x, np.zeros(0), 0, c.copy())
