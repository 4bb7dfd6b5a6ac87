"""Two-sided estimate of 1/H_J(A;C) for Euclidean norms.

With l2 on R^n and R^{m+p}, 1/H_J(A;C) is the distance from the origin to the
relative boundary of

    D = {(Ax, C_J x + s) : s >= 0, ||x||_2 <= 1}.

The barrier f(x, s) = -log(1 - ||x||^2) - sum log s_j, minimized over the
fiber of (0, 0), induces a self-concordant barrier for D whose Dikin ellipsoid
at the origin is {M^{1/2} d : ||d|| <= 1}. The ellipsoid sits inside D and its
(4p + 9)-fold dilation contains the relevant part of D, which brackets the
boundary distance.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    as_matrix,
    colspace_basis,
    nullspace_basis,
    psd_sqrt,
    smallest_positive_singular_value,
)
from .simplex import LPProblem, LPStatus, solve_lp

NEWTON_TOL = 1e-10
NEWTON_MAX_ITER = 200
INTERIOR_TOL = 1e-9


class NotInRelativeInterior(ValueError):
    """(0, 0) is not in the relative interior of D: J is not relatively surjective."""


class NewtonConvergenceError(RuntimeError):
    pass


@dataclass
class BarrierCenter:
    x_bar: np.ndarray
    s_bar: np.ndarray
    hess_x: np.ndarray
    hess_s: np.ndarray
    iterations: int

    def hessian_inverse(self) -> np.ndarray:
        """Inverse of blockdiag(hess_x, diag(hess_s)) in closed form."""
        x = self.x_bar
        n, k = x.size, self.s_bar.size
        r2 = float(x @ x)
        a = 2.0 / (1.0 - r2)
        b = 4.0 / (1.0 - r2) ** 2
        # Sherman-Morrison on a I + b x x^T
        Hx_inv = (np.eye(n) - (b / (a + b * r2)) * np.outer(x, x)) / a
        out = np.zeros((n + k, n + k))
        out[:n, :n] = Hx_inv
        out[n:, n:] = np.diag(self.s_bar ** 2)
        return out


@dataclass
class DikinBounds:
    sigma: float
    lower: float
    upper: float
    p: int
    M: np.ndarray

    @property
    def factor(self) -> int:
        return 4 * self.p + 9

    def to_dict(self) -> dict:
        return {"sigma": self.sigma, "lower": self.lower, "upper": self.upper, "factor": self.factor}


def _inputs(A, C):
    if A is None or np.asarray(A).size == 0:
        C = as_matrix(C)
        A = np.zeros((0, C.shape[1]))
    if C is None or np.asarray(C).size == 0:
        A = as_matrix(A)
        C = np.zeros((0, A.shape[1]))
    A, C = as_matrix(A), as_matrix(C)
    if A.shape[1] != C.shape[1]:
        raise ValueError(f"A has {A.shape[1]} columns but C has {C.shape[1]}")
    return A, C


def _interior_start(B: np.ndarray) -> np.ndarray:
    """Some w with B w > 0 and ||w|| = 1/2, from max{tau : B w >= tau, |w| <= 1, tau <= 1}."""
    k, r = B.shape
    # variables (w, tau, slack): B w - tau - slack = 0, slack >= 0
    c = np.concatenate([np.zeros(r), [-1.0], np.zeros(k)])
    A_eq = np.hstack([B, -np.ones((k, 1)), -np.eye(k)])
    lb = np.concatenate([-np.ones(r), [-np.inf], np.zeros(k)])
    ub = np.concatenate([np.ones(r), [1.0], np.full(k, np.inf)])
    out = solve_lp(LPProblem(c, A_eq, np.zeros(k), lb, ub))
    if out.status is not LPStatus.OPTIMAL or -out.value <= INTERIOR_TOL:
        raise NotInRelativeInterior("no x with Ax = 0 and C_J x < 0: (0, 0) is on the relative boundary of D")
    w = out.primal[:r]
    return 0.5 * w / np.linalg.norm(w)


def barrier_center(A, C, J) -> BarrierCenter:
    """Minimize f(x, s) subject to Ax = 0, C_J x + s = 0 by damped Newton.

    The constraints are eliminated: x = N w with N an orthonormal basis of
    ker(A), and s = -C_J N w.
    """
    A, C = _inputs(A, C)
    J = sorted(J)
    n = A.shape[1]
    N = nullspace_basis(A).Q
    B = -C[J] @ N if J else np.zeros((0, N.shape[1]))
    k, r = B.shape
    if k == 0 or r == 0:
        if k:
            raise NotInRelativeInterior("ker(A) = {0} leaves no room for s > 0")
        x = np.zeros(n)
        return BarrierCenter(x, np.zeros(0), 2.0 * np.eye(n), np.zeros(0), 0)
    w = _interior_start(B)

    def value(w):
        s = B @ w
        r2 = w @ w
        if r2 >= 1.0 or np.any(s <= 0):
            return np.inf
        return -np.log1p(-r2) - np.log(s).sum()

    it = 0
    while True:
        s = B @ w
        r2 = w @ w
        g = 2.0 * w / (1.0 - r2) - B.T @ (1.0 / s)
        H = (2.0 / (1.0 - r2)) * np.eye(r) + (4.0 / (1.0 - r2) ** 2) * np.outer(w, w) + (B.T / s ** 2) @ B
        step = -np.linalg.solve(H, g)
        lam = float(np.sqrt(max(-(g @ step), 0.0)))
        if lam <= NEWTON_TOL or np.linalg.norm(g) <= NEWTON_TOL:
            # one last full step is free inside the quadratic region
            if np.isfinite(value(w + step)):
                w = w + step
            break
        if it >= NEWTON_MAX_ITER:
            raise NewtonConvergenceError(f"Newton decrement {lam:.3e} after {it} iterations")
        # damped step 1/(1+lam) stays in the domain of a self-concordant
        # function; inside lam < 1/4 the full step converges quadratically
        t = 1.0 if lam < 0.25 else 1.0 / (1.0 + lam)
        while not np.isfinite(value(w + t * step)):
            t *= 0.5
        w = w + t * step
        it += 1
    x = N @ w
    s = B @ w
    r2 = float(x @ x)
    hess_x = (2.0 / (1.0 - r2)) * np.eye(n) + (4.0 / (1.0 - r2) ** 2) * np.outer(x, x)
    return BarrierCenter(x, s, hess_x, 1.0 / s ** 2, it)


def dikin_bounds(A, C, J, center: BarrierCenter | None = None) -> DikinBounds:
    """sigma_min(M^{1/2}) <= 1/H_J(A;C) <= (4p + 9) sigma_min(M^{1/2}).

    M = K (grad^2 f)^{-1} K^T with K = [[A, 0], [C_J, I]], taken on the
    subspace (A R^n) x R^J; p is the number of rows of C.
    """
    A, C = _inputs(A, C)
    J = sorted(J)
    center = center or barrier_center(A, C, J)
    m, n = A.shape
    k = len(J)
    K = np.block([[A, np.zeros((m, k))], [C[J] if J else np.zeros((0, n)), np.eye(k)]])
    M = K @ center.hessian_inverse() @ K.T
    QA = colspace_basis(A).Q
    Q = np.zeros((m + k, QA.shape[1] + k))
    Q[:m, :QA.shape[1]] = QA
    Q[m:, QA.shape[1]:] = np.eye(k)
    MQ = Q.T @ M @ Q
    sigma = smallest_positive_singular_value(psd_sqrt(MQ))
    p = C.shape[0]
    sigma = _ratio_exact(sigma, 4 * p + 9)
    return DikinBounds(sigma, sigma, (4 * p + 9) * sigma, p, M)


def _ratio_exact(sigma: float, k: int, max_ulps: int = 64) -> float:
    """Nearest float to sigma (within a few ulps) for which (k * s) / s == k in floating point."""
    if sigma == 0.0 or not np.isfinite(sigma):
        return sigma
    lo = hi = sigma
    for _ in range(max_ulps + 1):
        for s in (lo, hi):
            if (k * s) / s == k:
                return float(s)
        lo, hi = np.nextafter(lo, 0.0), np.nextafter(hi, np.inf)
    return sigma
