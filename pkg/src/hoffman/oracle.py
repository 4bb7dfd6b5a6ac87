"""Brute-force references used by the test suite.

Nothing in the public API imports this module. Every routine here is
exponential in the instance size and guarded accordingly. Where a routine
needs its own linear programs it solves them with SciPy's HiGHS, so that the
reference does not share a solver with the code under test.
"""
from __future__ import annotations

import itertools

import numpy as np
from scipy.optimize import linprog, minimize, nnls

from .linalg import NormTag, as_matrix, nullspace_basis
from .polylp import (
    NormConfig,
    min_conic_image_norm,
    min_relsurj_detect,
    mixed_block_value,
)

ENUM_MAX_M = 14
BILEVEL_MAX_J = 16
MIXED_MAX_P = 12
FACES_MAX_N = 8


class OracleSizeError(ValueError):
    pass


def _subsets(m: int):
    for r in range(m + 1):
        for J in itertools.combinations(range(m), r):
            yield frozenset(J)


def _highs(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, bounds=None):
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds, method="highs")
    return res


def _norm_lp(n: int, tag: NormTag):
    """Epigraph pieces for min ||x||_tag with x in R^n: returns (c, A_ub, bounds) in (x, aux)."""
    if tag is NormTag.LINF:
        # x_i - t <= 0, -x_i - t <= 0
        c = np.concatenate([np.zeros(n), [1.0]])
        A = np.block([[np.eye(n), -np.ones((n, 1))], [-np.eye(n), -np.ones((n, 1))]])
        bounds = [(None, None)] * n + [(0, None)]
        return c, A, bounds
    if tag is NormTag.L1:
        # x_i - w_i <= 0, -x_i - w_i <= 0
        c = np.concatenate([np.zeros(n), np.ones(n)])
        A = np.block([[np.eye(n), -np.eye(n)], [-np.eye(n), -np.eye(n)]])
        bounds = [(None, None)] * n + [(0, None)] * n
        return c, A, bounds
    raise ValueError(f"oracle LPs need l1 or linf, got {tag.value}")


def oracle_hoffman_enumerate(A, cfg: NormConfig = NormConfig()) -> float:
    """max over every A-surjective J of 1 / min{||A_J^T v||^* : v >= 0, ||v||^* = 1}."""
    A = as_matrix(A)
    m = A.shape[0]
    if m > ENUM_MAX_M:
        raise OracleSizeError(f"m = {m} exceeds {ENUM_MAX_M}")
    best = 0.0
    for J in _subsets(m):
        if not J:
            continue
        out = min_conic_image_norm(A, J, cfg)
        if out.surjective:
            best = max(best, 1.0 / out.value)
    return best


def oracle_gordan_surjective(A, J) -> bool:
    """J is A-surjective iff A_J x < 0 has a solution, i.e. A_J x <= -1 is feasible."""
    A = as_matrix(A)
    J = sorted(J)
    if not J:
        return True
    n = A.shape[1]
    res = _highs(np.zeros(n), A_ub=A[J], b_ub=-np.ones(len(J)), bounds=[(None, None)] * n)
    return res.status == 0


def inner_min_norm(A, J, y, domain: NormTag) -> float:
    """min{||x|| : A_J x <= y_J} by HiGHS (inf when infeasible)."""
    A = as_matrix(A)
    J = sorted(J)
    n = A.shape[1]
    c, N, bounds = _norm_lp(n, domain)
    extra = N.shape[1] - n
    rows = np.hstack([A[J], np.zeros((len(J), extra))])
    A_ub = np.vstack([N, rows])
    b_ub = np.concatenate([np.zeros(N.shape[0]), np.asarray(y, float)[J]])
    res = _highs(c, A_ub=A_ub, b_ub=b_ub, bounds=bounds)
    if res.status == 2:
        return np.inf
    if res.status != 0:
        raise RuntimeError(f"HiGHS failed: {res.message}")
    return float(res.fun)


def oracle_bilevel_maxmin(A, J, cfg: NormConfig = NormConfig()) -> float:
    """max over ||y||_inf <= 1 of min{||x|| : A_J x <= y_J}, by scanning sign vertices."""
    A = as_matrix(A)
    J = sorted(J)
    if cfg.codomain is not NormTag.LINF:
        raise ValueError("vertex enumeration needs the l-infinity codomain")
    if len(J) > BILEVEL_MAX_J:
        raise OracleSizeError(f"|J| = {len(J)} exceeds {BILEVEL_MAX_J}")
    if not J:
        return 0.0
    m = A.shape[0]
    best = 0.0
    for signs in itertools.product((-1.0, 1.0), repeat=len(J)):
        y = np.zeros(m)
        y[J] = signs
        best = max(best, inner_min_norm(A, J, y, cfg.domain))
    return best


def oracle_mixed_enumerate(A, C, cfg: NormConfig = NormConfig(NormTag.LINF, NormTag.L1), normalize: str = "vz") -> float:
    """max over every relatively surjective J of the per-set mixed constant."""
    A = as_matrix(A)
    C = as_matrix(C, cols=A.shape[1])
    if A.shape[0] == 0:
        A = np.zeros((0, C.shape[1]))
    p = C.shape[0]
    if p > MIXED_MAX_P:
        raise OracleSizeError(f"p = {p} exceeds {MIXED_MAX_P}")
    best = 0.0
    for J in _subsets(p):
        if not min_relsurj_detect(A, C, J).surjective:
            continue
        val, _ = mixed_block_value(A, C, J, cfg, normalize)
        if np.isfinite(val) and val > 0:
            best = max(best, 1.0 / val)
    return best


def _is_face(A: np.ndarray, S: frozenset) -> bool:
    """Columns S of A are exactly the points on some face of conv(A)."""
    m, n = A.shape
    S_l = sorted(S)
    T = [j for j in range(n) if j not in S]
    # variables (c, delta): c^T a_j - delta = 0 on S, <= -1 off S
    A_eq = np.hstack([A[:, S_l].T, -np.ones((len(S_l), 1))])
    A_ub = np.hstack([A[:, T].T, -np.ones((len(T), 1))])
    res = _highs(np.zeros(m + 1), A_ub=A_ub, b_ub=-np.ones(len(T)), A_eq=A_eq,
                 b_eq=np.zeros(len(S_l)), bounds=[(None, None)] * (m + 1))
    return res.status == 0


def _set_distance(P: np.ndarray, Q: np.ndarray, tag: NormTag, affine_P: bool) -> float:
    """min ||P lam - Q mu|| with mu in the simplex and lam in the simplex (or its affine hull)."""
    m, kp = P.shape
    kq = Q.shape[1]
    if tag is NormTag.L2:
        def f(w):
            d = P @ w[:kp] - Q @ w[kp:]
            return float(d @ d)
        cons = [{"type": "eq", "fun": lambda w: w[:kp].sum() - 1.0},
                {"type": "eq", "fun": lambda w: w[kp:].sum() - 1.0}]
        bnds = [(None, None) if affine_P else (0, None)] * kp + [(0, None)] * kq
        w0 = np.concatenate([np.full(kp, 1.0 / kp), np.full(kq, 1.0 / kq)])
        res = minimize(f, w0, method="SLSQP", bounds=bnds, constraints=cons, options={"ftol": 1e-14, "maxiter": 500})
        return float(np.sqrt(max(res.fun, 0.0)))
    c_n, N, nb = _norm_lp(m, tag)
    extra = N.shape[1] - m
    # variables (d, aux, lam, mu) with d = P lam - Q mu
    nv = m + extra + kp + kq
    c = np.concatenate([c_n, np.zeros(kp + kq)])
    A_ub = np.hstack([N, np.zeros((N.shape[0], kp + kq))])
    A_eq = np.vstack([
        np.hstack([np.eye(m), np.zeros((m, extra)), -P, Q]),
        np.concatenate([np.zeros(m + extra), np.ones(kp), np.zeros(kq)]),
        np.concatenate([np.zeros(m + extra + kp), np.ones(kq)]),
    ])
    b_eq = np.concatenate([np.zeros(m), [1.0, 1.0]])
    bounds = nb + [(None, None) if affine_P else (0, None)] * kp + [(0, None)] * kq
    res = _highs(c, A_ub=A_ub, b_ub=np.zeros(N.shape[0]), A_eq=A_eq, b_eq=b_eq, bounds=bounds)
    assert len(bounds) == nv
    if res.status != 0:
        raise RuntimeError(f"HiGHS failed: {res.message}")
    return float(res.fun)


def oracle_facial_faces(A, cfg: NormConfig = NormConfig(NormTag.L1, NormTag.L1), affine: bool = False) -> float:
    """min over proper faces F of conv(A) of dist(F, conv(columns off F)).

    ``affine=True`` measures from the affine hull of the face instead. Columns
    of A are the points; distances use the codomain norm on R^m. Returns
    ``inf`` when conv(A) has no proper face (a single point).
    """
    A = as_matrix(A)
    m, n = A.shape
    if n > FACES_MAX_N:
        raise OracleSizeError(f"n = {n} exceeds {FACES_MAX_N}")
    best = np.inf
    for S in _subsets(n):
        if not S or len(S) == n or not _is_face(A, S):
            continue
        S_l = sorted(S)
        T = [j for j in range(n) if j not in S]
        best = min(best, _set_distance(A[:, S_l], A[:, T], cfg.codomain, affine))
    return best


def _least_distance(G: np.ndarray, h: np.ndarray) -> np.ndarray | None:
    """Minimum-norm x with G x >= h (Lawson-Hanson least-distance programming via NNLS)."""
    n = G.shape[1]
    if G.shape[0] == 0 or np.all(h <= 0):
        return np.zeros(n)
    E = np.vstack([G.T, h[None, :]])
    f = np.zeros(n + 1)
    f[n] = 1.0
    u, _ = nnls(E, f, maxiter=50 * E.shape[1])
    r = E @ u - f
    if abs(r[n]) < 1e-14:
        return None
    return -r[:n] / r[n]


def ray_boundary_distance(A, C, J, direction) -> float:
    """Largest r with r * direction in D = {(Ax, C_J x + s) : s >= 0, ||x||_2 <= 1}.

    With x = r xi the condition reads A xi = d_y, C_J xi <= d_w, ||xi||_2 <= 1/r,
    so r = 1 / min{||xi||_2 : A xi = d_y, C_J xi <= d_w}, a least-distance
    problem. Returns 0 when the direction leaves the affine hull of D.
    """
    A = np.asarray(A, float)
    C = np.asarray(C, float)
    J = sorted(J)
    n = A.shape[1] if A.ndim == 2 and A.shape[1] else C.shape[1]
    A = A.reshape(-1, n)
    m = A.shape[0]
    d = np.asarray(direction, float)
    dy, dw = d[:m], d[m:]
    CJ = C.reshape(-1, n)[J] if J else np.zeros((0, n))
    # xi = xi0 + N w with xi0 in row(A) and N spanning ker(A); ||xi||^2 = ||xi0||^2 + ||w||^2
    xi0 = np.linalg.lstsq(A, dy, rcond=None)[0] if m else np.zeros(n)
    if np.linalg.norm(A @ xi0 - dy) > 1e-9 * (1 + np.linalg.norm(dy)):
        return 0.0
    N = nullspace_basis(A).Q
    w = _least_distance(-CJ @ N, CJ @ xi0 - dw)
    if w is None:
        return 0.0
    val = float(np.sqrt(xi0 @ xi0 + w @ w))
    return np.inf if val == 0 else 1.0 / val
