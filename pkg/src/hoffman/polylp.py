"""Surjectivity tests, Hoffman-value subproblems and polyhedral distances.

Every problem here is a norm minimization over a polyhedron, reduced to a
linear program for the LP-representable norms (l1 and l-infinity). The
reduction is done once, in :func:`min_residual_norm`; the public functions
only assemble its data.

Index sets are 0-based ``frozenset`` objects throughout the package.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .linalg import (
    NormTag,
    colspace_basis,
    orthogonal_complement,
    row_norms,
)
from .simplex import LPProblem, LPStatus, solve_lp

LP_NORMS = (NormTag.L1, NormTag.LINF)
SURJ_RTOL = 1e-9
SUPPORT_TOL = 1e-10


class UnsupportedNormError(ValueError):
    """The requested norm pair has no exact LP path (use the l2 estimator)."""


class InfeasibleSystemError(ValueError):
    """The constraint system handed to a distance/min-norm routine is empty."""


@dataclass(frozen=True)
class NormConfig:
    """Norms on the domain R^n and on the codomain (R^m, or R^{m+p})."""

    domain: NormTag = NormTag.LINF
    codomain: NormTag = NormTag.LINF

    @classmethod
    def of(cls, domain, codomain) -> "NormConfig":
        return cls(NormTag.parse(domain), NormTag.parse(codomain))

    @property
    def exact(self) -> bool:
        return self.domain in LP_NORMS and self.codomain in LP_NORMS

    def to_dict(self) -> dict:
        return {"domain": self.domain.value, "codomain": self.codomain.value}


@dataclass
class SurjectivityOutcome:
    value: float
    witness_v: np.ndarray
    support: frozenset
    surjective: bool


def surj_threshold(M: np.ndarray, domain: NormTag = NormTag.LINF) -> float:
    """Values at or below this are treated as zero for the rows of ``M``."""
    largest = float(row_norms(M, domain.dual).max(initial=0.0))
    return SURJ_RTOL * max(1.0, largest)


def _require_lp_norm(tag: NormTag, what: str) -> None:
    if tag not in LP_NORMS:
        raise UnsupportedNormError(f"{what} norm {tag.value} has no LP formulation; use the l2 estimator")


def min_residual_norm(R, r0, q: NormTag, E=None, e=None, lb=None, ub=None):
    """Minimize ``||R y - r0||_q`` over ``E y = e, lb <= y <= ub``.

    Returns ``(value, y)``; ``value`` is ``inf`` and ``y`` is ``None`` when the
    constraints are infeasible.
    """
    R = np.asarray(R, dtype=float)
    nres, k = R.shape
    r0 = np.zeros(nres) if r0 is None else np.asarray(r0, dtype=float)
    E = np.zeros((0, k)) if E is None else np.asarray(E, dtype=float).reshape(-1, k)
    e = np.zeros(0) if e is None else np.asarray(e, dtype=float).ravel()
    lb = np.full(k, -np.inf) if lb is None else np.asarray(lb, dtype=float)
    ub = np.full(k, np.inf) if ub is None else np.asarray(ub, dtype=float)
    nE = E.shape[0]
    if q is NormTag.L1:
        # R y - p + n = r0, minimize sum(p + n)
        I = np.eye(nres)
        A_eq = np.block([[E, np.zeros((nE, 2 * nres))], [R, -I, I]])
        b_eq = np.concatenate([e, r0])
        c = np.concatenate([np.zeros(k), np.ones(2 * nres)])
        lo = np.concatenate([lb, np.zeros(2 * nres)])
        hi = np.concatenate([ub, np.full(2 * nres, np.inf)])
    elif q is NormTag.LINF:
        # R y - t + s1 = r0,  R y + t - s2 = r0, minimize t
        I = np.eye(nres)
        one = np.ones((nres, 1))
        Z = np.zeros((nres, nres))
        A_eq = np.block([
            [E, np.zeros((nE, 1 + 2 * nres))],
            [R, -one, I, Z],
            [R, one, Z, -I],
        ])
        b_eq = np.concatenate([e, r0, r0])
        c = np.concatenate([np.zeros(k), [1.0], np.zeros(2 * nres)])
        lo = np.concatenate([lb, np.zeros(1 + 2 * nres)])
        hi = np.concatenate([ub, np.full(1 + 2 * nres, np.inf)])
    else:
        raise UnsupportedNormError(f"residual norm {q.value} is not LP-representable")
    out = solve_lp(LPProblem(c, A_eq, b_eq, lo, hi))
    if out.status is LPStatus.INFEASIBLE:
        return np.inf, None
    if out.status is LPStatus.UNBOUNDED:
        raise RuntimeError("norm minimization reported unbounded")
    return max(out.value, 0.0), out.primal[:k]


def _normalized_min(R, q, G, g_lb, g_ub, signs, E=None, e=None, lb=None, ub=None):
    """min ||R y||_q subject to the base constraints and ||G y||_inf = 1.

    ``g_lb``/``g_ub`` bound ``G y`` and ``signs[k]`` lists the values the k-th
    coordinate of ``G y`` is pinned to; the minimum runs over every pin. This
    is the coordinate-fixing decomposition of an l-infinity unit sphere.
    """
    R = np.asarray(R, dtype=float)
    G = np.asarray(G, dtype=float)
    nres, k = R.shape
    ng = G.shape[0]
    E = np.zeros((0, k)) if E is None else np.asarray(E, dtype=float).reshape(-1, k)
    e = np.zeros(0) if e is None else np.asarray(e, dtype=float)
    lb = np.full(k, -np.inf) if lb is None else np.asarray(lb, dtype=float)
    ub = np.full(k, np.inf) if ub is None else np.asarray(ub, dtype=float)
    # auxiliary u = G y carries the sphere pin as a fixed bound
    R2 = np.hstack([R, np.zeros((nres, ng))])
    E2 = np.block([[E, np.zeros((E.shape[0], ng))], [G, -np.eye(ng)]])
    e2 = np.concatenate([e, np.zeros(ng)])
    best, best_y = np.inf, None
    for row in range(ng):
        for s in signs[row]:
            lo = np.concatenate([lb, g_lb])
            hi = np.concatenate([ub, g_ub])
            lo[k + row] = hi[k + row] = s
            val, y = min_residual_norm(R2, None, q, E2, e2, lo, hi)
            if val < best:
                best, best_y = val, y[:k]
    return best, best_y


def _support(values: np.ndarray, J: Sequence[int]) -> frozenset:
    if values.size == 0:
        return frozenset()
    cut = SUPPORT_TOL * max(1.0, float(values.max()))
    return frozenset(J[i] for i in np.flatnonzero(values > cut))


def _zero_row(M: np.ndarray, J: Sequence[int], eps: float, tag: NormTag):
    """First index in J whose row of M is (numerically) zero, else None."""
    if not J:
        return None
    norms = row_norms(M[list(J)], tag)
    hits = np.flatnonzero(norms <= eps)
    return J[int(hits[0])] if hits.size else None


def min_conic_image_norm(A, J: Iterable[int], cfg: NormConfig) -> SurjectivityOutcome:
    """Solve min{ ||A_J^T v||^* : v >= 0, ||v||^* = 1 }.

    A positive optimum certifies that J is A-surjective and equals 1/H_J(A);
    a zero optimum yields v with A_J^T v = 0 whose support is a certificate
    of non-surjectivity.
    """
    A = np.asarray(A, dtype=float)
    J = sorted(J)
    if not J:
        raise ValueError("min_conic_image_norm needs a nonempty index set")
    _require_lp_norm(cfg.domain, "domain")
    _require_lp_norm(cfg.codomain, "codomain")
    eps = surj_threshold(A, cfg.domain)
    q = cfg.domain.dual
    zi = _zero_row(A, J, eps, q)
    if zi is not None:
        w = np.zeros(len(J))
        w[J.index(zi)] = 1.0
        return SurjectivityOutcome(0.0, w, frozenset([zi]), False)
    AJt = A[J].T
    k = len(J)
    if cfg.codomain is NormTag.LINF:
        # dual is l1: on v >= 0 the sphere is the simplex 1^T v = 1
        value, v = min_residual_norm(AJt, None, q, np.ones((1, k)), [1.0], np.zeros(k), None)
    else:
        # dual is l-inf: pin one coordinate at 1, the rest in [0, 1]
        value, v = _normalized_min(
            AJt, q, np.eye(k), np.zeros(k), np.ones(k), [(1.0,)] * k,
            lb=np.zeros(k), ub=None,
        )
    if value > eps:
        return SurjectivityOutcome(value, v, frozenset(J), True)
    return SurjectivityOutcome(value, v, _support(v, J), False)


def restricted_value(A, J: Iterable[int], L: Iterable[int], cfg: NormConfig) -> float:
    """min{ ||A_J^T v||^* : v >= 0, ||v_{J cap L}||^* = 1 } (inf when J cap L is empty)."""
    A = np.asarray(A, dtype=float)
    J = sorted(J)
    Lset = set(L)
    JL = [i for i, j in enumerate(J) if j in Lset]
    if not JL:
        return np.inf
    _require_lp_norm(cfg.domain, "domain")
    _require_lp_norm(cfg.codomain, "codomain")
    q = cfg.domain.dual
    AJt = A[J].T
    k = len(J)
    if cfg.codomain is NormTag.LINF:
        E = np.zeros((1, k))
        E[0, JL] = 1.0
        value, _ = min_residual_norm(AJt, None, q, E, [1.0], np.zeros(k), None)
    else:
        G = np.eye(k)[JL]
        value, _ = _normalized_min(
            AJt, q, G, np.zeros(len(JL)), np.ones(len(JL)), [(1.0,)] * len(JL),
            lb=np.zeros(k),
        )
    return value


def min_relsurj_detect(A, C, J: Iterable[int]) -> SurjectivityOutcome:
    """Decide whether [A, C, J] is relatively surjective.

    Solves min{ ||A^T v + C_J^T z||_1 : z >= 0, 1^T z = 1 }. Restricting v to
    the range of A does not change A^T v, so v is left free here.
    """
    A = np.asarray(A, dtype=float)
    C = np.asarray(C, dtype=float)
    J = sorted(J)
    if not J:
        return SurjectivityOutcome(np.inf, np.zeros(0), frozenset(), True)
    m = A.shape[0]
    eps = surj_threshold(np.vstack([A, C]))
    zj = _zero_row(C, J, eps, NormTag.L1)
    if zj is not None:
        w = np.zeros(len(J))
        w[J.index(zj)] = 1.0
        return SurjectivityOutcome(0.0, w, frozenset([zj]), False)
    k = len(J)
    R = np.hstack([A.T, C[J].T])
    E = np.concatenate([np.zeros(m), np.ones(k)])[None, :]
    lb = np.concatenate([np.full(m, -np.inf), np.zeros(k)])
    value, y = min_residual_norm(R, None, NormTag.L1, E, [1.0], lb, None)
    z = y[m:]
    if value > eps:
        return SurjectivityOutcome(value, z, frozenset(J), True)
    return SurjectivityOutcome(value, z, _support(z, J), False)


def _range_constraint(A: np.ndarray):
    """Rows N^T with N spanning (A R^n)^perp, so that N^T v = 0 iff v in A R^n."""
    comp = orthogonal_complement(colspace_basis(A))
    return comp.Q.T


def mixed_block_value(A, C, J: Iterable[int], cfg: NormConfig, normalize: str = "vz") -> tuple[float, np.ndarray]:
    """Denominator of H_J for the mixed system Ax = b, Cx <= d.

    ``normalize`` picks which block of the dual pair (v, z) carries the unit
    l-infinity sphere: ``"vz"`` both (plain mixed constant), ``"v"`` the
    equation block (easy inequalities) or ``"z"`` the inequality block (easy
    equations). Returns ``(value, witness)`` with witness = concat(v, z);
    ``value`` is ``inf`` when no pin is feasible.
    """
    A = np.asarray(A, dtype=float)
    C = np.asarray(C, dtype=float)
    J = sorted(J)
    if cfg.codomain is not NormTag.L1:
        raise UnsupportedNormError("mixed systems need the l1 norm on the product codomain")
    _require_lp_norm(cfg.domain, "domain")
    m, k = A.shape[0], len(J)
    q = cfg.domain.dual
    R = np.hstack([A.T, C[J].T])
    N = _range_constraint(A)
    E = np.hstack([N, np.zeros((N.shape[0], k))])
    lb = np.concatenate([np.full(m, -np.inf), np.zeros(k)])
    ub = np.full(m + k, np.inf)
    rows, glb, gub, signs = [], [], [], []
    if normalize in ("vz", "v"):
        for i in range(m):
            rows.append(np.eye(m + k)[i])
            glb.append(-1.0)
            gub.append(1.0)
            signs.append((1.0, -1.0))
    if normalize in ("vz", "z"):
        for j in range(k):
            rows.append(np.eye(m + k)[m + j])
            glb.append(0.0)
            gub.append(1.0)
            signs.append((1.0,))
    if normalize not in ("vz", "v", "z"):
        raise ValueError(f"unknown normalization {normalize!r}")
    if not rows:
        return np.inf, np.zeros(m + k)
    if normalize == "vz":
        # the sphere pin needs every other coordinate inside the unit box
        ub = np.concatenate([np.ones(m), np.ones(k)])
        lb = np.concatenate([-np.ones(m), np.zeros(k)])
    elif normalize == "v":
        lb[:m], ub[:m] = -1.0, 1.0
    else:
        ub[m:] = 1.0
    value, y = _normalized_min(R, q, np.array(rows), np.array(glb), np.array(gub), signs, E, np.zeros(E.shape[0]), lb, ub)
    return value, (np.zeros(m + k) if y is None else y)


def min_relsurj_value(A, C, J: Iterable[int], cfg: NormConfig) -> SurjectivityOutcome:
    """min{ ||A^T v + C_J^T z||^* : v in A R^n, z >= 0, ||(v, z)||_inf = 1 }.

    Evaluated as the smallest of 2m + |J| linear programs, each pinning one
    coordinate of (v, z) to +-1 (only +1 for z).
    """
    A = np.asarray(A, dtype=float)
    C = np.asarray(C, dtype=float)
    J = sorted(J)
    value, y = mixed_block_value(A, C, J, cfg, "vz")
    m = A.shape[0]
    eps = surj_threshold(np.vstack([A, C]), cfg.domain)
    if value > eps:
        return SurjectivityOutcome(value, y, frozenset(J), True)
    return SurjectivityOutcome(value, y, _support(y[m:], J), False)


def facial_block_value(At, J: Iterable[int], Y: np.ndarray, cfg: NormConfig) -> float:
    """Denominator of H_J for the simplex-constrained system A x = v, x in Delta.

    ``At`` is [A; 1^T] ((m+1) x n) and the inequality block is -I_n restricted
    to J. ``Y`` holds (as rows) the vertices of L_A cap {||y||_1 <= 1}, one per
    antipodal pair, with L_A = {Ax : 1^T x = 0}. The normalization is the dual
    of the l1 norm restricted to L_A, max_k |<v, y_k>| = 1, split into one
    program per pinned vertex and sign.
    """
    At = np.asarray(At, dtype=float)
    J = sorted(J)
    if cfg.codomain is not NormTag.L1:
        raise UnsupportedNormError("facial distance needs the l1 norm on R^m")
    _require_lp_norm(cfg.domain, "domain")
    m1, n = At.shape
    m, k = m1 - 1, len(J)
    Y = np.asarray(Y, dtype=float).reshape(-1, m)
    if Y.shape[0] == 0:
        return np.inf
    q = cfg.domain.dual
    CJ = -np.eye(n)[J]
    R = np.hstack([At.T, CJ.T])
    N = _range_constraint(At)
    E = np.hstack([N, np.zeros((N.shape[0], k))])
    lb = np.concatenate([np.full(m1, -np.inf), np.zeros(k)])
    G = np.hstack([Y, np.zeros((Y.shape[0], 1 + k))])
    ng = G.shape[0]
    value, _ = _normalized_min(
        R, q, G, -np.ones(ng), np.ones(ng), [(1.0, -1.0)] * ng,
        E, np.zeros(E.shape[0]), lb, None,
    )
    return value


def distance_to_polyhedron(u, A, b, eqA=None, eqb=None, domain_norm: NormTag = NormTag.LINF):
    """dist(u, {x : A x <= b, eqA x = eqb}) and a nearest point."""
    _require_lp_norm(domain_norm, "domain")
    u = np.asarray(u, dtype=float)
    n = u.size
    A = np.asarray(A, dtype=float).reshape(-1, n)
    b = np.asarray(b, dtype=float).ravel()
    eqA = np.zeros((0, n)) if eqA is None else np.asarray(eqA, dtype=float).reshape(-1, n)
    eqb = np.zeros(0) if eqb is None else np.asarray(eqb, dtype=float).ravel()
    p, r = A.shape[0], eqA.shape[0]
    # variables (x, s), A x + s = b, s >= 0
    E = np.block([[A, np.eye(p)], [eqA, np.zeros((r, p))]])
    e = np.concatenate([b, eqb])
    R = np.hstack([np.eye(n), np.zeros((n, p))])
    lb = np.concatenate([np.full(n, -np.inf), np.zeros(p)])
    value, y = min_residual_norm(R, u, domain_norm, E, e, lb, None)
    if y is None:
        raise InfeasibleSystemError("polyhedron is empty")
    return value, y[:n]


def min_norm_solution(A, J: Iterable[int], y, domain_norm: NormTag = NormTag.LINF):
    """min{ ||x|| : A_J x <= y_J } and an attaining x. ``y`` is indexed like A's rows."""
    A = np.asarray(A, dtype=float)
    J = sorted(J)
    y = np.asarray(y, dtype=float).ravel()
    n = A.shape[1]
    if not J:
        return 0.0, np.zeros(n)
    value, x = distance_to_polyhedron(np.zeros(n), A[J], y[J], domain_norm=domain_norm)
    return value, x
