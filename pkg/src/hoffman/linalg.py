"""Dense linear algebra helpers: norms, subspace bases, projections."""
from __future__ import annotations

import enum
from itertools import combinations
from dataclasses import dataclass

import numpy as np

RANK_TOL = 1e-10


class NormTag(enum.Enum):
    L1 = "l1"
    L2 = "l2"
    LINF = "linf"

    @property
    def dual(self) -> "NormTag":
        return _DUAL[self]

    @classmethod
    def parse(cls, text: str | "NormTag") -> "NormTag":
        if isinstance(text, NormTag):
            return text
        key = text.strip().lower().replace("_", "").replace("-", "")
        aliases = {"l1": cls.L1, "1": cls.L1, "l2": cls.L2, "2": cls.L2,
                   "linf": cls.LINF, "inf": cls.LINF, "linfinity": cls.LINF}
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown norm {text!r}") from None


_DUAL = {NormTag.L1: NormTag.LINF, NormTag.LINF: NormTag.L1, NormTag.L2: NormTag.L2}


def as_matrix(M, cols: int | None = None) -> np.ndarray:
    """Coerce to a finite 2-D float array. An empty input becomes 0 x cols."""
    arr = np.asarray(M, dtype=float)
    if arr.size == 0:
        return np.zeros((0, cols if cols is not None else (arr.shape[-1] if arr.ndim == 2 else 0)))
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    return arr


def norm(v, tag: NormTag) -> float:
    v = np.asarray(v, dtype=float).ravel()
    if v.size == 0:
        return 0.0
    if tag is NormTag.L1:
        return float(np.abs(v).sum())
    if tag is NormTag.L2:
        return float(np.sqrt(v @ v))
    return float(np.abs(v).max())


def row_norms(M: np.ndarray, tag: NormTag) -> np.ndarray:
    if M.shape[0] == 0:
        return np.zeros(0)
    if tag is NormTag.L1:
        return np.abs(M).sum(axis=1)
    if tag is NormTag.L2:
        return np.sqrt((M * M).sum(axis=1))
    return np.abs(M).max(axis=1) if M.shape[1] else np.zeros(M.shape[0])


@dataclass(frozen=True)
class SubspaceBasis:
    """Orthonormal basis stored as the columns of ``Q`` (ambient_dim x k)."""

    Q: np.ndarray

    @property
    def ambient_dim(self) -> int:
        return self.Q.shape[0]

    @property
    def dim(self) -> int:
        return self.Q.shape[1]

    @property
    def basis_vectors(self) -> list[np.ndarray]:
        return [self.Q[:, k].copy() for k in range(self.dim)]


def _svd_rank(s: np.ndarray, rank_tol: float) -> int:
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rank_tol * s[0]))


def colspace_basis(M, rank_tol: float = RANK_TOL) -> SubspaceBasis:
    M = np.asarray(M, dtype=float)
    rows = M.shape[0] if M.ndim == 2 else M.size
    if M.size == 0:
        return SubspaceBasis(np.zeros((rows, 0)))
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    r = _svd_rank(s, rank_tol)
    return SubspaceBasis(U[:, :r])


def orthogonal_complement(S: SubspaceBasis, rank_tol: float = RANK_TOL) -> SubspaceBasis:
    """Orthonormal basis of span(S)^perp in the same ambient space."""
    d = S.ambient_dim
    if S.dim == 0:
        return SubspaceBasis(np.eye(d))
    U, s, _ = np.linalg.svd(S.Q, full_matrices=True)
    r = _svd_rank(s, rank_tol)
    return SubspaceBasis(U[:, r:])


def nullspace_basis(M, rank_tol: float = RANK_TOL) -> SubspaceBasis:
    """Orthonormal basis of {x : Mx = 0}."""
    M = np.asarray(M, dtype=float)
    n = M.shape[1]
    if M.shape[0] == 0:
        return SubspaceBasis(np.eye(n))
    _, s, Vt = np.linalg.svd(M, full_matrices=True)
    r = _svd_rank(s, rank_tol)
    return SubspaceBasis(Vt[r:].T.copy())


def project(v, S: SubspaceBasis) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape[0] != S.ambient_dim:
        raise ValueError("dimension mismatch between vector and subspace")
    return S.Q @ (S.Q.T @ v)


def projector(S: SubspaceBasis) -> np.ndarray:
    return S.Q @ S.Q.T


def smallest_positive_singular_value(M, rank_tol: float = RANK_TOL) -> float:
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        return 0.0
    s = np.linalg.svd(M, compute_uv=False)
    r = _svd_rank(s, rank_tol)
    return float(s[r - 1]) if r else 0.0


def psd_sqrt(M) -> np.ndarray:
    """Symmetric square root of a positive semidefinite matrix."""
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        return M.copy()
    w, V = np.linalg.eigh(0.5 * (M + M.T))
    w = np.clip(w, 0.0, None)
    return (V * np.sqrt(w)) @ V.T


def submatrix_rows(M, J) -> np.ndarray:
    """Rows of M indexed by J (0-based), in ascending order."""
    M = np.asarray(M, dtype=float)
    idx = sorted(J)
    if idx and (idx[0] < 0 or idx[-1] >= M.shape[0]):
        raise IndexError(f"row index out of range for a {M.shape[0]}-row matrix")
    return M[idx, :] if idx else np.zeros((0, M.shape[1]))


def l1_section_vertices(S: SubspaceBasis, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Vertices of span(S) cap {||y||_1 <= 1}, one per antipodal pair (as rows).

    These are the minimal-support vectors of the subspace scaled to unit l1
    norm: each is the one-dimensional solution of y in span(S) with d - 1
    chosen coordinates forced to zero.
    """
    m, d = S.ambient_dim, S.dim
    if d == 0:
        return np.zeros((0, m))
    found: list[np.ndarray] = []
    for Z in combinations(range(m), d - 1):
        sub = S.Q[list(Z)] if Z else np.zeros((0, d))
        null = nullspace_basis(sub, rank_tol)
        if null.dim != 1:
            continue
        y = S.Q @ null.Q[:, 0]
        y[np.abs(y) <= 1e-12 * np.abs(y).max()] = 0.0
        y /= np.abs(y).sum()
        # canonical sign: first nonzero entry positive
        if y[np.flatnonzero(y)[0]] < 0:
            y = -y
        if not any(np.allclose(y, f, atol=1e-10) for f in found):
            found.append(y)
    return np.array(found)
