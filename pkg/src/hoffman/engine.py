"""Hoffman constants for the six system shapes, with certificates.

Every variant follows the same recipe: a probe that decides (relative)
surjectivity of an index set J and returns a certificate when it fails, a
per-set value function H_J, and one of the two certificate searches in
:mod:`hoffman.certkit`. The constant is the largest H_F over the
surjective certificates F.
"""
from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .certkit import CertificateLedger, algorithm1_run, algorithm2_run, set_key
from .linalg import NormTag, as_matrix, colspace_basis, l1_section_vertices, norm, row_norms
from .polylp import (
    NormConfig,
    SurjectivityOutcome,
    UnsupportedNormError,
    distance_to_polyhedron,
    facial_block_value,
    min_conic_image_norm,
    min_norm_solution,
    min_relsurj_detect,
    mixed_block_value,
    restricted_value,
)

SCHEMA_VERSION = 1
WITNESS_MAX_F = 16


class Variant(enum.Enum):
    INEQ = "ineq"
    RESTRICTED = "restricted"
    MIXED = "mixed"
    MIXED_EASY_INEQ = "mixed-easy-ineq"
    MIXED_EASY_EQ = "mixed-easy-eq"
    FACIAL = "facial"


class Algo(enum.IntEnum):
    ALG1 = 1
    ALG2 = 2


class WitnessNotApplicable(ValueError):
    """No tight witness exists or can be built for this report."""


@dataclass
class Witness:
    b: np.ndarray
    u: np.ndarray
    ratio: float
    F: frozenset
    y: np.ndarray

    def to_dict(self) -> dict:
        return {"b": self.b.tolist(), "u": self.u.tolist(), "ratio": self.ratio,
                "F": [i + 1 for i in sorted(self.F)], "y": self.y.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "Witness":
        return cls(np.asarray(d["b"], float), np.asarray(d["u"], float), float(d["ratio"]),
                   frozenset(i - 1 for i in d["F"]), np.asarray(d["y"], float))


@dataclass
class HoffmanReport:
    variant: Variant
    H: float
    ledger: CertificateLedger
    norms: NormConfig
    algo: Algo = Algo.ALG1
    witness: Witness | None = None
    extra: dict = field(default_factory=dict)

    @property
    def per_F_values(self) -> dict:
        return self.ledger.per_F

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "variant": self.variant.value,
            "H": self.H,
            "norms": self.norms.to_dict(),
            "algo": int(self.algo),
            "ledger": self.ledger.to_dict(),
            "witness": None if self.witness is None else self.witness.to_dict(),
            "extra": self.extra,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "HoffmanReport":
        if d.get("schema") != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema {d.get('schema')!r}")
        return cls(
            Variant(d["variant"]),
            float(d["H"]),
            CertificateLedger.from_dict(d["ledger"]),
            NormConfig.of(d["norms"]["domain"], d["norms"]["codomain"]),
            Algo(d.get("algo", 1)),
            None if d.get("witness") is None else Witness.from_dict(d["witness"]),
            dict(d.get("extra", {})),
        )

    @classmethod
    def from_json(cls, text: str) -> "HoffmanReport":
        return cls.from_dict(json.loads(text))


def _inv(value: float) -> float:
    return 0.0 if not np.isfinite(value) or value <= 0 else 1.0 / value


def _search(universe: int, probe, value_of, algo: Algo) -> CertificateLedger:
    if universe == 0:
        # only the empty set, which is surjective by definition
        out = probe(frozenset())
        led = CertificateLedger(0, probes=1)
        if out.surjective:
            h = float(value_of(frozenset()))
            led.F.append(frozenset())
            led.per_F[frozenset()] = h
            led.best_H = h
        return led
    run = algorithm1_run if Algo(algo) is Algo.ALG1 else algorithm2_run
    return run(universe, probe, value_of)


_EMPTY_OK = SurjectivityOutcome(np.inf, np.zeros(0), frozenset(), True)


def inequality_probe(A: np.ndarray, cfg: NormConfig) -> Callable[[frozenset], SurjectivityOutcome]:
    """Memoized surjectivity probe for Ax <= b; the empty set is surjective."""
    cache: dict = {}

    def probe(J: frozenset) -> SurjectivityOutcome:
        if not J:
            return _EMPTY_OK
        if J not in cache:
            cache[J] = min_conic_image_norm(A, J, cfg)
        return cache[J]

    probe.cache = cache
    return probe


def hoffman_inequalities(A, cfg: NormConfig = NormConfig(), algo: Algo = Algo.ALG1) -> HoffmanReport:
    """H(A) for Ax <= b under the configured norms."""
    A = as_matrix(A)
    if not cfg.exact:
        raise UnsupportedNormError(f"no exact path for norms {cfg.to_dict()}; use the l2 estimator")
    probe = inequality_probe(A, cfg)
    ledger = _search(A.shape[0], probe, lambda J: _inv(probe(J).value), algo)
    return HoffmanReport(Variant.INEQ, ledger.best_H, ledger, cfg, Algo(algo))


def hoffman_restricted(A, L, cfg: NormConfig = NormConfig(), algo: Algo = Algo.ALG1) -> HoffmanReport:
    """H(A|L): only the rows in L are charged in the residual."""
    A = as_matrix(A)
    L = frozenset(L)
    if any(i < 0 or i >= A.shape[0] for i in L):
        raise IndexError("L has indices outside the rows of A")
    if not cfg.exact:
        raise UnsupportedNormError(f"no exact path for norms {cfg.to_dict()}")
    probe = inequality_probe(A, cfg)

    def value_of(J):
        return _inv(restricted_value(A, J, L, cfg)) if J & L else 0.0

    ledger = _search(A.shape[0], probe, value_of, algo)
    return HoffmanReport(Variant.RESTRICTED, ledger.best_H, ledger, cfg, Algo(algo),
                         extra={"L": [i + 1 for i in sorted(L)]})


def _mixed_inputs(A, C):
    if A is None and C is None:
        raise ValueError("need at least one of A and C")
    if A is None or np.asarray(A).size == 0:
        C = as_matrix(C)
        A = np.zeros((0, C.shape[1]))
    elif C is None or np.asarray(C).size == 0:
        A = as_matrix(A)
        C = np.zeros((0, A.shape[1]))
    A, C = as_matrix(A), as_matrix(C)
    if A.shape[1] != C.shape[1]:
        raise ValueError(f"A has {A.shape[1]} columns but C has {C.shape[1]}")
    return A, C


def _mixed(A, C, cfg, algo, normalize: str, variant: Variant) -> HoffmanReport:
    A, C = _mixed_inputs(A, C)
    if cfg.codomain is not NormTag.L1 or not cfg.exact:
        raise UnsupportedNormError("mixed systems need codomain l1 on R^{m+p} and an LP domain norm")
    cache: dict = {}

    def probe(J):
        if J not in cache:
            cache[J] = min_relsurj_detect(A, C, J)
        return cache[J]

    def value_of(J):
        return _inv(mixed_block_value(A, C, J, cfg, normalize)[0])

    ledger = _search(C.shape[0], probe, value_of, algo)
    return HoffmanReport(variant, ledger.best_H, ledger, cfg, Algo(algo),
                         extra={"m": A.shape[0], "p": C.shape[0]})


def hoffman_mixed(A, C, cfg: NormConfig = NormConfig(NormTag.LINF, NormTag.L1), algo: Algo = Algo.ALG1) -> HoffmanReport:
    """H(A;C) for Ax = b, Cx <= d (l1 on the product codomain)."""
    return _mixed(A, C, cfg, algo, "vz", Variant.MIXED)


def hoffman_mixed_easy_inequalities(A, C, cfg: NormConfig = NormConfig(NormTag.LINF, NormTag.L1),
                                    algo: Algo = Algo.ALG1) -> HoffmanReport:
    """Constant for dist(u, A^{-1}(b) cap P_{C,d}) <= H ||Au - b||, u in P_{C,d}."""
    return _mixed(A, C, cfg, algo, "v", Variant.MIXED_EASY_INEQ)


def hoffman_mixed_easy_equations(A, C, cfg: NormConfig = NormConfig(NormTag.LINF, NormTag.L1),
                                 algo: Algo = Algo.ALG1) -> HoffmanReport:
    """Constant for dist(u, A^{-1}(b) cap P_{C,d}) <= H dist(d, Cu + R^p_+), u in A^{-1}(b)."""
    return _mixed(A, C, cfg, algo, "z", Variant.MIXED_EASY_EQ)


def facial_distance(A, cfg: NormConfig = NormConfig(NormTag.L1, NormTag.L1), algo: Algo = Algo.ALG1) -> HoffmanReport:
    """Hoffman constant of A x = v over the simplex; 1/H is the facial distance of conv(A).

    Columns of A are the points. The search runs over subsets of the n
    nonnegativity constraints of the simplex.
    """
    A = as_matrix(A)
    m, n = A.shape
    if cfg.codomain is not NormTag.L1 or not cfg.exact:
        raise UnsupportedNormError("facial distance has an exact path only for l1 on R^m and an LP norm on R^n")
    At = np.vstack([A, np.ones((1, n))])
    C = -np.eye(n)
    # L_A = A {x : 1^T x = 0}
    diffs = A[:, 1:] - A[:, :1] if n > 1 else np.zeros((m, 0))
    Y = l1_section_vertices(colspace_basis(diffs)) if m else np.zeros((0, 0))
    cache: dict = {}

    def probe(J):
        if J not in cache:
            cache[J] = min_relsurj_detect(At, C, J)
        return cache[J]

    def value_of(J):
        return _inv(facial_block_value(At, J, Y, cfg))

    ledger = _search(n, probe, value_of, algo)
    H = ledger.best_H
    return HoffmanReport(Variant.FACIAL, H, ledger, cfg, Algo(algo),
                         extra={"inverse_H": (1.0 / H) if H > 0 else None})


def _attaining_F(report: HoffmanReport) -> frozenset:
    H = report.H
    tops = [F for F, h in report.per_F_values.items() if h >= H * (1 - 1e-9)]
    return min(tops, key=lambda S: sorted(S))


def tight_witness(A, report: HoffmanReport, cfg: NormConfig | None = None) -> Witness:
    """Build (b, u) with dist(u, P_{A,b}) = H * dist(b, Au + R^m_+).

    Uses the lexicographically smallest F attaining H. The inner value
    y -> min{||x|| : A_F x <= y_F} is convex, so its maximum over the unit
    l-infinity ball sits at a sign vertex; vertices are scanned starting from
    y = -1, and the scan stops once one reaches H_F (no vertex can exceed it).
    Rows outside F get a right-hand side large enough never to bind.
    """
    A = as_matrix(A)
    cfg = cfg or report.norms
    if report.variant not in (Variant.INEQ,):
        raise WitnessNotApplicable("witnesses are built for pure inequality systems only")
    if cfg.codomain is not NormTag.LINF:
        raise WitnessNotApplicable("witness construction needs the l-infinity codomain norm")
    if report.H <= 0:
        raise WitnessNotApplicable("H = 0: every point with zero residual is feasible")
    F = _attaining_F(report)
    k = len(F)
    if k > WITNESS_MAX_F:
        raise WitnessNotApplicable(f"attaining set has {k} > {WITNESS_MAX_F} rows")
    Fl = sorted(F)
    m, n = A.shape
    HF = report.per_F_values[F]
    best, best_y = -np.inf, None
    for signs in itertools.product((-1.0, 1.0), repeat=k):
        y = np.zeros(m)
        y[Fl] = signs
        val, _ = min_norm_solution(A, F, y, cfg.domain)
        if val > best:
            best, best_y = val, y
        if best >= HF * (1 - 1e-9):
            break
    big = (1.0 + float(row_norms(A, cfg.domain.dual).max(initial=0.0))) * (report.H + 1.0) * norm(best_y, NormTag.LINF)
    b = np.full(m, big)
    b[Fl] = best_y[Fl]
    u = np.zeros(n)
    dist_u, _ = distance_to_polyhedron(u, A, b, domain_norm=cfg.domain)
    resid = norm(np.maximum(A @ u - b, 0.0), cfg.codomain)
    ratio = dist_u / resid if resid > 0 else np.inf
    return Witness(b, u, float(ratio), F, best_y)


@dataclass
class ProblemSpec:
    variant: Variant
    A: np.ndarray | None
    C: np.ndarray | None = None
    L: frozenset | None = None
    norms: NormConfig = NormConfig()


def compute(spec: ProblemSpec, algo: Algo = Algo.ALG1) -> HoffmanReport:
    v, cfg = spec.variant, spec.norms
    if v is Variant.INEQ:
        return hoffman_inequalities(spec.A, cfg, algo)
    if v is Variant.RESTRICTED:
        return hoffman_restricted(spec.A, spec.L or frozenset(), cfg, algo)
    if v is Variant.MIXED:
        return hoffman_mixed(spec.A, spec.C, cfg, algo)
    if v is Variant.MIXED_EASY_INEQ:
        return hoffman_mixed_easy_inequalities(spec.A, spec.C, cfg, algo)
    if v is Variant.MIXED_EASY_EQ:
        return hoffman_mixed_easy_equations(spec.A, spec.C, cfg, algo)
    return facial_distance(spec.A, cfg, algo)


def probe_for(spec: ProblemSpec) -> tuple[int, Callable[[frozenset], SurjectivityOutcome]]:
    """Universe size and surjectivity probe of a problem, for re-checking a ledger."""
    v = spec.variant
    if v in (Variant.INEQ, Variant.RESTRICTED):
        A = as_matrix(spec.A)
        return A.shape[0], inequality_probe(A, spec.norms)
    if v is Variant.FACIAL:
        A = as_matrix(spec.A)
        n = A.shape[1]
        At, C = np.vstack([A, np.ones((1, n))]), -np.eye(n)
        return n, lambda J: min_relsurj_detect(At, C, J)
    A, C = _mixed_inputs(spec.A, spec.C)
    return C.shape[0], lambda J: min_relsurj_detect(A, C, J)
