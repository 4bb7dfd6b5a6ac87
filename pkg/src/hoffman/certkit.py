"""Certificate collections and the two combinatorial search loops.

A probe maps an index set J to a :class:`SurjectivityOutcome`. The search
maintains a collection ``F`` of surjective sets and a collection ``I`` of
non-surjective sets until every subset of the universe lies below some F or
above some I; the constant is then the largest per-F value.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .polylp import SurjectivityOutcome

log = logging.getLogger(__name__)

VERIFY_MAX_M = 22

Probe = Callable[[frozenset], SurjectivityOutcome]
ValueOf = Callable[[frozenset], float]


class ProbeError(RuntimeError):
    def __init__(self, J: frozenset, cause: Exception):
        super().__init__(f"probe failed on J={fmt_set(J)}: {cause}")
        self.J = J
        self.cause = cause


class InconsistentProbeError(RuntimeError):
    """The probe returned a certificate that is not a subset of the probed set."""


def fmt_set(S: Iterable[int]) -> str:
    return "{" + ",".join(str(i + 1) for i in sorted(S)) + "}"


def set_key(S: Iterable[int]) -> tuple:
    """Ordering key: larger sets first, then lexicographic on members."""
    s = sorted(S)
    return (-len(s), s)


@dataclass
class CertificateLedger:
    m: int
    F: list = field(default_factory=list)
    I: list = field(default_factory=list)
    per_F: dict = field(default_factory=dict)
    best_H: float = 0.0
    probes: int = 0

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "F": [[i + 1 for i in sorted(S)] for S in self.F],
            "I": [[i + 1 for i in sorted(S)] for S in self.I],
            "H": self.best_H,
            "per_F": {",".join(str(i + 1) for i in sorted(S)): v for S, v in self.per_F.items()},
            "probes": self.probes,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CertificateLedger":
        m = int(d["m"])

        def parse(sets):
            out = []
            for S in sets:
                idx = [int(i) - 1 for i in S]
                if any(i < 0 or i >= m for i in idx):
                    raise ValueError(f"index out of range in {S} for m={m}")
                out.append(frozenset(idx))
            return out

        per_F = {}
        for key, v in d.get("per_F", {}).items():
            idx = [int(t) - 1 for t in key.split(",") if t.strip()]
            per_F[frozenset(idx)] = float(v)
        return cls(m, parse(d.get("F", [])), parse(d.get("I", [])), per_F,
                   float(d.get("H", 0.0)), int(d.get("probes", 0)))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _probe(probe: Probe, J: frozenset) -> SurjectivityOutcome:
    try:
        out = probe(J)
    except Exception as exc:  # noqa: BLE001 - rewrapped with the offending set
        raise ProbeError(J, exc) from exc
    if not out.surjective and (not out.support or not out.support <= J):
        raise InconsistentProbeError(f"certificate {fmt_set(out.support)} is not a nonempty subset of {fmt_set(J)}")
    return out


def _record_F(ledger: CertificateLedger, J: frozenset, value_of: ValueOf) -> None:
    h = float(value_of(J))
    ledger.F.append(J)
    ledger.per_F[J] = h
    ledger.best_H = max(ledger.best_H, h)


def _maximal(sets: list) -> list:
    """Drop duplicates and any set contained in another one."""
    uniq = sorted(set(sets), key=set_key)
    kept: list = []
    for S in uniq:
        if not any(S <= T for T in kept):
            kept.append(S)
    return kept


def algorithm1_run(m: int, probe: Probe, value_of: ValueOf, trace: list | None = None) -> CertificateLedger:
    """Worklist search over the subsets of {0..m-1}.

    The worklist holds the sets not yet certified; a surjective probe removes
    everything below it, a non-surjective one splits every worklist set that
    contains the certificate into its one-element-smaller subsets.
    ``trace``, when given, receives the worklist measure before each probe:
    the number of worklist sets of each size, largest size first. Every
    iteration lowers this tuple lexicographically, which bounds the loop.
    """
    ledger = CertificateLedger(m)
    if m == 0:
        return ledger
    work = [frozenset(range(m))]
    while work:
        if trace is not None:
            sizes = [len(S) for S in work]
            trace.append(tuple(sizes.count(k) for k in range(m, -1, -1)))
        J = min(work, key=set_key)
        out = _probe(probe, J)
        ledger.probes += 1
        if out.surjective:
            _record_F(ledger, J, value_of)
            work = [S for S in work if not S <= J]
        else:
            Iv = out.support
            ledger.I.append(Iv)
            hit = [S for S in work if Iv <= S]
            rest = [S for S in work if not Iv <= S]
            split = [S - {i} for S in hit for i in sorted(Iv)]
            split = [S for S in split if not any(S <= F for F in ledger.F)]
            work = _maximal(rest + split)
        log.debug("probe %s -> %s, worklist %d", fmt_set(J), out.surjective, len(work))
    return ledger


def solve_cover_gap(F: Iterable[frozenset], I: Iterable[frozenset], m: int) -> frozenset | None:
    """Find J covered by no certificate, or return None when none exists.

    J must miss at least one element of every I and contain at least one
    element outside every F. Depth-first search over elements (inclusion
    tried first) with unit propagation on both clause families; the answer
    is then greedily grown to a maximal feasible set.
    """
    I_sets = [frozenset(S) for S in I]
    outside = [frozenset(range(m)) - frozenset(S) for S in F]
    if any(not S for S in I_sets) or any(not S for S in outside):
        return None
    assign: dict[int, bool] = {}

    def propagate(assign: dict) -> bool:
        changed = True
        while changed:
            changed = False
            for S in I_sets:
                if any(assign.get(i) is False for i in S):
                    continue
                free = [i for i in S if i not in assign]
                if not free:
                    return False
                if len(free) == 1:
                    assign[free[0]] = False
                    changed = True
            for S in outside:
                if any(assign.get(i) is True for i in S):
                    continue
                free = [i for i in S if i not in assign]
                if not free:
                    return False
                if len(free) == 1:
                    assign[free[0]] = True
                    changed = True
        return True

    def search(assign: dict):
        if not propagate(assign):
            return None
        free = [i for i in range(m) if i not in assign]
        if not free:
            return assign
        i = free[0]
        for val in (True, False):
            trial = dict(assign)
            trial[i] = val
            got = search(trial)
            if got is not None:
                return got
        return None

    found = search(assign)
    if found is None:
        return None
    J = {i for i, v in found.items() if v}
    for i in range(m):
        if i not in J and not any(S <= J | {i} for S in I_sets):
            J.add(i)
    return frozenset(J)


def algorithm2_run(m: int, probe: Probe, value_of: ValueOf) -> CertificateLedger:
    """Certificate search driven by the cover-gap feasibility problem."""
    ledger = CertificateLedger(m)
    if m == 0:
        return ledger
    while True:
        J = solve_cover_gap(ledger.F, ledger.I, m)
        if J is None:
            return ledger
        out = _probe(probe, J)
        ledger.probes += 1
        if out.surjective:
            _record_F(ledger, J, value_of)
        else:
            ledger.I.append(out.support)


def _masks(sets: Iterable[frozenset]) -> list[int]:
    return [sum(1 << i for i in S) for S in sets]


def verify_joint_certificates(F: Iterable[frozenset], I: Iterable[frozenset], m: int) -> bool:
    """True iff every J in 2^{0..m-1} lies below some F or above some I."""
    if m > VERIFY_MAX_M:
        raise ValueError(f"exhaustive verification is limited to m <= {VERIFY_MAX_M} (got {m})")
    if m == 0:
        return True
    allJ = np.arange(1 << m, dtype=np.int64)
    covered = np.zeros(allJ.size, dtype=bool)
    for f in _masks(F):
        covered |= (allJ & ~f) == 0
    for s in _masks(I):
        covered |= (allJ & s) == s
    return bool(covered.all())


def uncovered_sets(F, I, m: int) -> list[frozenset]:
    if m == 0:
        return []
    allJ = np.arange(1 << m, dtype=np.int64)
    covered = np.zeros(allJ.size, dtype=bool)
    for f in _masks(F):
        covered |= (allJ & ~f) == 0
    for s in _masks(I):
        covered |= (allJ & s) == s
    return [frozenset(i for i in range(m) if (int(J) >> i) & 1) for J in allJ[~covered]]
