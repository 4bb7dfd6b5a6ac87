"""Acceptance suite: one test per numbered criterion, each reporting a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``; the per-criterion
lines are printed in the terminal summary.
"""
import time
from functools import lru_cache

import numpy as np
import pytest

from hoffman.certkit import verify_joint_certificates
from hoffman.cli import main
from hoffman.ellipsoid import dikin_bounds
from hoffman.engine import (
    Algo,
    hoffman_inequalities,
    hoffman_mixed,
    hoffman_restricted,
    tight_witness,
    _attaining_F,
)
from hoffman.linalg import NormTag, colspace_basis
from hoffman.oracle import (
    oracle_bilevel_maxmin,
    oracle_hoffman_enumerate,
    oracle_mixed_enumerate,
    ray_boundary_distance,
)
from hoffman.polylp import NormConfig, distance_to_polyhedron, min_conic_image_norm, min_relsurj_detect
from hoffman.rng import SplitMix64, trial_matrix

LL = NormConfig(NormTag.LINF, NormTag.LINF)
MIX = NormConfig(NormTag.LINF, NormTag.L1)
RESULTS: dict = {}


def record(n: int, ok: bool, detail: str) -> None:
    RESULTS[n] = (ok, detail)
    assert ok, f"criterion {n}: {detail}"


def sizes(seed: int, count: int, lo_m: int, hi_m: int, lo_n: int, hi_n: int):
    g = SplitMix64(seed)
    r = g.raw(2 * count).reshape(count, 2)
    ms = lo_m + (r[:, 0] % np.uint64(hi_m - lo_m + 1)).astype(int)
    ns = lo_n + (r[:, 1] % np.uint64(hi_n - lo_n + 1)).astype(int)
    return list(zip(ms.tolist(), ns.tolist()))


@lru_cache(maxsize=None)
def criterion1_pool():
    """200 seeded Gaussian matrices, m in 3..8, n in 2..5, with both searches and the oracle."""
    pool = []
    for i, (m, n) in enumerate(sizes(101, 200, 3, 8, 2, 5)):
        A = trial_matrix(101, i, m, n)
        pool.append((A, hoffman_inequalities(A, LL, Algo.ALG1), hoffman_inequalities(A, LL, Algo.ALG2)))
    return pool


def rel_close(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(b))


def test_criterion_01_oracle_equivalence():
    t0 = time.perf_counter()
    pool = criterion1_pool()
    bad = []
    for i, (A, r1, r2) in enumerate(pool):
        ref = oracle_hoffman_enumerate(A, LL)
        if not (rel_close(r1.H, ref, 1e-7) and rel_close(r2.H, ref, 1e-7)):
            bad.append(i)
    dt = time.perf_counter() - t0
    record(1, not bad and dt < 60, f"{len(pool)} instances, mismatches {bad}, {dt:.1f}s (limit 60s)")


def test_criterion_02_worked_instance():
    A = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]])
    ok = True
    for algo in Algo:
        rep = hoffman_inequalities(A, LL, algo)
        F = sorted(sorted(i + 1 for i in S) for S in rep.ledger.F)
        I = sorted(sorted(i + 1 for i in S) for S in rep.ledger.I)
        ok &= rel_close(rep.H, 2.0, 1e-12) and F == [[1, 2], [1, 3], [2, 3]] and I == [[1, 2, 3]]
    record(2, ok, f"H={rep.H}, F={F}, I={I}")


def test_criterion_03_certificate_cover():
    bad = [i for i, (A, r1, r2) in enumerate(criterion1_pool()) if A.shape[0] <= 10
           and not (verify_joint_certificates(r1.ledger.F, r1.ledger.I, A.shape[0])
                    and verify_joint_certificates(r2.ledger.F, r2.ledger.I, A.shape[0]))]
    record(3, not bad, f"uncovered ledgers: {bad}")


@pytest.mark.slow
def test_criterion_04_hoffman_inequality_sampling():
    # every 8th criterion-1 instance (25 of them), 1000 samples each
    rng = np.random.default_rng(4)
    violations, worst, count = 0, 0.0, 0
    for A, rep, _ in criterion1_pool()[::8]:
        m, n = A.shape
        for _ in range(1000):
            b = A @ rng.standard_normal(n) + rng.exponential(size=m) * (rng.random(m) < 0.5)
            u = 2 * rng.standard_normal(n)
            res = np.maximum(A @ u - b, 0.0).max()
            d = 0.0 if res == 0 else distance_to_polyhedron(u, A, b, domain_norm=NormTag.LINF)[0]
            violations += d > rep.H * res + 1e-8
            if res > 0 and rep.H > 0:
                worst = max(worst, d / (rep.H * res))
            count += 1
    record(4, violations == 0, f"{count} samples, {violations} violations, max dist/(H*residual) {worst:.6f}")


def test_criterion_05_tightness():
    bad, checked = [], 0
    for i, (A, rep, _) in enumerate(criterion1_pool()):
        if rep.H == 0 or len(_attaining_F(rep)) > 12:
            continue
        w = tight_witness(A, rep)
        checked += 1
        if not (rep.H * (1 - 1e-6) <= w.ratio <= rep.H * (1 + 1e-6)):
            bad.append(i)
    record(5, not bad and checked > 0, f"{checked} witnesses, ratio off on {bad}")


def test_criterion_06_primal_dual_equality():
    bad, checked = [], 0
    for i, (m, n) in enumerate(sizes(606, 50, 2, 4, 2, 3)):
        A = trial_matrix(606, i, m, n)
        for r in range(1, m + 1):
            for J in map(frozenset, __import__("itertools").combinations(range(m), r)):
                out = min_conic_image_norm(A, J, LL)
                if not out.surjective:
                    continue
                checked += 1
                if not rel_close(oracle_bilevel_maxmin(A, J, LL), 1.0 / out.value, 1e-7):
                    bad.append((i, sorted(J)))
    record(6, not bad and checked > 0, f"{checked} surjective sets over 50 instances, mismatches {bad}")


def test_criterion_07_mixed_systems():
    bad, surj_bad, n_surj = [], [], 0
    g = SplitMix64(707)
    for i in range(100):
        m, p, n = (int(x) for x in g.raw(3) % np.array([4, 6, 4], dtype=np.uint64))
        p, n = p + 1, n + 1
        A = trial_matrix(707, 2 * i, m, n)
        C = trial_matrix(707, 2 * i + 1, p, n)
        rep = hoffman_mixed(A, C, MIX)
        if not rel_close(rep.H, oracle_mixed_enumerate(A, C, MIX), 1e-7):
            bad.append(i)
        if min_relsurj_detect(A, C, range(p)).surjective:
            n_surj += 1
            led = rep.ledger
            if not (led.F == [frozenset(range(p))] and led.I == [] and led.probes == 1):
                surj_bad.append(i)
    record(7, not bad and not surj_bad,
           f"100 instances, mismatches {bad}; {n_surj} surjective, single-probe violations {surj_bad}")


def _ray_estimate(A, C, J, d, rng, k=200):
    """Min over sampled directions of the exact boundary distance along each ray (>= true distance)."""
    m = A.shape[0]
    QA = colspace_basis(A).Q
    Q = np.zeros((m + len(J), QA.shape[1] + len(J)))
    Q[:m, :QA.shape[1]] = QA
    Q[m:, QA.shape[1]:] = np.eye(len(J))
    # the Dikin axes are natural candidates, plus random directions
    w, V = np.linalg.eigh(Q.T @ d.M @ Q)
    dirs = [V[:, j] for j in range(V.shape[1])] + [-V[:, j] for j in range(V.shape[1])]
    dirs += list(rng.standard_normal((k, Q.shape[1])))
    best = np.inf
    for u in dirs:
        best = min(best, ray_boundary_distance(A, C, J, Q @ (u / np.linalg.norm(u))))
    return best


def test_criterion_08_euclidean_estimator():
    hand = dikin_bounds(None, [[-1.0]], [0])
    ok = abs(hand.sigma - 2 ** -0.5) <= 1e-9 and hand.lower <= 1.0 <= hand.upper and hand.factor == 13
    rng = np.random.default_rng(8)
    found, bad = 0, []
    attempt = 0
    while found < 50:
        attempt += 1
        m, n, p = int(rng.integers(0, 3)), int(rng.integers(2, 5)), int(rng.integers(1, 5))
        A, C = rng.standard_normal((m, n)), rng.standard_normal((p, n))
        J = [int(j) for j in np.flatnonzero(rng.random(p) < 0.7)]
        if not J or not min_relsurj_detect(A, C, J).surjective:
            continue
        found += 1
        d = dikin_bounds(A, C, J)
        est = _ray_estimate(A, C, J, d, rng)
        exact_ratio = d.upper / d.lower == 4 * p + 9 and d.upper == (4 * p + 9) * d.lower
        if not (d.lower * (1 - 1e-9) <= est <= d.upper and exact_ratio):
            bad.append(attempt)
    record(8, ok and not bad, f"hand sigma={hand.sigma:.12f}; 50 random instances, out of bracket {bad}")


def test_criterion_09_restricted():
    rng = np.random.default_rng(9)
    bad = []
    for i, (m, n) in enumerate(sizes(909, 50, 3, 6, 2, 4)):
        A = trial_matrix(909, i, m, n)
        H = hoffman_inequalities(A, LL).H
        full = hoffman_restricted(A, range(m), LL).H
        empty = hoffman_restricted(A, [], LL).H
        L2 = [j for j in range(m) if rng.random() < 0.7]
        L1 = [j for j in L2 if rng.random() < 0.5]
        h1, h2 = hoffman_restricted(A, L1, LL).H, hoffman_restricted(A, L2, LL).H
        if not (rel_close(full, H, 1e-9) and empty == 0.0 and h1 <= h2 + 1e-9):
            bad.append(i)
    record(9, not bad, f"50 instances, failures {bad}")


@pytest.mark.slow
def test_criterion_10_bench(tmp_path, capsys):
    args = ["bench", "--m", "10", "--n", "5", "--trials", "1000", "--seed", "1", "--algo", "1", "--verify"]
    t0 = time.perf_counter()
    code1 = main(args + ["--out", str(tmp_path / "a.csv")])
    dt = time.perf_counter() - t0
    code2 = main(args + ["--out", str(tmp_path / "b.csv")])
    same = (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    rows = (tmp_path / "a.csv").read_text().splitlines()
    nonsurj = sum(r.endswith(",0") for r in rows[1:])
    record(10, code1 == 0 and code2 == 0 and same and dt < 600 and len(rows) == 1001,
           f"{dt:.1f}s per run (limit 600s), byte-identical={same}, cover check exit codes {code1}/{code2}, "
           f"{nonsurj} non-surjective trials")
