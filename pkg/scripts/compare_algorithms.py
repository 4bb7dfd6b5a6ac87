"""Probe counts and wall time of the worklist search vs. the cover-gap search.

    python3 scripts/compare_algorithms.py --m 10 --n 5 --trials 50 --seed 3
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from hoffman.engine import Algo, hoffman_inequalities
from hoffman.linalg import NormTag
from hoffman.polylp import NormConfig
from hoffman.rng import trial_matrix


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--m", type=int, default=10)
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--seed", type=int, default=3)
    args = ap.parse_args()
    cfg = NormConfig(NormTag.LINF, NormTag.LINF)
    stats = {a: {"probes": [], "ms": []} for a in Algo}
    max_gap = 0.0
    for t in range(args.trials):
        A = trial_matrix(args.seed, t, args.m, args.n)
        Hs = []
        for a in Algo:
            t0 = time.perf_counter()
            rep = hoffman_inequalities(A, cfg, a)
            stats[a]["ms"].append((time.perf_counter() - t0) * 1e3)
            stats[a]["probes"].append(rep.ledger.probes)
            Hs.append(rep.H)
        max_gap = max(max_gap, abs(Hs[0] - Hs[1]) / max(1.0, Hs[0]))
    for a in Algo:
        p, ms = np.array(stats[a]["probes"]), np.array(stats[a]["ms"])
        print(f"algorithm {int(a)}: probes median {np.median(p):g} max {p.max()}, time median {np.median(ms):.1f} ms")
    print(f"largest relative disagreement in H: {max_gap:.2e}")


if __name__ == "__main__":
    main()
