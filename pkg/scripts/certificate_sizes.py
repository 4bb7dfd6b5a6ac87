"""Distribution of certificate-collection sizes on random Gaussian matrices.

For each (m, n) shape, samples `--trials` matrices through the bench command,
keeps the non-surjective trials (0 in conv(A^T)), and prints quartiles of
|F| and |I|. Raw CSVs go to `--outdir` for external plotting.

    python3 scripts/certificate_sizes.py --shapes 8x3 10x5 12x6 --trials 1000 --seed 1
"""
from __future__ import annotations

import argparse
import csv
from pathlib import Path

import numpy as np

from hoffman.cli import main as hoffman_main


def quartiles(x):
    if not len(x):
        return "n/a"
    q = np.percentile(x, [0, 25, 50, 75, 100])
    return " / ".join(f"{v:g}" for v in q)


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--shapes", nargs="+", default=["8x3", "10x5"], help="m x n pairs, e.g. 10x5")
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--algo", type=int, choices=[1, 2], default=1)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--outdir", default="results")
    args = ap.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)

    print(f"{'shape':>7} {'nonsurj':>8}   |F| min/q1/med/q3/max        |I| min/q1/med/q3/max")
    for shape in args.shapes:
        m, n = (int(t) for t in shape.lower().split("x"))
        path = out / f"bench_m{m}_n{n}_seed{args.seed}_algo{args.algo}.csv"
        argv = ["bench", "--m", str(m), "--n", str(n), "--trials", str(args.trials), "--seed", str(args.seed),
                "--algo", str(args.algo), "--jobs", str(args.jobs), "--out", str(path)]
        if m <= 12:
            argv.append("--verify")
        code = hoffman_main(argv)
        if code != 0:
            raise SystemExit(f"bench failed for {shape} (exit {code})")
        with path.open() as fh:
            rows = [r for r in csv.DictReader(fh) if r["surjective_flag"] == "0"]
        F = [int(r["|F|"]) for r in rows]
        I = [int(r["|I|"]) for r in rows]
        print(f"{shape:>7} {len(rows):>8}   {quartiles(F):<28} {quartiles(I)}")


if __name__ == "__main__":
    main()
