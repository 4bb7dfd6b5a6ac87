"""Command-line front end.

Exit codes: 0 success, 1 verification failed, 2 unsupported norm combination,
3 input error (unreadable file, malformed matrix, dimension mismatch),
4 index set not relatively surjective (``estimate-l2``).
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .certkit import VERIFY_MAX_M, CertificateLedger, fmt_set, verify_joint_certificates
from .ellipsoid import NewtonConvergenceError, NotInRelativeInterior, dikin_bounds
from .engine import (
    Algo,
    HoffmanReport,
    ProblemSpec,
    Variant,
    WitnessNotApplicable,
    compute,
    hoffman_inequalities,
    probe_for,
    tight_witness,
)
from .linalg import NormTag
from .matio import MatrixIOError, read_matrix
from .polylp import NormConfig, UnsupportedNormError, min_relsurj_detect
from .rng import trial_matrix

log = logging.getLogger("hoffman")

EXIT_OK, EXIT_FAIL, EXIT_NORM, EXIT_IO, EXIT_NOT_SURJ = 0, 1, 2, 3, 4

DEFAULT_NORMS = {
    Variant.INEQ: ("linf", "linf"),
    Variant.RESTRICTED: ("linf", "linf"),
    Variant.MIXED: ("linf", "l1"),
    Variant.MIXED_EASY_INEQ: ("linf", "l1"),
    Variant.MIXED_EASY_EQ: ("linf", "l1"),
    Variant.FACIAL: ("l1", "l1"),
}
BENCH_HEADER = "m,n,trial,|F|,|I|,H,wallclock_ms,surjective_flag"
BENCH_VERIFY_MAX_M = 12


class InputError(ValueError):
    pass


def parse_index_list(text: str | None) -> frozenset:
    """"1,3,5" (1-based) -> frozenset({0, 2, 4}); empty or None -> empty set."""
    if text is None or not text.strip():
        return frozenset()
    try:
        idx = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"bad index list {text!r}") from None
    if any(i < 1 for i in idx):
        raise InputError(f"indices are 1-based: {text!r}")
    return frozenset(i - 1 for i in idx)


def _load(path: str | None) -> np.ndarray | None:
    if path is None:
        return None
    M = read_matrix(path)
    return None if M.size == 0 else M


def _spec_from_args(args) -> ProblemSpec:
    variant = Variant(args.variant)
    dom, cod = DEFAULT_NORMS[variant]
    cfg = NormConfig.of(args.norm_dom or dom, args.norm_cod or cod)
    A, C = _load(args.A), _load(getattr(args, "C", None))
    L = parse_index_list(getattr(args, "L", None))
    if variant in (Variant.INEQ, Variant.RESTRICTED, Variant.FACIAL) and A is None:
        raise InputError(f"--A is required for --variant {variant.value}")
    if variant in (Variant.MIXED, Variant.MIXED_EASY_INEQ, Variant.MIXED_EASY_EQ) and A is None and C is None:
        raise InputError("mixed variants need --A, --C or both")
    if A is not None and C is not None and A.shape[1] != C.shape[1]:
        raise InputError(f"A has {A.shape[1]} columns but C has {C.shape[1]}")
    if variant is Variant.RESTRICTED and L and max(L) >= A.shape[0]:
        raise InputError(f"--L refers to row {max(L) + 1} but A has {A.shape[0]} rows")
    return ProblemSpec(variant, A, C, L, cfg)


def _emit(obj, out=None) -> None:
    text = json.dumps(obj, indent=2)
    (out or sys.stdout).write(text + "\n")


def cmd_compute(args) -> int:
    spec = _spec_from_args(args)
    report = compute(spec, Algo(args.algo))
    if args.witness:
        try:
            report.witness = tight_witness(spec.A, report)
        except WitnessNotApplicable as exc:
            log.warning("no witness: %s", exc)
    _emit(report.to_dict())
    return EXIT_OK


def cmd_estimate_l2(args) -> int:
    A, C = _load(args.A), _load(args.C)
    if A is None and C is None:
        raise InputError("need --A, --C or both")
    n = (A if A is not None else C).shape[1]
    A = np.zeros((0, n)) if A is None else A
    C = np.zeros((0, n)) if C is None else C
    if A.shape[1] != C.shape[1]:
        raise InputError(f"A has {A.shape[1]} columns but C has {C.shape[1]}")
    J = parse_index_list(args.J)
    if J and max(J) >= C.shape[0]:
        raise InputError(f"--J refers to row {max(J) + 1} but C has {C.shape[0]} rows")
    det = min_relsurj_detect(A, C, J)
    if not det.surjective:
        _emit({"error": "not relatively surjective", "certificate": [i + 1 for i in sorted(det.support)]})
        print(f"J is not relatively surjective; certificate {fmt_set(det.support)}", file=sys.stderr)
        return EXIT_NOT_SURJ
    try:
        bounds = dikin_bounds(A, C, J)
    except NotInRelativeInterior as exc:
        _emit({"error": str(exc), "certificate": []})
        return EXIT_NOT_SURJ
    _emit(bounds.to_dict())
    return EXIT_OK


def _bench_trial(job) -> tuple:
    t, m, n, seed, algo, verify, timing = job
    A = trial_matrix(seed, t, m, n)
    t0 = time.perf_counter()
    report = hoffman_inequalities(A, NormConfig(NormTag.LINF, NormTag.LINF), Algo(algo))
    ms = (time.perf_counter() - t0) * 1e3
    led = report.ledger
    # both searches probe the full set first; it lands in F iff A is surjective
    surj = frozenset(range(m)) in led.F
    ok = True
    if verify:
        ok = verify_joint_certificates(led.F, led.I, m)
    row = f"{m},{n},{t},{len(led.F)},{len(led.I)},{report.H:.17g},{f'{ms:.3f}' if timing else ''},{int(surj)}"
    return row, ok


def cmd_bench(args) -> int:
    if args.verify and args.m > BENCH_VERIFY_MAX_M:
        raise InputError(f"--verify is limited to m <= {BENCH_VERIFY_MAX_M}")
    jobs = [(t, args.m, args.n, args.seed, args.algo, args.verify, args.timing) for t in range(args.trials)]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_bench_trial, jobs, chunksize=8))
    else:
        results = [_bench_trial(j) for j in jobs]
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        out.write(BENCH_HEADER + "\n")
        for row, _ in results:
            out.write(row + "\n")
    finally:
        if args.out:
            out.close()
    bad = [i for i, (_, ok) in enumerate(results) if not ok]
    if bad:
        print(f"cover check failed on trials {bad}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _load_ledger(path: str) -> tuple[CertificateLedger, HoffmanReport | None]:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise MatrixIOError(f"cannot read ledger {path}: {exc}") from exc
    if "ledger" in data:
        report = HoffmanReport.from_dict(data)
        return report.ledger, report
    return CertificateLedger.from_dict(data), None


def cmd_verify(args) -> int:
    ledger, report = _load_ledger(args.ledger)
    if ledger.m > VERIFY_MAX_M:
        print(f"m = {ledger.m} exceeds the exhaustive limit {VERIFY_MAX_M}", file=sys.stderr)
        return EXIT_FAIL
    if not verify_joint_certificates(ledger.F, ledger.I, ledger.m):
        print("certificates do not cover every index set", file=sys.stderr)
        return EXIT_FAIL
    if args.A is None and args.C is None:
        return EXIT_OK
    variant = report.variant if report else Variant(args.variant)
    norms = report.norms if report else NormConfig.of(*DEFAULT_NORMS[variant])
    spec = ProblemSpec(variant, _load(args.A), _load(args.C), None, norms)
    universe, probe = probe_for(spec)
    if universe != ledger.m:
        print(f"stale ledger: it covers {ledger.m} constraints, the matrix has {universe}", file=sys.stderr)
        return EXIT_FAIL
    for F in ledger.F:
        if not probe(F).surjective:
            print(f"stale ledger: {fmt_set(F)} is not surjective for this matrix", file=sys.stderr)
            return EXIT_FAIL
    for S in ledger.I:
        if probe(S).surjective:
            print(f"stale ledger: {fmt_set(S)} is surjective for this matrix", file=sys.stderr)
            return EXIT_FAIL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hoffman", description="Hoffman constants with surjectivity certificates.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    norms = ["l1", "l2", "linf"]

    c = sub.add_parser("compute", help="exact constant and certificate ledger as JSON")
    c.add_argument("--variant", choices=[v.value for v in Variant], default="ineq")
    c.add_argument("--A")
    c.add_argument("--C")
    c.add_argument("--L", help='1-based rows charged in the residual, e.g. "1,3"')
    c.add_argument("--norm-dom", choices=norms)
    c.add_argument("--norm-cod", choices=norms)
    c.add_argument("--algo", type=int, choices=[1, 2], default=1)
    c.add_argument("--witness", action="store_true", help="attach a (b, u) pair attaining the bound")
    c.set_defaults(func=cmd_compute)

    e = sub.add_parser("estimate-l2", help="Euclidean bracket [sigma, (4p+9) sigma] for 1/H_J(A;C)")
    e.add_argument("--A")
    e.add_argument("--C")
    e.add_argument("--J", default="", help='1-based rows of C, e.g. "1,2"')
    e.set_defaults(func=cmd_estimate_l2)

    b = sub.add_parser("bench", help="random Gaussian trials, one CSV row each")
    b.add_argument("--m", type=int, required=True)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--trials", type=int, default=100)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--algo", type=int, choices=[1, 2], default=1)
    b.add_argument("--verify", action="store_true", help=f"exhaustive cover check (m <= {BENCH_VERIFY_MAX_M})")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--timing", action="store_true", help="fill wallclock_ms (breaks byte-reproducibility)")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bench)

    v = sub.add_parser("verify", help="check a ledger's cover and, given the matrix, its certificates")
    v.add_argument("--ledger", required=True)
    v.add_argument("--A")
    v.add_argument("--C")
    v.add_argument("--variant", choices=[x.value for x in Variant], default="ineq",
                   help="variant of a bare ledger (reports carry their own)")
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UnsupportedNormError as exc:
        print(f"unsupported norms: {exc}", file=sys.stderr)
        return EXIT_NORM
    except (MatrixIOError, OSError, InputError, IndexError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_IO
    except NewtonConvergenceError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
