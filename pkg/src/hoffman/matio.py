"""Matrix files: CSV (one matrix row per line) and MatrixMarket, chosen by extension."""
from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np
import scipy.io

MM_SUFFIXES = (".mtx", ".mm")


class MatrixIOError(OSError):
    pass


def _read_csv(path: Path) -> np.ndarray:
    text = path.read_text()
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    rows = [r for r in rows if not r[0].lstrip().startswith("#")]
    if not rows:
        return np.zeros((0, 0))
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise MatrixIOError(f"{path}: ragged rows")
    try:
        M = np.array([[float(c) for c in r] for r in rows])
    except ValueError as exc:
        raise MatrixIOError(f"{path}: {exc}") from None
    if not np.all(np.isfinite(M)):
        raise MatrixIOError(f"{path}: non-finite entry")
    return M


def read_matrix(path) -> np.ndarray:
    path = Path(path)
    try:
        if path.suffix.lower() in MM_SUFFIXES:
            M = scipy.io.mmread(str(path))
            M = np.asarray(M.todense() if hasattr(M, "todense") else M, dtype=float)
            return M.reshape(M.shape[0], -1) if M.ndim == 2 else M.reshape(-1, 1)
        return _read_csv(path)
    except MatrixIOError:
        raise
    except (OSError, ValueError) as exc:
        raise MatrixIOError(f"cannot read {path}: {exc}") from exc


def write_matrix(path, M) -> None:
    path = Path(path)
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if path.suffix.lower() in MM_SUFFIXES:
        scipy.io.mmwrite(str(path), M)
        return
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        for row in M:
            w.writerow([repr(float(x)) for x in row])
