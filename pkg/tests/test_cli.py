import json
import subprocess
import sys

import numpy as np
import pytest

from hoffman.cli import main, parse_index_list
from hoffman.engine import HoffmanReport
from hoffman.matio import write_matrix

from conftest import THREE_ROWS


@pytest.fixture
def mats(tmp_path):
    paths = {}
    for name, M in {"three_rows.csv": THREE_ROWS, "identity2.csv": np.eye(2), "pm1.csv": [[1.0], [-1.0]],
                    "cm1.csv": [[-1.0]], "one.mtx": [[1.0]], "pm1.mtx": [[1.0], [-1.0]]}.items():
        write_matrix(tmp_path / name, M)
        paths[name] = str(tmp_path / name)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_parse_index_list():
    assert parse_index_list("1,3, 5") == frozenset({0, 2, 4})
    assert parse_index_list("") == frozenset()
    with pytest.raises(ValueError):
        parse_index_list("0")


def test_compute_worked(capsys, mats):
    code, out = run(capsys, "compute", "--variant", "ineq", "--A", mats["three_rows.csv"],
                    "--norm-dom", "linf", "--norm-cod", "linf", "--witness")
    assert code == 0
    d = json.loads(out)
    assert d["H"] == pytest.approx(2.0) and d["schema"] == 1
    assert d["witness"]["ratio"] == pytest.approx(2.0)
    assert HoffmanReport.from_dict(d).to_dict() == d


def test_compute_identity_and_restricted(capsys, mats):
    assert json.loads(run(capsys, "compute", "--A", mats["identity2.csv"])[1])["H"] == pytest.approx(1.0)
    code, out = run(capsys, "compute", "--variant", "restricted", "--A", mats["pm1.csv"], "--L", "1")
    assert code == 0 and json.loads(out)["H"] == pytest.approx(1.0)


def test_compute_other_variants(capsys, mats):
    code, out = run(capsys, "compute", "--variant", "mixed", "--C", mats["pm1.csv"], "--algo", "2")
    assert code == 0 and json.loads(out)["ledger"]["F"] == [[1], [2]]
    code, out = run(capsys, "compute", "--variant", "facial", "--A", mats["identity2.csv"])
    assert code == 0 and json.loads(out)["extra"]["inverse_H"] == pytest.approx(1.0)


def test_compute_errors(capsys, mats, tmp_path):
    assert run(capsys, "compute", "--A", mats["three_rows.csv"], "--norm-dom", "l2")[0] == 2
    assert run(capsys, "compute", "--A", str(tmp_path / "missing.csv"))[0] == 3
    (tmp_path / "bad.csv").write_text("1,2\n3\n")
    assert run(capsys, "compute", "--A", str(tmp_path / "bad.csv"))[0] == 3
    assert run(capsys, "compute", "--variant", "mixed", "--A", mats["identity2.csv"], "--C", mats["pm1.csv"])[0] == 3
    assert run(capsys, "compute", "--variant", "restricted", "--A", mats["pm1.csv"], "--L", "7")[0] == 3


def test_estimate_l2(capsys, mats):
    code, out = run(capsys, "estimate-l2", "--C", mats["cm1.csv"], "--J", "1")
    d = json.loads(out)
    assert code == 0 and d["factor"] == 13
    assert d["sigma"] == pytest.approx(0.70711, abs=1e-5) and d["upper"] == pytest.approx(9.19239, abs=1e-5)
    code, out = run(capsys, "estimate-l2", "--A", mats["one.mtx"])
    d = json.loads(out)
    assert code == 0 and d["lower"] <= 1.0 <= d["upper"]
    code, out = run(capsys, "estimate-l2", "--C", mats["pm1.mtx"], "--J", "1,2")
    assert code == 4 and json.loads(out)["certificate"] == [1, 2]


def test_verify(capsys, mats, tmp_path):
    _, out = run(capsys, "compute", "--A", mats["three_rows.csv"])
    led = tmp_path / "rep.json"
    led.write_text(out)
    assert run(capsys, "verify", "--ledger", str(led), "--A", mats["three_rows.csv"])[0] == 0
    d = json.loads(out)
    d["ledger"]["F"].pop()
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps(d))
    assert run(capsys, "verify", "--ledger", str(broken))[0] == 1
    empty = tmp_path / "empty.json"
    empty.write_text(json.dumps({"m": 0, "F": [], "I": []}))
    assert run(capsys, "verify", "--ledger", str(empty))[0] == 0
    # stale: right size, wrong matrix (rows 1,2 opposite -> {1,2} is no longer surjective)
    other = tmp_path / "other.csv"
    write_matrix(other, [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0]])
    assert run(capsys, "verify", "--ledger", str(led), "--A", str(other))[0] == 1
    assert run(capsys, "verify", "--ledger", str(led), "--A", mats["identity2.csv"])[0] == 1


def test_bench_reproducible(capsys, tmp_path):
    a = run(capsys, "bench", "--m", "4", "--n", "2", "--trials", "10", "--seed", "7")[1]
    b = run(capsys, "bench", "--m", "4", "--n", "2", "--trials", "10", "--seed", "7", "--jobs", "2")[1]
    assert a == b
    rows = [r.split(",") for r in a.strip().splitlines()]
    assert rows[0] == ["m", "n", "trial", "|F|", "|I|", "H", "wallclock_ms", "surjective_flag"]
    assert len(rows) == 11
    for r in rows[1:]:
        if r[7] == "1":
            assert r[3] == "1" and r[4] == "0"
    c = run(capsys, "bench", "--m", "4", "--n", "2", "--trials", "10", "--seed", "8")[1]
    assert c != a


def test_bench_verify_and_timing(capsys):
    code, out = run(capsys, "bench", "--m", "6", "--n", "3", "--trials", "5", "--seed", "2", "--verify",
                    "--algo", "2", "--timing")
    assert code == 0
    assert all(float(r.split(",")[6]) >= 0 for r in out.strip().splitlines()[1:])
    assert run(capsys, "bench", "--m", "13", "--n", "3", "--trials", "1", "--verify")[0] == 3


def test_entry_point_runs(mats):
    res = subprocess.run([sys.executable, "-m", "hoffman.cli", "compute", "--A", mats["identity2.csv"]],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["H"] == pytest.approx(1.0)
