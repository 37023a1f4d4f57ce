import json
import subprocess
import sys

import pytest

from pdcc.cli import run
from pdcc.diffop import OpMatrix
from pdcc.systems import load_fixture


def pdcc(*args):
    return subprocess.run(
        [sys.executable, "-m", "pdcc.cli", *args], capture_output=True, text=True
    )


def test_resolve_conformal_minkowski():
    p = pdcc("resolve", "--system", "conformal-killing", "--dim", "4", "--metric", "minkowski", "--minimize")
    assert p.returncode == 0
    out = json.loads(p.stdout)
    assert out["betti"] == [4, 9, 10, 9, 4]
    assert out["orders"] == [1, 2, 2, 1]


def test_cohomology_killing_3():
    p = pdcc("cohomology", "--system", "killing", "--dim", "3", "--s", "2", "--r", "0")
    assert p.returncode == 0
    assert json.loads(p.stdout)["dim_H"] == 6


def test_output_is_byte_identical():
    args = ("janet", "--system", "mixed_pair", "--seed", "4")
    assert pdcc(*args).stdout == pdcc(*args).stdout


def test_janet_text_board():
    p = pdcc("janet", "--system", "mixed_pair_completed", "--format", "text")
    assert p.stdout.splitlines()[:4] == ["1 2 3", "1 2 .", "1 2 .", "1 . ."]


def test_matrix_file_round_trip(tmp_path):
    out = tmp_path / "r3.json"
    assert run(["system", "--system", "R3", "--out", str(out)]) == 0
    assert out.read_text().strip() == load_fixture("R3").to_json()
    cc = tmp_path / "cc.json"
    assert run(["cc", "--in", str(out), "--out", str(cc)]) == 0
    assert OpMatrix.from_json(cc.read_text()).rows == 5


def test_malformed_file_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 2, "rows": 1,\n "cols": 1, "entries": [[[[[1, 0], [1, 0]]]]]}')
    assert run(["resolve", "--in", str(bad)]) == 2
    assert "$.entries[0][0][0]" in capsys.readouterr().err
    bad.write_text('{"n": 2,\n  "rows" 1}')
    assert run(["cc", "--in", str(bad)]) == 2
    assert "line 2 column 10" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["resolve"],
        ["frobnicate"],
        ["cohomology", "--system", "killing", "--dim", "3"],
        ["system", "--system", "killing", "--in", "x.json"],
        ["system", "--in", "/nonexistent/file.json"],
        ["system", "--system", "killing", "--metric", "lorentz", "--dim", "3"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    assert run(argv) == 2


def test_verify_failure_exit_code(capsys):
    class Failing:
        def post(self, path, body):
            return 200, {"suite": "x", "passed": False, "claims": [
                {"claim": "c", "source": "s", "passed": False, "detail": "", "seconds": 0.0}]}

    assert run(["verify", "--suite", "formulas"], transport=Failing()) == 1
    assert "FAIL" in capsys.readouterr().out


def test_verify_formulas_suite(tmp_path):
    out = tmp_path / "v.json"
    p = pdcc("verify", "--suite", "formulas", "--out", str(out))
    assert p.returncode == 0
    assert "7/7 claims passed" in p.stdout
    data = json.loads(out.read_text())
    assert data["passed"] and all("seconds" not in c for c in data["claims"])


def test_duality_text():
    p = pdcc("duality", "--system", "cauchy_2", "--format", "text")
    assert p.stdout.startswith("exact = True")
