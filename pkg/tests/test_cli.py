import json
import math
import subprocess
import sys

import jsonschema
import pytest

from bridgeman.cli import main, parse_grid, parse_real, CliError
from bridgeman.orthospec import SPECTRUM_JSON_SCHEMA


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_dilog_rows(capsys):
    code, out, _ = run(capsys, "dilog", "1.0")
    x, li, lv, d = out.strip().split(",")
    assert code == 0 and d == ""
    assert abs(float(li) - math.pi**2 / 6) < 1e-11 and abs(float(lv) - math.pi**2 / 6) < 1e-11
    code, out, _ = run(capsys, "dilog", "0.0")
    assert out == "0,0,0,\n"
    code, out, _ = run(capsys, "dilog", "0.5")
    assert abs(float(out.split(",")[2]) - math.pi**2 / 12) < 1e-10
    code, out, err = run(capsys, "dilog", "1.5")
    assert code == 2 and out == "" and err.count("\n") == 1


def test_parse_helpers():
    assert parse_real("2*pi/5") == 2 * math.pi / 5
    assert parse_real("-(1+2)") == -3.0
    assert parse_grid("0.3:2.8:9")[-1] == 2.8 and len(parse_grid("0.3:2.8:9")) == 9
    assert parse_grid("pi/2, 1") == [math.pi / 2, 1.0]
    for bad in ("__import__('os')", "pi**2", "1/0", "x"):
        with pytest.raises(CliError):
            parse_real(bad)


def test_verify_volume(capsys):
    code, out, _ = run(capsys, "verify-volume", "--alpha-grid", "pi/2", "--tol", "1e-4", "--samples", "20000")
    lines = out.splitlines()
    assert code == 0
    assert lines[0].split(",")[-1] == "residual"
    assert float(lines[1].split(",")[-1]) < 1e-6
    assert lines[-1].startswith("# max_abs_residual,")


def test_verify_volume_grid(capsys):
    code, out, _ = run(capsys, "verify-volume", "--alpha-grid", "0.3:2.8:9", "--tol", "1e-4", "--samples", "10000")
    rows = [l.split(",") for l in out.splitlines()[1:-1]]
    assert code == 0 and len(rows) == 9
    assert all(float(r[-1]) < 1e-4 for r in rows)


@pytest.mark.parametrize(
    "argv",
    [
        ("verify-volume", "--alpha-grid", "3.5"),
        ("verify-volume", "--alpha-grid", "0"),
        ("verify-volume", "--samples", "10"),
        ("verify-volume", "--tol", "-1"),
        ("spectrum", "2", "2", "0"),
        ("spectrum", "2", "2", "2", "--max-word-length", "40"),
        ("spectrum", "2", "2", "2", "--threads", "0"),
        ("verify-bridgeman", "2", "2", "2", "--bounds", "4,x"),
    ],
)
def test_validation_exit_code(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 2 and out == ""


def test_quadrature_failure_exit_code(capsys, monkeypatch):
    from bridgeman import quadvol
    from bridgeman.errors import ToleranceError

    def boom(*a, **k):
        raise ToleranceError("forced")

    monkeypatch.setattr(quadvol, "volume_report", boom)
    code, _, _ = run(capsys, "verify-volume", "--samples", "10000")
    assert code == 3


def test_spectrum_outputs(capsys, tmp_path):
    code, out, err = run(capsys, "spectrum", "2", "2", "2", "--max-word-length", "0")
    assert code == 0 and len(out.splitlines()) == 4
    assert "records=3" in err
    first = out.splitlines()[1].split(",")
    assert abs(float(first[4]) - 1.70491283236) < 1e-8
    path = tmp_path / "s.json"
    code, _, _ = run(capsys, "spectrum", "2", "2", "2", "--max-word-length", "8", "--format", "json", "--out", str(path))
    doc = json.loads(path.read_text())
    jsonschema.validate(doc, SPECTRUM_JSON_SCHEMA)
    assert abs(doc["records"][0]["length"] - 1.7049128323580137) < 1e-8
    assert json.dumps(doc, separators=(",", ":")) + "\n" == path.read_text()


def test_io_failure(capsys, tmp_path):
    code, _, err = run(capsys, "spectrum", "2", "2", "2", "--out", str(tmp_path / "missing" / "x.csv"))
    assert code == 4 and "cannot write" in err


def test_convergence_tables(capsys):
    code, out, _ = run(capsys, "verify-bridgeman", "2", "2", "2", "--bounds", "4,8")
    rows = [l.split(",") for l in out.splitlines()]
    assert code == 0 and rows[0] == ["bound", "count", "partial_sum", "rhs", "residual"]
    assert float(rows[2][2]) > float(rows[1][2])
    assert rows[1][3] == "4.93480220054"
    code, out, _ = run(capsys, "verify-basmajian", "1", "2", "3", "--bounds", "2,4,6")
    rows = [l.split(",") for l in out.splitlines()[1:]]
    assert code == 0 and all(r[3] == "6" for r in rows)
    res = [float(r[4]) for r in rows]
    assert res[0] > res[1] > res[2] > 0
    code, out, _ = run(capsys, "verify-basmajian", "3", "1", "2", "--bounds", "2")
    assert out.splitlines()[1].split(",")[3] == "6"


def test_monotonicity_violation_exit_code(capsys):
    code, _, err = run(capsys, "verify-bridgeman", "2", "2", "2", "--bounds", "4,4")
    assert code == 5 and "not strictly increasing" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["spectrum", "1", "2", "3", "--max-word-length", "7", "--format", "json"],
        ["spectrum", "1", "2", "3", "--max-word-length", "7"],
        ["verify-volume", "--alpha-grid", "1.1,2.2", "--samples", "150000", "--seed", "7"],
        ["verify-bridgeman", "2", "2", "2", "--bounds", "2,6"],
    ],
)
def test_byte_reproducible_across_runs_and_threads(capsys, tmp_path, argv):
    blobs = []
    for k, threads in enumerate(("1", "1", "3")):
        path = tmp_path / f"out{k}"
        assert main(argv + ["--threads", threads, "--out", str(path)]) == 0
        blobs.append(path.read_bytes())
    capsys.readouterr()
    assert blobs[0] == blobs[1] == blobs[2]


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "bridgeman", "dilog", "0.5"], capture_output=True, text=True, check=True)
    assert r.stdout.startswith("0.5,")
