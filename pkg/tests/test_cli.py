import json
import subprocess
import sys

import pytest

from hyperflux.cli import main
from hyperflux.transforms import CSV_HEADER


def _write(tmp_path, data, name="job.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def test_run_pair_job(tmp_path, capsys):
    job = _write(tmp_path, {"objects": {"b": "embed(1, 0, 1)"}, "command": "pair"})
    assert main(["run", job]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["value"][0] == pytest.approx(0.746824132812427, abs=1e-10)


def test_run_writes_json_output(tmp_path):
    res = tmp_path / "res.json"
    job = _write(tmp_path, {"objects": {"d": "dirac(0)"}, "command": "decompose", "params": {"j": 0},
                            "output": {"json": str(res)}})
    assert main(["run", job]) == 0
    assert json.loads(res.read_text())["exit_code"] == 0


def test_sample_to_stdout(capsys):
    code = main(["sample", "--def", "a=dirac(0.5)", "--object", "a", "--grid", "re:0:2:3"])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == CSV_HEADER and len(lines) == 4


def test_sample_inline_expression_to_file(tmp_path):
    out = tmp_path / "s.csv"
    code = main(["sample", "--object", "embed(t, 0, 1)", "--transform", "laplace", "--grid", "re:1:2:2,im:-1:1:3",
                 "--out", str(out)])
    assert code == 0
    assert len(out.read_text().splitlines()) == 7


def test_exit_codes(tmp_path, capsys):
    assert main([]) == 1
    bad = _write(tmp_path, {"objects": {"a": "dirac(0) + frob(1)"}, "command": "pair"})
    assert main(["run", bad]) == 1
    assert "unknown builtin 'frob'" in capsys.readouterr().err
    div = _write(tmp_path, {"objects": {"h": "heaviside(0)"}, "command": "laplace", "grid": {"points": [[-1, 0]]}})
    assert main(["run", div]) == 3
    err = capsys.readouterr().err
    assert "DivergenceError" in err and "[object h, command laplace]" in err
    num = _write(tmp_path, {"objects": {"c": "embed(1, 0, 1)"}, "command": "pair",
                            "params": {"clearance": 0.001}, "quad": {"max_depth": 1}})
    assert main(["run", num]) == 4
    assert main(["sample", "--object", "dirac(", "--grid", "re:0:1:2"]) == 1
    assert main(["run", str(tmp_path / "missing.json")]) == 1


def test_verify_suite_report(tmp_path, capsys):
    rep = tmp_path / "rep.json"
    assert main(["verify", "--suite", "shift", "--json", str(rep)]) == 0
    assert "suite shift: PASS" in capsys.readouterr().out
    data = json.loads(rep.read_text())
    assert data["passed"] and all(c["passed"] for c in data["checks"])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hyperflux", "sample", "--object", "dirac(0)", "--grid",
                           "re:1:1:1"], capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    row = proc.stdout.splitlines()[1].split(",")
    assert float(row[4]) == pytest.approx(1.0)
