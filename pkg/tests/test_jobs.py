import io
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperflux.jobs import (EXIT_DIVERGENCE, EXIT_NUMERIC, EXIT_OK, JobError, JobSpec, dump_job,
                            grid_points, parse_grid, parse_job, run_job)
from hyperflux.transforms import CSV_HEADER

names = st.from_regex(r"[a-z][a-z0-9_]{0,6}", fullmatch=True).filter(
    lambda s: s not in {"t", "w", "e", "pi", "exp", "sin", "cos", "log", "sqrt", "dirac", "embed", "heaviside",
                        "shift", "dconv", "mul"})
locs = st.floats(-3, 3, allow_nan=False).map(lambda x: round(x, 3))
atom = st.one_of(locs.map(lambda a: f"dirac({a})"),
                 st.tuples(locs, st.floats(0.1, 2).map(lambda x: round(x, 3))).map(
                     lambda p: f"embed(t^2 + 1, {p[0]}, {p[0] + p[1]})"),
                 locs.map(lambda a: f"heaviside({a})"))
axis = st.tuples(st.floats(-5, 5).map(lambda x: round(x, 2)), st.floats(-5, 5).map(lambda x: round(x, 2)),
                 st.integers(1, 5)).map(list)


@st.composite
def job_specs(draw):
    objects = draw(st.dictionaries(names, atom, min_size=1, max_size=3))
    command = draw(st.sampled_from(["fourier", "laplace", "pair", "sample", "decompose"]))
    target = draw(st.sampled_from(sorted(objects)))
    data = {"objects": objects, "command": command, "target": target}
    if command in ("fourier", "laplace", "sample"):
        data["grid"] = {"re": draw(axis), "im": draw(axis)}
    if command == "decompose":
        data["params"] = {"j": draw(locs)}
    if draw(st.booleans()):
        data["quad"] = {"abs_tol": 1e-8}
    return parse_job(json.dumps(data))


@given(job_specs())
@settings(max_examples=60, deadline=None)
def test_job_round_trip(spec):
    again = parse_job(dump_job(spec))
    assert again == spec
    assert dump_job(again) == dump_job(spec)


def test_grid_parsing():
    g = parse_grid("re:-1:1:3,im:0:2:2")
    assert g == {"re": [-1.0, 1.0, 3], "im": [0.0, 2.0, 2]}
    z = grid_points(g)
    assert z.size == 6 and z[1] == -1 + 2j
    with pytest.raises(ValueError):
        parse_grid("re:1:2")
    assert grid_points(parse_grid({"points": [[1, 2]]}))[0] == 1 + 2j


def _job(**kw):
    return json.dumps({"objects": {"d": "dirac(0)"}, "command": "fourier", "grid": "re:0:1:2", **kw})


def test_single_object_becomes_target():
    assert parse_job(_job()).target == "d"


@pytest.mark.parametrize("text, where", [
    ("{not json", "line 1"),
    (json.dumps({"objects": {}, "command": "fourier", "grid": "re:0:1:2"}), "no target object"),
    (json.dumps({"objects": {"a": "dirac(0)"}, "command": "explode"}), "unknown command"),
    (json.dumps({"objects": {"a": "shift(b, 1)"}, "command": "pair"}), "undefined object 'b'"),
    (json.dumps({"objects": {"a": "dirac(0) +"}, "command": "pair"}), "objects.a"),
    (json.dumps({"objects": {"a": "dirac(0)"}, "command": "fourier"}), "grid"),
    (json.dumps({"objects": {"a": "heaviside(0)"}, "command": "fourier", "grid": "re:0:1:2",
                 "params": {"kind": "compact"}}), "compact Fourier"),
])
def test_job_diagnostics(text, where):
    with pytest.raises(JobError, match=where):
        parse_job(text)


def test_sample_csv_is_deterministic():
    spec = parse_job(_job(objects={"m": "dirac(0.5, [[1, 2], [3, 4]])"}))
    outs = []
    for _ in range(2):
        buf = io.StringIO()
        code, res = run_job(spec, buf)
        assert code == EXIT_OK and res["n_points"] == 2
        outs.append(buf.getvalue())
    assert outs[0] == outs[1]
    lines = outs[0].splitlines()
    assert lines[0] == CSV_HEADER and len(lines) == 1 + 2 * 4
    assert float(lines[1].split(",")[4]) == pytest.approx(1.0)


def test_pair_job():
    spec = parse_job(json.dumps({"objects": {"b": "embed(1, 0, 1)"}, "command": "pair",
                                 "params": {"test": "exp(-w^2)"}}))
    code, res = run_job(spec)
    assert code == EXIT_OK
    assert res["value"][0] == pytest.approx(0.746824132812427, abs=1e-10)
    assert res["err_abs"] < 1e-8


def test_divergence_exit_code_names_object_and_point():
    spec = parse_job(json.dumps({"objects": {"h": "heaviside(0)"}, "command": "laplace",
                                 "grid": {"points": [[-1, 0]]}}))
    code, res = run_job(spec)
    assert code == EXIT_DIVERGENCE
    assert "[object h, command laplace]" in res["error"]


def test_numerical_error_exit_code():
    spec = parse_job(json.dumps({"objects": {"c": "embed(1, 0, 1)"}, "command": "pair",
                                 "params": {"clearance": 0.001}, "quad": {"max_depth": 1}}))
    code, res = run_job(spec)
    assert code == EXIT_NUMERIC
    assert "AccuracyError" in res["error"] and "[object c, command pair]" in res["error"]


def test_decompose_and_convolve_jobs(tmp_path):
    spec = parse_job(json.dumps({"objects": {"h": "dirac(0) + embed(1, -1, 1)"}, "command": "decompose",
                                 "params": {"j": 0}}))
    code, res = run_job(spec)
    assert code == EXIT_OK and "left" in res and "right" in res
    out = tmp_path / "c.csv"
    spec = parse_job(json.dumps({"objects": {"a": "dirac(0.3)", "b": "dirac(-0.1)"}, "command": "convolve",
                                 "target": "a", "params": {"with": "b"}, "grid": "re:1:1:1",
                                 "output": {"csv": str(out)}}))
    code, res = run_job(spec)
    assert code == EXIT_OK and res["support"]["kind"] in ("point", "compact")
    row = out.read_text().splitlines()[1].split(",")
    assert complex(float(row[4]), float(row[5])) == pytest.approx(np.exp(-0.2j))


def test_job_spec_serialization_omits_empty_fields():
    spec = JobSpec({"a": "dirac(0)"}, "pair", "a")
    assert set(spec.to_json()) == {"objects", "command", "target"}
