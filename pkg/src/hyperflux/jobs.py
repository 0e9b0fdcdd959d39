"""JSON job files: parsing, validation, canonical printing and execution."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import errors as err
from .compare import consistency_chain, consistency_I0
from .expr import ExprError, build_hyperfunction, compile_scalar, normalize, parse_expr, references
from .hyperfn import TestFunction, pair
from .opcalc import convolve_contour, convolve_transform
from .quadrature import QuadConfig
from .suites import run_suite
from .transforms import decompose_at, fourier_compact, fourier_halfline, laplace, samples_to_csv

COMMANDS = ("fourier", "laplace", "pair", "convolve", "decompose", "verify", "compare", "sample")
_NEEDS_TARGET = {"fourier", "laplace", "pair", "convolve", "decompose", "sample"}
_NEEDS_GRID = {"fourier", "laplace", "sample"}

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_DIVERGENCE, EXIT_NUMERIC = 0, 1, 2, 3, 4


class JobError(ValueError):
    """Invalid job; ``diagnostics`` lists ``(location, message)`` pairs."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(f"{loc}: {msg}" if loc else msg for loc, msg in self.diagnostics))


# ---------------------------------------------------------------- grids

def parse_grid(spec):
    """Normalize a grid spec to ``{"re": [a, b, n], "im": [a, b, n]}`` or ``{"points": [[x, y], ...]}``.

    Strings use the form ``"re:a:b:n,im:a:b:n"``; a missing axis is the
    single value 0.
    """
    if isinstance(spec, str):
        out = {"re": [0.0, 0.0, 1], "im": [0.0, 0.0, 1]}
        for part in spec.split(","):
            bits = part.strip().split(":")
            if len(bits) != 4 or bits[0] not in ("re", "im"):
                raise ValueError(f"bad grid component {part!r}; expected re:a:b:n or im:a:b:n")
            out[bits[0]] = [float(bits[1]), float(bits[2]), int(bits[3])]
        spec = out
    if not isinstance(spec, dict):
        raise ValueError("grid must be an object or a string")
    if "points" in spec:
        pts = [[float(p[0]), float(p[1])] for p in spec["points"]]
        if not pts:
            raise ValueError("grid is empty")
        return {"points": pts}
    out = {}
    for ax in ("re", "im"):
        v = spec.get(ax, [0.0, 0.0, 1])
        if len(v) != 3:
            raise ValueError(f"grid axis {ax} needs [a, b, n]")
        a, b, n = float(v[0]), float(v[1]), int(v[2])
        if n < 1 or not (math.isfinite(a) and math.isfinite(b)):
            raise ValueError(f"grid axis {ax} is empty or not finite")
        out[ax] = [a, b, n]
    return out


def grid_points(grid) -> np.ndarray:
    if "points" in grid:
        return np.array([complex(x, y) for x, y in grid["points"]])
    ra, rb, rn = grid["re"]
    ia, ib, inn = grid["im"]
    x = np.linspace(ra, rb, rn)
    y = np.linspace(ia, ib, inn)
    return (x[:, None] + 1j * y[None, :]).ravel()


# ---------------------------------------------------------------- job spec

@dataclass
class JobSpec:
    objects: dict
    command: str
    target: str | None = None
    grid: dict | None = None
    quad: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def quad_config(self) -> QuadConfig:
        return QuadConfig.from_env(**self.quad)

    def to_json(self) -> dict:
        out = {"objects": dict(self.objects), "command": self.command}
        for key in ("target", "grid"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        for key in ("quad", "output", "params"):
            if getattr(self, key):
                out[key] = getattr(self, key)
        return out


def dump_job(spec: JobSpec) -> str:
    """Canonical JSON text of a job."""
    return json.dumps(spec.to_json(), indent=2, sort_keys=True)


def parse_job(text: str) -> JobSpec:
    """Parse and validate a job file.

    Raises
    ------
    JobError
        With positioned diagnostics (JSON line/column, object name and
        expression column).
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise JobError([(f"line {e.lineno} column {e.colno}", f"invalid JSON: {e.msg}")]) from None
    if not isinstance(data, dict):
        raise JobError([("", "job must be a JSON object")])
    diags = []
    unknown = set(data) - {"objects", "command", "target", "grid", "quad", "output", "params"}
    for k in sorted(unknown):
        diags.append((k, "unknown field"))
    command = data.get("command")
    if command not in COMMANDS:
        diags.append(("command", f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}"))
    objects = data.get("objects", {})
    if not isinstance(objects, dict):
        diags.append(("objects", "must map names to expressions"))
        objects = {}
    norm = {}
    for name, src in objects.items():
        if not isinstance(src, str):
            diags.append((f"objects.{name}", "definition must be a string"))
            continue
        try:
            norm[name] = normalize(src)
        except ExprError as e:
            diags.append((f"objects.{name}", str(e)))
            continue
        for ref in sorted(references(src) - set(objects)):
            diags.append((f"objects.{name}", f"reference to undefined object {ref!r}"))
    target = data.get("target")
    if command in _NEEDS_TARGET:
        if target is None:
            if len(norm) == 1:
                target = next(iter(norm))
            elif not norm:
                diags.append(("target", "no target object"))
            else:
                diags.append(("target", "several objects defined; name the target"))
        elif target not in objects:
            diags.append(("target", f"target {target!r} is not defined"))
    grid = data.get("grid")
    if grid is not None:
        try:
            grid = parse_grid(grid)
        except (ValueError, TypeError, IndexError) as e:
            diags.append(("grid", str(e)))
            grid = None
    elif command in _NEEDS_GRID:
        diags.append(("grid", "a sampling grid is required"))
    quad = data.get("quad", {}) or {}
    if not isinstance(quad, dict):
        diags.append(("quad", "must be an object"))
        quad = {}
    else:
        try:
            quad = QuadConfig(**quad).to_json()
        except (TypeError, ValueError) as e:
            diags.append(("quad", str(e)))
    output = data.get("output", {}) or {}
    if not isinstance(output, dict) or set(output) - {"csv", "json"}:
        diags.append(("output", "expected an object with optional keys csv, json"))
        output = {}
    params = data.get("params", {}) or {}
    if not isinstance(params, dict):
        diags.append(("params", "must be an object"))
        params = {}
    if command == "convolve" and params.get("with") not in objects:
        diags.append(("params.with", "convolve needs a second defined object in params.with"))
    if command == "decompose" and not isinstance(params.get("j"), (int, float)):
        diags.append(("params.j", "decompose needs a numeric cut point j"))
    if command == "pair":
        try:
            compile_scalar(parse_expr(str(params.get("test", "exp(-w^2)"))), ("w",))
        except ExprError as e:
            diags.append(("params.test", str(e)))
    if command == "verify" and params.get("suite", "all") not in ("all", "shift", "conv", "germ", "compare"):
        diags.append(("params.suite", f"unknown suite {params.get('suite')!r}"))
    if diags:
        raise JobError(diags)
    spec = JobSpec(norm, command, target, grid, quad, dict(output), dict(params))
    _check_support_kinds(spec)
    return spec


def build_objects(spec: JobSpec) -> dict:
    """Build all named hyperfunctions, resolving references in dependency order."""
    built, pending = {}, dict(spec.objects)
    while pending:
        progress = False
        for name, src in list(pending.items()):
            if references(src) <= set(built):
                try:
                    built[name] = build_hyperfunction(src, built, name)
                except ExprError as e:
                    raise JobError([(f"objects.{name}", str(e))]) from None
                except err.HyperfluxError as e:
                    raise JobError([(f"objects.{name}", f"{type(e).__name__}: {e}")]) from None
                del pending[name]
                progress = True
        if not progress:
            raise JobError([("objects", f"circular references among {', '.join(sorted(pending))}")])
    return built


def _check_support_kinds(spec: JobSpec):
    if spec.command not in ("fourier", "convolve") or spec.params.get("kind") != "compact":
        return
    objs = build_objects(spec)
    h = objs[spec.target]
    if not h.support.closure().is_compact:
        raise JobError([("target", f"compact Fourier transform requested for {spec.target!r} with support {h.support}")])


# ---------------------------------------------------------------- execution

def _transform(h, kind, side, cfg, clearance=None):
    K = h.support.closure()
    if kind == "fourier":
        if K.is_compact or K.kind == "empty":
            return fourier_compact(h, clearance, cfg)
        return fourier_halfline(h, side or ("right" if K.has_plus_inf else "left"), clearance, cfg)
    return laplace(h, None, clearance, cfg)


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def sample_transform(h, kind, zeta, cfg, side=None, clearance=None):
    tf = _transform(h, kind, side, cfg, clearance)
    vals, errs = tf.evaluate(zeta)
    return samples_to_csv(zeta, vals, errs, tf.space)


def _cj(v):
    v = complex(v)
    return [v.real, v.imag]


def _value_json(v):
    v = np.asarray(v)
    if v.ndim == 0:
        return _cj(v)
    return [_value_json(x) for x in v]


def run_job(spec: JobSpec, stdout=None):
    """Execute a job; returns ``(exit_code, result_dict)``.

    Library errors are reported with the object and command that raised them.
    """
    cfg = spec.quad_config()
    result = {"command": spec.command, "target": spec.target}
    try:
        objs = build_objects(spec)
        h = objs.get(spec.target) if spec.target else None
        code = EXIT_OK
        p = spec.params
        if spec.command in ("fourier", "laplace", "sample"):
            kind = p.get("transform", "fourier") if spec.command == "sample" else spec.command
            zeta = grid_points(spec.grid)
            csv = sample_transform(h, kind, zeta, cfg, p.get("side"), p.get("clearance"))
            result["n_points"] = int(zeta.size)
            if spec.output.get("csv"):
                _write(spec.output["csv"], csv)
            elif stdout is not None:
                stdout.write(csv)
        elif spec.command == "pair":
            f = compile_scalar(str(p.get("test", "exp(-w^2)")), ("w",))
            res = pair(h, TestFunction(f, int(p.get("n", 1))), cfg=cfg, full_output=True,
                       clearance=p.get("clearance"))
            result.update(value=_value_json(res.value), err_abs=res.error)
        elif spec.command == "convolve":
            other = objs[p["with"]]
            method = p.get("method", "contour")
            conv = convolve_contour(h, other, cfg) if method == "contour" else convolve_transform(h, other, cfg)
            result["support"] = conv.support.to_json()
            if spec.grid is not None:
                zeta = grid_points(spec.grid)
                csv = sample_transform(conv, "fourier", zeta, cfg)
                if spec.output.get("csv"):
                    _write(spec.output["csv"], csv)
                elif stdout is not None:
                    stdout.write(csv)
        elif spec.command == "decompose":
            left, right = decompose_at(h, float(p["j"]))
            result.update(left=left.describe(), right=right.describe())
        elif spec.command == "verify":
            rep = run_suite(p.get("suite", "all"), cfg)
            result["report"] = rep
            code = EXIT_OK if rep["passed"] else EXIT_VERIFY
        elif spec.command == "compare":
            if "density" in p:
                f = compile_scalar(str(p["density"]), ("t",))
                rep = consistency_chain(f, float(p.get("T", 1.0)), cfg=cfg)
            else:
                if h is None:
                    raise JobError([("target", "compare needs a target object or params.density")])
                rep = consistency_I0(h, cfg=cfg)
            result["report"] = rep
            code = EXIT_OK if rep["passed"] else EXIT_VERIFY
    except err.DomainError as e:
        loc = getattr(e, "location", None)
        result["error"] = _context(spec, e, loc, "zeta")
        code = EXIT_DIVERGENCE
    except JobError as e:
        result["error"] = str(e)
        code = EXIT_USAGE
    except err.HyperfluxError as e:
        loc = getattr(e, "node", None) or getattr(e, "location", None)
        result["error"] = _context(spec, e, loc, "z")
        code = EXIT_NUMERIC
    result["exit_code"] = code
    if spec.output.get("json"):
        _write(spec.output["json"], json.dumps(result, indent=2, sort_keys=True, default=json_default) + "\n")
    return code, result


def _context(spec, e, loc, var):
    where = f" at {var}={complex(loc)}" if loc is not None and f"{var}=" not in str(e) else ""
    return f"[object {spec.target or '-'}, command {spec.command}] {type(e).__name__}: {e}{where}"


def json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, complex):
        return [o.real, o.imag]
    raise TypeError(f"not serializable: {type(o).__name__}")
