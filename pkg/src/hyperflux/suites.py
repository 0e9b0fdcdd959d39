"""Self-verification suites run by ``hyperflux verify``.

Each suite returns a JSON-ready dict ``{suite, passed, checks}`` where every
check records its measured deviation and tolerance.
"""

from __future__ import annotations

import numpy as np

from .compare import consistency_chain, consistency_I0
from .hyperfn import cauchy_embed, dirac, shift
from .opcalc import convolve_contour
from .quadrature import QuadConfig
from .transforms import (GermSpaceTag, constant_transform, fourier_compact, function_transform,
                         germ_equivalent_heuristic, laplace, range_membership)


def _check(name, dev, tol, **extra):
    dev = float(dev)
    return {"name": name, "max_dev": dev, "tol": float(tol), "passed": bool(dev <= tol), **extra}


def _one(t):
    return np.ones_like(np.asarray(t, dtype=float))


def random_corpus(rng, count=10):
    """Random Diracs and smooth embeddings used by the shift suite."""
    out = []
    for i in range(count):
        a = float(rng.uniform(-1, 1))
        if i % 2 == 0:
            out.append(dirac(a, complex(rng.normal(), rng.normal()), name=f"dirac{i}"))
        else:
            b = a + float(rng.uniform(0.2, 1.5))
            k, p = float(rng.uniform(0.5, 3)), float(rng.uniform(-1, 1))
            out.append(cauchy_embed(lambda t, k=k, p=p: np.cos(k * t + p) + t * t, a, b, name=f"embed{i}"))
    return out


def suite_shift(seed=0, cfg=None):
    rng = np.random.default_rng(seed)
    cfg = cfg or QuadConfig.from_env()
    zeta = rng.uniform(-8, 8, 50) + 1j * rng.uniform(-3, 3, 50)
    checks = []
    for h in random_corpus(rng):
        s = float(rng.uniform(-2, 2))
        hs = shift(h, s)
        F, Fs = fourier_compact(h, cfg=cfg), fourier_compact(hs, cfg=cfg)
        v, e = F.evaluate(zeta)
        vs, es = Fs.evaluate(zeta)
        m = np.exp(-1j * s * zeta)
        dev = np.max(np.abs(vs - m * v) - es - np.abs(m) * e)
        checks.append(_check(f"fourier shift {h.name} by {s:.3f}", max(dev, 0.0), 1e-6))
        L, Ls = laplace(h, cfg=cfg), laplace(hs, cfg=cfg)
        v, e = L.evaluate(zeta)
        vs, es = Ls.evaluate(zeta)
        m = np.exp(-s * zeta)
        dev = np.max(np.abs(vs - m * v) - es - np.abs(m) * e)
        checks.append(_check(f"laplace shift {h.name} by {s:.3f}", max(dev, 0.0), 1e-6))
    return {"suite": "shift", "passed": all(c["passed"] for c in checks), "checks": checks}


def suite_conv(seed=0, cfg=None):
    rng = np.random.default_rng(seed)
    cfg = cfg or QuadConfig.from_env()
    zeta = rng.uniform(-6, 6, 20) + 1j * rng.uniform(-2, 2, 20)
    checks = []
    a, b = 0.3, -0.8
    c = convolve_contour(dirac(a), dirac(b))
    dev = np.max(np.abs(fourier_compact(c, cfg=cfg)(zeta) - np.exp(-1j * (a + b) * zeta)))
    checks.append(_check("dirac(a) (*) dirac(b)", dev, 1e-7))
    box = cauchy_embed(_one, 0.0, 1.0, name="box")
    c = convolve_contour(box, box)
    exact = ((1 - np.exp(-1j * zeta)) / (1j * zeta)) ** 2
    dev = np.max(np.abs(fourier_compact(c, cfg=cfg)(zeta) - exact))
    checks.append(_check("box (*) box", dev, 1e-5))
    for i in range(5):
        A, B = rng.normal(size=(2, 2)), rng.normal(size=(2, 2))
        c = convolve_contour(dirac(0.0, A), dirac(0.0, B))
        dev = np.max(np.abs(fourier_compact(c, cfg=cfg)(zeta[:5]) - A @ B))
        checks.append(_check(f"matrix pair {i}", dev, 1e-7))
    return {"suite": "conv", "passed": all(c["passed"] for c in checks), "checks": checks}


def suite_germ(cfg=None):
    checks = []
    one = constant_transform(1.0)
    reps = range_membership(one, GermSpaceTag("LG_zero_inf"), 3, 40.0)
    checks.append({"name": "1 in LG_zero_inf", "passed": all(r.verdict == "consistent" for r in reps),
                   "reports": [r.to_json() for r in reps]})
    reps = range_membership(one, GermSpaceTag("LG_inf"), 3, 40.0)
    checks.append({"name": "1 not in LG_inf", "passed": any(r.growth_slope > 0 for r in reps),
                   "reports": [r.to_json() for r in reps]})
    ex = function_transform(lambda z: np.exp(-z))
    reps = range_membership(ex, GermSpaceTag("LO_plus_inf"), 1, 40.0)
    checks.append({"name": "exp(-z) in LO_plus_inf, k=1", "passed": reps[0].verdict == "consistent",
                   "reports": [r.to_json() for r in reps]})
    tag = GermSpaceTag("LO_plus_inf")
    v, _ = germ_equivalent_heuristic(one, one, GermSpaceTag("LG_inf"))
    checks.append({"name": "1 ~ 1", "passed": v == "equivalent", "verdict": v})
    v, _ = germ_equivalent_heuristic(one, function_transform(lambda z: 1 + np.exp(-z)), tag, k_max=1)
    checks.append({"name": "1 ~ 1 + exp(-z) at k=1", "passed": v == "equivalent", "verdict": v})
    v, _ = germ_equivalent_heuristic(one, function_transform(lambda z: 1 + 1 / z), tag)
    checks.append({"name": "1 vs 1 + 1/z distinct", "passed": v == "distinct", "verdict": v})
    F = fourier_compact(cauchy_embed(_one, -0.5, 1.0), cfg=cfg)
    reps = range_membership(F, F.tag, 4, 40.0)
    checks.append({"name": "fourier of embed in FO_compact", "passed": all(r.verdict == "consistent" for r in reps),
                   "reports": [r.to_json() for r in reps]})
    return {"suite": "germ", "passed": all(c["passed"] for c in checks), "checks": checks}


def suite_compare(cfg=None):
    checks = []
    dens = [("box", _one, 1.0, ()), ("exp on [0,3]", lambda t: np.exp(-t), 3.0, ()),
            ("t on [0,2]", lambda t: np.asarray(t, dtype=float), 2.0, ())]
    for name, f, T, bp in dens:
        rep = consistency_chain(f, T, breakpoints=bp, cfg=cfg)
        checks.append(_check(f"chain {name}", rep["max_pairwise_dev"], 1e-6,
                             flagged_nodes=rep["flagged_nodes"]))
    for h in (dirac(0.0), cauchy_embed(_one, 0.0, 1.0, name="box")):
        rep = consistency_I0(h, cfg=cfg)
        checks.append({"name": f"I0 {h.name}", "passed": rep["passed"], "germ_verdict": rep["germ_verdict"],
                       "max_dev": rep["max_pairwise_dev"]})
    return {"suite": "compare", "passed": all(c["passed"] for c in checks), "checks": checks}


SUITES = {"shift": suite_shift, "conv": suite_conv, "germ": suite_germ, "compare": suite_compare}


def run_suite(name: str, cfg: QuadConfig | None = None) -> dict:
    if name == "all":
        parts = [SUITES[k](cfg=cfg) for k in SUITES]
        return {"suite": "all", "passed": all(p["passed"] for p in parts), "suites": parts}
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from all, {', '.join(SUITES)}")
    return SUITES[name](cfg=cfg)
