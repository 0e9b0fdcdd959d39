"""Adaptive Gauss-Kronrod integration along contour paths and ray truncation."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace

import numpy as np

from .errors import AccuracyError, DivergenceError, EvaluationError
from .geometry import ContourPath, Ray

# 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
W_KRONROD = np.concatenate([_WK[:-1], _WK[::-1]])
W_GAUSS = np.zeros(15)
W_GAUSS[1::2] = np.concatenate([_WG[:-1], _WG[::-1]])

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadConfig:
    """Tolerances for :func:`integrate_path`.

    The environment variable ``HYPERFLUX_QUAD_TOL`` overrides ``abs_tol`` when
    the config is built with :meth:`from_env`.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    max_depth: int = 30
    max_evaluations: int = 4_000_000

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")

    @classmethod
    def from_env(cls, **kw):
        cfg = cls(**kw)
        tol = os.environ.get("HYPERFLUX_QUAD_TOL")
        if tol:
            cfg = replace(cfg, abs_tol=float(tol))
        return cfg

    def scaled(self, factor: float) -> "QuadConfig":
        """Copy with both tolerances multiplied by ``factor``."""
        return replace(self, abs_tol=self.abs_tol * factor, rel_tol=self.rel_tol * factor)

    def key(self):
        return (self.abs_tol, self.rel_tol, self.max_depth)

    def to_json(self):
        return {"abs_tol": self.abs_tol, "rel_tol": self.rel_tol, "max_depth": self.max_depth}


@dataclass(frozen=True)
class GrowthCertificate:
    """Declared exponential rate of a defining function along horizontal rays.

    ``slowly_increasing``: ``|F| <= C exp(|re z|/n)``; ``n=None`` declares a
    bounded function (rate 0).  ``type_minus_infinity``: ``|F| <= C_n
    exp(-n|re z|)``; ``n`` is the working decay rate used for truncation.
    ``exponential_type``: ``|F| <= C exp(tau |z|)``.  ``entire``: the class is
    zero, no singularities; rate ``tau`` (default 0).
    """

    kind: str = "slowly_increasing"
    C: float = 1.0
    n: int | None = None
    tau: float = 0.0

    def __post_init__(self):
        if self.kind not in ("slowly_increasing", "type_minus_infinity", "exponential_type", "entire"):
            raise ValueError(f"unknown growth kind {self.kind!r}")
        if not self.C > 0:
            raise ValueError("growth constant C must be positive")
        if self.n is not None and self.n < 1:
            raise ValueError("growth index n must be >= 1")
        if self.tau < 0:
            raise ValueError("exponential type must be non-negative")

    @property
    def rate(self) -> float:
        if self.kind == "slowly_increasing":
            return 0.0 if self.n is None else 1.0 / self.n
        if self.kind == "type_minus_infinity":
            return -float(self.n if self.n is not None else 1)
        return float(self.tau)

    @classmethod
    def bounded(cls, C=1.0):
        return cls("slowly_increasing", C)

    @classmethod
    def slowly_increasing(cls, n, C=1.0):
        return cls("slowly_increasing", C, n=n)

    @classmethod
    def type_minus_infinity(cls, n=1, C=1.0):
        return cls("type_minus_infinity", C, n=n)

    @classmethod
    def exponential_type(cls, tau, C=1.0):
        return cls("exponential_type", C, tau=tau)


@dataclass(frozen=True)
class IntegralResult:
    value: np.ndarray
    err_estimate: float
    tail_bound: float = 0.0
    evaluations: int = 0

    @property
    def error(self) -> float:
        return self.err_estimate + self.tail_bound


def choose_truncation(decay: GrowthCertificate, kernel_rate: float, tol: float):
    """Ray length ``R`` with ``C exp(kappa R)/|kappa| <= tol``.

    ``kappa = decay.rate + kernel_rate`` is the combined exponential rate of
    the integrand along the ray.

    Returns
    -------
    (R_max, tail_bound)

    Raises
    ------
    DivergenceError
        If ``kappa >= 0``.
    """
    kappa = decay.rate + kernel_rate
    if not kappa < 0:
        raise DivergenceError(f"combined exponent {kappa:g} is not negative; the integral diverges")
    k = -kappa
    R = math.log(decay.C / (k * tol)) / k
    R = max(R, 1.0)
    tail = decay.C * math.exp(-k * R) / k
    return R, tail


def ray_truncation(integrand_abs, ray: Ray, rate: float, tol: float, C_declared: float = 0.0,
                   probe_length: float = 40.0):
    """Truncate ``ray`` for an integrand whose modulus grows at most like ``exp(rate*s)``.

    The constant ``C`` is the declared value raised to twice the largest
    sampled ``|f(start + d s)| exp(-rate s)`` along the ray.  Returns the
    shortened ray and the tail bound.
    """
    if not rate < 0:
        raise DivergenceError(f"combined exponent {rate:g} is not negative; the integral diverges")
    s = np.concatenate([[0.0], np.geomspace(0.05, probe_length, 48)])
    z = ray.start_point + ray.direction * s
    with np.errstate(over="ignore", invalid="ignore"):
        m = np.asarray(integrand_abs(z), dtype=float) * np.exp(-rate * s)
    m = m[np.isfinite(m)]
    C = max(C_declared, 2.0 * float(m.max()) if m.size else 0.0, 1e-300)
    R, tail = choose_truncation(GrowthCertificate("entire", C, tau=0.0), rate, tol)
    return ray.with_length(R), tail


def _seg_nodes(seg, a, b):
    """Nodes and weights (including dz/dt) for panels [a, b] of one segment."""
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    t = mid[:, None] + half[:, None] * NODES[None, :]
    z = np.asarray(seg.point(t), dtype=complex)
    dz = np.asarray(seg.deriv(t), dtype=complex) * half[:, None]
    return z, dz


def _initial_panels(seg):
    n0 = int(min(64, max(2, math.ceil(seg.length / 2.0))))
    edges = np.linspace(0.0, 1.0, n0 + 1)
    return edges[:-1], edges[1:]


def integrate_path(f, path: ContourPath, cfg: QuadConfig | None = None, tail_bound: float = 0.0):
    """Integrate ``f`` along ``path`` with adaptive 15/7 Gauss-Kronrod panels.

    Parameters
    ----------
    f : callable
        Vectorized integrand; ``f(z)`` with ``z`` of shape ``(N,)`` returns an
        array of shape ``(N, *S)``.  Vector and matrix values are integrated
        componentwise.
    path : ContourPath
    cfg : QuadConfig, optional
    tail_bound : float
        Truncation bound of the path rays, stored in the result.

    Returns
    -------
    IntegralResult
        ``value`` has shape ``S``.  ``err_estimate`` is the sum over panels of
        the Kronrod/Gauss discrepancy plus a rounding allowance.
    """
    cfg = cfg or QuadConfig()
    segs = path.segments
    total_len = max(path.length, 1e-300)

    seg_ids, lo, hi = [], [], []
    for i, s in enumerate(segs):
        a, b = _initial_panels(s)
        seg_ids.append(np.full(a.size, i))
        lo.append(a)
        hi.append(b)
    seg_ids = np.concatenate(seg_ids)
    lo = np.concatenate(lo)
    hi = np.concatenate(hi)
    seg_len = np.array([s.length for s in segs])

    acc_val = None
    acc_err = 0.0
    n_eval = 0
    depth = 0
    while seg_ids.size:
        P = seg_ids.size
        z = np.empty((P, 15), dtype=complex)
        dz = np.empty((P, 15), dtype=complex)
        for i in np.unique(seg_ids):
            sel = seg_ids == i
            z[sel], dz[sel] = _seg_nodes(segs[i], lo[sel], hi[sel])
        vals = np.asarray(f(z.ravel()))
        n_eval += z.size
        if vals.shape[0] != z.size:
            raise ValueError("integrand must return one value per node along axis 0")
        shape = vals.shape[1:]
        vals = vals.reshape((P, 15) + shape)
        bad = ~np.isfinite(vals)
        if bad.any():
            idx = np.argwhere(bad.reshape(P, 15, -1).any(axis=2))[0]
            node = complex(z[idx[0], idx[1]])
            raise EvaluationError(f"non-finite integrand value at z={node!r}", node=node)
        dzx = dz.reshape((P, 15) + (1,) * len(shape))
        fv = vals * dzx
        K = np.tensordot(W_KRONROD, fv, axes=([0], [1]))
        G = np.tensordot(W_GAUSS, fv, axes=([0], [1]))
        absint = np.tensordot(W_KRONROD, np.abs(fv), axes=([0], [1]))
        diff = np.abs(K - G).reshape(P, -1).max(axis=1)
        roundoff = 50.0 * _EPS * absint.reshape(P, -1).max(axis=1)
        err = np.maximum(diff, roundoff)

        if acc_val is None:
            acc_val = np.zeros(shape, dtype=complex)
        est = acc_val + K.sum(axis=0)
        scale = float(np.max(np.abs(est))) if est.size else 0.0
        tol = max(cfg.abs_tol, cfg.rel_tol * scale)
        plen = seg_len[seg_ids] * (hi - lo)
        ok = (diff <= tol * plen / total_len) | (diff <= roundoff)
        forced = False
        if depth >= cfg.max_depth or n_eval > cfg.max_evaluations:
            forced = not ok.all()
            ok[:] = True
        acc_val = acc_val + K[ok].sum(axis=0)
        acc_err += float(err[ok].sum())
        if forced:
            res = IntegralResult(acc_val, acc_err, tail_bound, n_eval)
            raise AccuracyError(
                f"accuracy not reached after depth {depth} (error estimate {acc_err:.3g})", result=res)
        nb = ~ok
        mid = 0.5 * (lo[nb] + hi[nb])
        seg_ids = np.concatenate([seg_ids[nb], seg_ids[nb]])
        lo, hi = np.concatenate([lo[nb], mid]), np.concatenate([mid, hi[nb]])
        depth += 1

    if acc_val is None:
        acc_val = np.zeros((), dtype=complex)
    return IntegralResult(acc_val, acc_err, float(tail_bound), n_eval)


def gauss_legendre_panels(a: float, b: float, n_panels: int, order: int = 20, breakpoints=()):
    """Composite Gauss-Legendre nodes and weights on ``[a, b]``.

    Interior ``breakpoints`` are always panel edges.
    """
    x, w = np.polynomial.legendre.leggauss(order)
    edges = [a, *sorted(p for p in breakpoints if a < p < b), b]
    ts, ws = [], []
    total = b - a
    for lo, hi in zip(edges[:-1], edges[1:]):
        m = max(1, int(math.ceil(n_panels * (hi - lo) / total)))
        e = np.linspace(lo, hi, m + 1)
        half = 0.5 * np.diff(e)
        mid = 0.5 * (e[1:] + e[:-1])
        ts.append((mid[:, None] + half[:, None] * x[None, :]).ravel())
        ws.append((half[:, None] * w[None, :]).ravel())
    return np.concatenate(ts), np.concatenate(ws)
