"""Fourier and Laplace transforms of hyperfunctions.

Transforms are returned as :class:`TransformFunction` objects: vectorized,
cached evaluators with a declared domain.  The compact-support Fourier
transform can be inverted numerically, and transform values can be sampled
against weighted sup-norms of the spaces they should belong to.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from .errors import (DivergenceError, DomainError, NotDecomposableError, PreconditionError,
                     UnsupportedSupportError, ValueSpaceError)
from .geometry import ContourPath, Ray, Support, supporting_function
from .hyperfn import (SCALAR, Density, HalfLineIndicator, Hyperfunction, PointMass, SeminormReport,
                      ValueSpace, contour_integral, envelope_slope, from_atoms, zero)
from .quadrature import GrowthCertificate, IntegralResult, QuadConfig, integrate_path, ray_truncation

# ---------------------------------------------------------------- domains

_DOMAIN_NAMES = {"entire": frozenset(), "lower": frozenset({"lower"}), "upper": frozenset({"upper"}),
                 "right": frozenset({"right"}), "left": frozenset({"left"})}


def _domain(d) -> frozenset:
    if isinstance(d, frozenset):
        return d
    if d not in _DOMAIN_NAMES:
        raise ValueError(f"unknown domain {d!r}")
    return _DOMAIN_NAMES[d]


def domain_name(d: frozenset) -> str:
    return "+".join(sorted(d)) or "entire"


def in_domain(zeta, d) -> np.ndarray:
    """Membership mask of ``zeta`` in an intersection of open half-planes."""
    zeta = np.asarray(zeta, dtype=complex)
    ok = np.ones(zeta.shape, dtype=bool)
    for c in _domain(d):
        if c == "lower":
            ok &= zeta.imag < 0
        elif c == "upper":
            ok &= zeta.imag > 0
        elif c == "right":
            ok &= zeta.real > 0
        elif c == "left":
            ok &= zeta.real < 0
    return ok


def intersect_domains(d1, d2) -> frozenset:
    d = _domain(d1) | _domain(d2)
    if {"lower", "upper"} <= d or {"left", "right"} <= d:
        raise DomainError(f"domains {domain_name(_domain(d1))} and {domain_name(_domain(d2))} do not intersect")
    return d


# ---------------------------------------------------------------- germ space tags

_TAG_KINDS = ("FO_compact", "FO_right", "FO_left", "FO_plus_inf", "FO_minus_inf", "FO_pm_inf",
              "LO_right", "LO_left", "LO_compact", "LO_plus_inf", "LO_minus_inf", "LG_zero_inf", "LG_inf")


@dataclass(frozen=True)
class GermSpaceTag:
    """Weighted sup-norm family ``sup_{R_k} |f(z)| exp(w_k(z))`` attached to a transform.

    ``a``/``b`` are the support endpoints for the interval tags.  Fourier-side
    tags are the Laplace-side ones rotated by ``z = i zeta``.
    """

    kind: str
    a: float | None = None
    b: float | None = None

    def __post_init__(self):
        if self.kind not in _TAG_KINDS:
            raise ValueError(f"unknown germ space tag {self.kind!r}")

    def __str__(self):
        args = [f"{x:g}" for x in (self.a, self.b) if x is not None]
        return f"{self.kind}({','.join(args)})" if args else self.kind

    @property
    def fourier_side(self):
        return self.kind.startswith("FO")

    def _laplace_kind(self):
        return "LO" + self.kind[2:] if self.fourier_side else self.kind

    def _to_laplace_plane(self, z):
        return 1j * z if self.fourier_side else z

    def region(self, z, k: int) -> np.ndarray:
        """Mask of the test region ``R_k``."""
        s = self._to_laplace_plane(np.asarray(z, dtype=complex))
        kind = self._laplace_kind()
        if kind in ("LO_compact",):
            return np.ones(s.shape, dtype=bool)
        if kind in ("LO_right", "LO_plus_inf"):
            return s.real >= 1.0 / k
        if kind in ("LO_left", "LO_minus_inf"):
            return s.real <= -1.0 / k
        if kind in ("LG_zero_inf", "LG_inf"):
            return s.real >= -k
        if kind == "LO_pm_inf":
            return np.abs(s.real) >= 1.0 / k
        raise AssertionError(kind)

    def log_weight(self, z, k: int) -> np.ndarray:
        """Exponent ``w_k(z)`` multiplying ``|f(z)|`` in the seminorm."""
        z = np.asarray(z, dtype=complex)
        s = self._to_laplace_plane(z)
        kind = self._laplace_kind()
        base = -np.abs(z) / k
        if kind == "LO_compact":
            # -H_[a,b](-re s); on the Fourier side -re(i zeta) = im zeta
            return base - supporting_function(Support.compact(self.a, self.b), -s.real)
        if kind == "LO_right":
            return base + self.a * s.real
        if kind == "LO_left":
            return base + self.b * s.real
        if kind == "LO_plus_inf":
            return base + k * s.real
        if kind == "LO_minus_inf":
            return base - k * s.real
        if kind == "LO_pm_inf":
            return base + k * np.abs(s.real)
        if kind == "LG_zero_inf":
            return base
        if kind == "LG_inf":
            return base + k * np.abs(s.real)
        raise AssertionError(kind)

    def grid(self, k: int, R: float, n_r: int = 32, n_theta: int = 72) -> np.ndarray:
        """Polar sample grid of ``R_k`` intersected with ``|z| <= R``."""
        r = np.linspace(R / n_r, R, n_r)
        th = np.linspace(-np.pi, np.pi, n_theta, endpoint=False)
        z = (r[:, None] * np.exp(1j * th[None, :])).ravel()
        return z[self.region(z, k)]

    def combine(self, other: "GermSpaceTag") -> "GermSpaceTag | None":
        """Tag of a product of transforms: supports add."""
        if self.fourier_side != other.fourier_side:
            return None
        pre = self.kind[:2]
        k1, k2 = self.kind[3:], other.kind[3:]
        if {k1, k2} <= {"zero_inf"} or {k1, k2} <= {"inf"}:
            return self if k1 == k2 else None
        lo1, hi1 = self._bounds()
        lo2, hi2 = other._bounds()
        if lo1 is None or lo2 is None:
            return None
        lo, hi = lo1 + lo2, hi1 + hi2
        if math.isnan(lo) or math.isnan(hi):
            return None
        if lo == math.inf:
            return GermSpaceTag(pre + "_plus_inf")
        if hi == -math.inf:
            return GermSpaceTag(pre + "_minus_inf")
        if math.isfinite(lo) and math.isfinite(hi):
            return GermSpaceTag(pre + "_compact", lo, hi)
        if math.isfinite(lo):
            return GermSpaceTag(pre + "_right", lo)
        if math.isfinite(hi):
            return GermSpaceTag(pre + "_left", None, hi)
        return None

    def _bounds(self):
        k = self.kind[3:]
        if k == "compact":
            return self.a, self.b
        if k == "right":
            return self.a, math.inf
        if k == "left":
            return -math.inf, self.b
        if k == "plus_inf":
            return math.inf, math.inf
        if k == "minus_inf":
            return -math.inf, -math.inf
        return None, None

    def to_json(self):
        return {"kind": self.kind, "a": self.a, "b": self.b}


# ---------------------------------------------------------------- transform functions

class TransformFunction:
    """Sampled transform with domain check and a synchronized sample cache.

    Parameters
    ----------
    evaluator : callable
        ``evaluator(zeta)`` for a flat complex array returns ``(values, errors)``
        with shapes ``(N, *S)`` and ``(N,)``.
    domain : str or frozenset
        ``'entire'``, ``'lower'``, ``'upper'``, ``'right'``, ``'left'`` or an
        intersection built by :func:`intersect_domains`.
    divergent : bool
        Outside the domain the defining integral diverges; evaluation there
        raises :class:`DivergenceError` instead of :class:`DomainError`.
    """

    def __init__(self, evaluator, domain="entire", provenance: str = "", space: ValueSpace = SCALAR,
                 tag: GermSpaceTag | None = None, cfg_key=(), batch: int = 128, divergent: bool = False):
        self._evaluator = evaluator
        self.domain = _domain(domain)
        self.divergent = divergent
        self.provenance = provenance
        self.space = space
        self.tag = tag
        self.cfg_key = tuple(cfg_key)
        self.batch = batch
        self._lock = threading.Lock()
        self._cache = {}

    def __repr__(self):
        return f"TransformFunction({self.provenance!r}, domain={domain_name(self.domain)})"

    def with_tag(self, tag):
        out = TransformFunction(self._evaluator, self.domain, self.provenance, self.space, tag,
                                self.cfg_key, self.batch, self.divergent)
        out._cache = self._cache
        out._lock = self._lock
        return out

    def check_domain(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        ok = in_domain(zeta, self.domain)
        if not np.all(ok):
            bad = complex(zeta.ravel()[np.argmin(ok.ravel())])
            err = DivergenceError if self.divergent else DomainError
            raise err(f"{self.provenance or 'transform'}: zeta={bad} is outside the domain "
                              f"{domain_name(self.domain)}", bad)

    def evaluate(self, zeta):
        """Values ``zeta.shape + S`` and per-point error estimates ``zeta.shape``."""
        zeta = np.asarray(zeta, dtype=complex)
        self.check_domain(zeta)
        flat = zeta.ravel()
        vals = np.empty(flat.shape + self.space.shape, dtype=complex)
        errs = np.empty(flat.shape)
        missing = []
        with self._lock:
            for i, z in enumerate(flat):
                hit = self._cache.get((complex(z), self.cfg_key))
                if hit is None:
                    missing.append(i)
                else:
                    vals[i], errs[i] = hit
        if missing:
            idx = np.asarray(missing)
            uniq, inv = np.unique(flat[idx], return_inverse=True)
            uv = np.empty(uniq.shape + self.space.shape, dtype=complex)
            ue = np.empty(uniq.shape)
            for s in range(0, uniq.size, self.batch):
                v, e = self._evaluator(uniq[s:s + self.batch])
                uv[s:s + self.batch] = v
                ue[s:s + self.batch] = e
            vals[idx] = uv[inv]
            errs[idx] = ue[inv]
            with self._lock:
                for z, v, e in zip(uniq, uv, ue):
                    self._cache.setdefault((complex(z), self.cfg_key), (v.copy(), float(e)))
        return vals.reshape(zeta.shape + self.space.shape), errs.reshape(zeta.shape)

    def __call__(self, zeta):
        return self.evaluate(zeta)[0]

    # pointwise algebra
    def _combine(self, other, op, name, space):
        dom = intersect_domains(self.domain, other.domain)

        def ev(z):
            v1, e1 = self.evaluate(z)
            v2, e2 = other.evaluate(z)
            return op(v1, e1, v2, e2)

        return TransformFunction(ev, dom, name, space, None, self.cfg_key + other.cfg_key, self.batch,
                                 self.divergent or other.divergent)

    def __add__(self, other):
        if self.space != other.space:
            raise ValueSpaceError("cannot add transforms with different value spaces")
        return self._combine(other, lambda v1, e1, v2, e2: (v1 + v2, e1 + e2),
                             f"({self.provenance} + {other.provenance})", self.space)

    def __sub__(self, other):
        if self.space != other.space:
            raise ValueSpaceError("cannot subtract transforms with different value spaces")
        return self._combine(other, lambda v1, e1, v2, e2: (v1 - v2, e1 + e2),
                             f"({self.provenance} - {other.provenance})", self.space)

    def scaled(self, lam):
        lam = complex(lam)

        def ev(z):
            v, e = self.evaluate(z)
            return lam * v, abs(lam) * e

        return TransformFunction(ev, self.domain, f"{lam:g}*{self.provenance}", self.space, self.tag,
                                 self.cfg_key, self.batch, self.divergent)

    def multiplied(self, fn, name="mult"):
        """Pointwise product with a scalar function ``fn(zeta)`` (no error added)."""
        def ev(z):
            v, e = self.evaluate(z)
            m = np.asarray(fn(z), dtype=complex)
            return v * m.reshape(m.shape + (1,) * len(self.space.shape)), e * np.abs(m)

        return TransformFunction(ev, self.domain, f"{name}*{self.provenance}", self.space, None,
                                 self.cfg_key, self.batch, self.divergent)


def constant_transform(value, domain="entire", name="const") -> TransformFunction:
    value = np.asarray(value, dtype=complex)
    space = ValueSpace(value.shape)

    def ev(z):
        return np.broadcast_to(value, z.shape + value.shape).copy(), np.zeros(z.shape)

    return TransformFunction(ev, domain, name, space)


def function_transform(fn, domain="entire", name="fn", space: ValueSpace = SCALAR, tag=None):
    """Wrap a closed-form vectorized function as an exact :class:`TransformFunction`."""
    def ev(z):
        return np.asarray(fn(z), dtype=complex).reshape(z.shape + space.shape), np.zeros(z.shape)

    return TransformFunction(ev, domain, name, space, tag)


# ---------------------------------------------------------------- forward transforms

def auto_clearance(zeta, min_clearance: float = 0.0) -> np.ndarray:
    """Contour clearance per transform variable; smaller for large ``|zeta|``.

    The contour integrand is magnified by ``exp(c |zeta|)`` relative to the
    result, so the clearance shrinks as ``|zeta|`` grows.
    """
    m = np.abs(np.asarray(zeta))
    c = np.select([m <= 2, m <= 4, m <= 20], [0.5, 0.25, 0.1], 0.05)
    if min_clearance:
        c = np.maximum(c, 1.05 * min_clearance)
    return c


def _fourier_view(h: Hyperfunction, side: str) -> Support:
    """Carrier encircled by the contour for the requested transform."""
    K = h.support.closure()
    if side == "compact":
        if not K.is_compact:
            raise UnsupportedSupportError(f"compact Fourier transform needs a compact support, got {K}")
        return K
    rp = K.real_part()
    if side == "right":
        if K.kind in ("plus_inf",):
            return K
        if rp is None or rp[0] == -math.inf:
            raise UnsupportedSupportError(f"support {K} is not contained in a right half-line")
        return Support.right_ray(rp[0])
    if K.kind in ("minus_inf",):
        return K
    if rp is None or rp[1] == math.inf:
        raise UnsupportedSupportError(f"support {K} is not contained in a left half-line")
    return Support.left_ray(rp[1])


def _log_scale(view: Support, y):
    """``H(im zeta)`` used to normalise the integrand for each transform variable."""
    if view.kind == "compact":
        return supporting_function(view, y)
    rp = view.real_part()
    if rp is None:
        return np.zeros_like(y)
    if view.kind == "right_ray":
        return rp[0] * y
    return rp[1] * y


def _contour_transform(h, view, zeta, clearance, cfg, side):
    """Evaluate ``int F(w) exp(-i w zeta) dw`` for a batch of ``zeta`` sharing one contour."""
    sc = _log_scale(view, zeta.imag)

    def kernel(w):
        return np.exp(-1j * w[:, None] * zeta[None, :] - sc[None, :])

    def rate(ray):
        return float(np.max((ray.direction * zeta).imag))

    res = contour_integral(h, kernel, clearance, cfg, ray_rate=None if side == "compact" else rate, support=view)
    amp = np.exp(sc)
    val = res.value * amp.reshape(amp.shape + (1,) * len(h.space.shape))
    return val, res.error * amp


def _fourier_evaluator(h, view, cfg, clearance, side):
    def ev(zeta):
        vals = np.empty(zeta.shape + h.space.shape, dtype=complex)
        errs = np.empty(zeta.shape)
        if h.support.kind == "empty":
            vals[:] = 0
            errs[:] = 0
            return vals, errs
        if side != "compact":
            kappa = h.growth.rate + (zeta.imag if side == "right" else -zeta.imag)
            if np.any(kappa >= 0):
                bad = complex(zeta[np.argmax(kappa)])
                raise DivergenceError(
                    f"{h.name or 'hyperfunction'}: Fourier integral over {view} diverges at zeta={bad} "
                    f"(combined exponent {kappa.max():g})", bad)
            # group by decay so that slowly decaying points do not lengthen every ray
            rbin = np.floor(np.log2(-kappa)).astype(int)
        else:
            rbin = np.zeros(zeta.shape, dtype=int)
        c = (np.full(zeta.shape, float(clearance)) if clearance is not None
             else auto_clearance(zeta, h.min_clearance))
        keys = np.stack([c, rbin.astype(float)], axis=1)
        for key in np.unique(keys, axis=0):
            sel = np.nonzero((keys == key).all(axis=1))[0]
            v, e = _contour_transform(h, view, zeta[sel], float(key[0]), cfg, side)
            vals[sel] = v
            errs[sel] = e
        return vals, errs
    return ev


def fourier_compact(h: Hyperfunction, clearance: float | None = None,
                    cfg: QuadConfig | None = None) -> TransformFunction:
    """Entire Fourier transform ``zeta -> int_gamma F(z) exp(-i z zeta) dz`` for compact support.

    Parameters
    ----------
    h : Hyperfunction
        Compactly supported (a point or an interval).
    clearance : float, optional
        Fixed contour clearance; by default it is chosen per ``|zeta|``.
    """
    cfg = cfg or QuadConfig.from_env()
    view = _fourier_view(h, "compact") if h.support.kind != "empty" else Support.empty()
    tag = GermSpaceTag("FO_compact", view.a, view.b) if view.kind == "compact" else None
    return TransformFunction(_fourier_evaluator(h, view, cfg, clearance, "compact"), "entire",
                             f"fourier_compact({h.name})", h.space, tag, (cfg.key(), clearance))


def fourier_halfline(h: Hyperfunction, side: str = "right", clearance: float | None = None,
                     cfg: QuadConfig | None = None) -> TransformFunction:
    """Fourier transform over a half-line carrier.

    ``side='right'`` views the support inside ``[a, inf]`` (domain ``im zeta < 0``);
    ``side='left'`` inside ``[-inf, b]`` (domain ``im zeta > 0``).  Outside the
    domain, or where the growth of ``F`` beats the kernel decay, evaluation
    raises :class:`DivergenceError`.
    """
    if side not in ("right", "left"):
        raise ValueError("side must be 'right' or 'left'")
    cfg = cfg or QuadConfig.from_env()
    if h.support.kind == "empty":
        view = Support.empty()
        tag = None
    else:
        view = _fourier_view(h, side)
        rp = view.real_part()
        tag = (GermSpaceTag("FO_right", rp[0]) if side == "right" else GermSpaceTag("FO_left", None, rp[1])) \
            if rp is not None else GermSpaceTag("FO_plus_inf" if side == "right" else "FO_minus_inf")
    ev = _fourier_evaluator(h, view, cfg, clearance, side)
    return TransformFunction(ev, "lower" if side == "right" else "upper", f"fourier_{side}({h.name})",
                             h.space, tag, (cfg.key(), clearance), divergent=True)


def laplace(h: Hyperfunction, side: str | None = None, clearance: float | None = None,
            cfg: QuadConfig | None = None) -> TransformFunction:
    """Laplace transform ``L(zeta) = F(-i zeta)`` of the matching Fourier transform.

    Compact supports give an entire function; right half-line supports the
    half-plane ``re zeta > 0``; left half-line supports ``re zeta < 0``.
    """
    K = h.support.closure()
    if side is None:
        side = "compact" if (K.is_compact or K.kind == "empty") else \
            ("right" if K.kind in ("right_ray", "plus_inf") else "left")
    if side == "compact":
        F = fourier_compact(h, clearance, cfg)
        tag = GermSpaceTag("LO_compact", F.tag.a, F.tag.b) if F.tag else None
    else:
        F = fourier_halfline(h, side, clearance, cfg)
        if F.tag is None:
            tag = None
        elif F.tag.kind in ("FO_right", "FO_left"):
            tag = GermSpaceTag("LO" + F.tag.kind[2:], F.tag.a, F.tag.b)
        else:
            tag = GermSpaceTag("LO" + F.tag.kind[2:])

    def ev(s):
        return F.evaluate(-1j * s)

    return TransformFunction(ev, "entire" if side == "compact" else side, f"laplace({h.name})", h.space,
                             tag, F.cfg_key, divergent=side != "compact")


# ---------------------------------------------------------------- inverse Fourier transform

class _InverseData:
    """Rectangle extension ``nu(phi) = -(1/2pi) sum_sides int phi(w) A(w) dw``.

    ``A(w)`` is the integral of ``g(zeta) exp(i w zeta)`` along a ray in the
    ``zeta``-plane chosen per rectangle side so that it converges.
    """

    def __init__(self, g, a, b, delta, delta_p, cfg, panel, order):
        self.g = g
        lo, hi = a - delta_p, b + delta_p
        top = (complex(lo, delta), complex(hi, delta), Ray(-1j * delta, 1.0, 1.0), delta)
        bottom = (complex(lo, -delta), complex(hi, -delta), Ray(-1j * delta, -1.0, 1.0, inward=True), delta)
        left = (complex(lo, -delta), complex(lo, delta), Ray(-1j * delta, -1j, 1.0), delta_p)
        right = (complex(hi, delta), complex(hi, -delta), Ray(-1j * delta, 1j, 1.0), delta_p)
        self.sides = (top, bottom, left, right)
        w_all, W_all, A_all = [], [], []
        err = 0.0
        evals = 0
        for p, q, ray, decay in self.sides:
            L = abs(q - p)
            npan = max(1, math.ceil(L / panel))
            x, wt = np.polynomial.legendre.leggauss(order)
            edges = np.linspace(0.0, 1.0, npan + 1)
            t = ((edges[:-1, None] + edges[1:, None]) / 2 + (edges[1:, None] - edges[:-1, None]) / 2 * x).ravel()
            wts = (((edges[1:, None] - edges[:-1, None]) / 2) * wt).ravel()
            w = p + (q - p) * t
            W = (q - p) * wts
            res = self._ray_integral(w, ray, decay, cfg)
            err += float(np.sum(np.abs(W))) * res.error
            evals += res.evaluations
            w_all.append(w)
            W_all.append(W)
            A_all.append(res.value)
        self.w = np.concatenate(w_all)
        self.W = np.concatenate(W_all)
        self.A = np.concatenate(A_all, axis=0)
        self.inner_error = err
        self.evaluations = evals

    def _ray_integral(self, w, ray, decay, cfg) -> IntegralResult:
        g = self.g
        S = g.space.shape

        def integrand(zeta):
            v, e = g.evaluate(zeta)
            ker = np.exp(1j * zeta[:, None] * w[None, :])
            out = v.reshape((zeta.size, 1) + S) * ker.reshape(ker.shape + (1,) * len(S))
            return out

        def mag(zeta):
            v, _ = g.evaluate(zeta)
            m = g.space.seminorm(v).reshape(zeta.size)
            return m * np.max(np.abs(np.exp(1j * zeta[:, None] * w[None, :])), axis=1)

        probe = ray.with_length(1.0)
        short, tail = ray_truncation(mag, probe, -0.9 * decay, cfg.abs_tol * 0.1, probe_length=60.0)
        path = ContourPath((short,), orientation="open")
        return integrate_path(integrand, path, cfg, tail_bound=tail)


def inverse_fourier_compact(g: TransformFunction, a: float | None = None, b: float | None = None,
                            delta: float = 0.5, delta_p: float = 0.25, c_tilde: float | None = None,
                            n: int = 1, tol: float = 1e-9, panel: float = 0.1,
                            order: int = 16) -> Hyperfunction:
    """Hyperfunction supported in ``[a, b]`` whose Fourier transform is ``g``.

    The analytic functional of ``g`` is realized on the boundary of the
    rectangle ``[a - delta_p, b + delta_p] x [-delta, delta]``; the returned
    defining function is its Gaussian standard representative
    ``z -> i/(2 pi) T(w -> exp(-(z - w)^2)/(z - w))``.  The nested quadrature
    tolerance ``tol`` is split 10%/30%/60% between the outer pairing contour,
    the rectangle sides and the inner ``zeta`` rays.

    Parameters
    ----------
    g : TransformFunction
        Entire transform, tagged ``FO_compact(a, b)`` unless ``a, b`` are given.
    delta, delta_p : float
        Half-height of the rectangle and its overhang beyond ``[a, b]``.
    c_tilde : float, optional
        Clearance of the pairing contour, in ``(1/(2n), 1/n)``; default ``0.75/n``.
        The result can only be evaluated at least this far from ``[a, b]``.
    """
    if a is None or b is None:
        if g.tag is None or g.tag.kind != "FO_compact":
            raise PreconditionError("inverse_fourier_compact needs an FO_compact certificate or explicit [a, b]")
        a, b = g.tag.a, g.tag.b
    if not (delta > 0 and delta_p > 0):
        raise PreconditionError("delta and delta' must be positive")
    c_tilde = 0.75 / n if c_tilde is None else float(c_tilde)
    if not (0.5 / n < c_tilde < 1.0 / n):
        raise PreconditionError(f"c_tilde={c_tilde:g} must lie in (1/(2n), 1/n) for n={n}")
    corner = math.hypot(delta, delta_p)
    min_clear = max(c_tilde, 1.15 * corner)
    inner_cfg = QuadConfig(abs_tol=0.6 * tol, rel_tol=0.6 * tol)
    lock = threading.Lock()
    state = {}

    def data():
        with lock:
            if "d" not in state:
                state["d"] = _InverseData(g, float(a), float(b), delta, delta_p, inner_cfg, panel, order)
            return state["d"]

    def G(z):
        d = data()
        z = np.asarray(z, dtype=complex).ravel()
        out = np.empty(z.shape + g.space.shape, dtype=complex)
        chunk = max(1, 1_000_000 // d.w.size)
        for s in range(0, z.size, chunk):
            zz = z[s:s + chunk]
            dd = zz[:, None] - d.w[None, :]
            phi = np.exp(-dd * dd) / dd * d.W[None, :]
            out[s:s + chunk] = np.tensordot(phi, d.A, axes=(1, 0))
        return (1j / (4 * np.pi ** 2)) * out

    h = Hyperfunction(Support.compact(a, b), G, GrowthCertificate.type_minus_infinity(1), None, g.space,
                      f"inverse_fourier({g.provenance})", min_clear)
    object.__setattr__(h, "inverse_data", data)
    object.__setattr__(h, "outer_tol", 0.1 * tol)
    return h


def inverse_functional(h: Hyperfunction, phi) -> np.ndarray:
    """Apply the rectangle functional of an inverse transform directly to ``phi``.

    Cheap cross-check of ``pair(h, phi)`` for results of
    :func:`inverse_fourier_compact`.
    """
    d = h.inverse_data()
    vals = np.asarray(phi(d.w), dtype=complex) * d.W
    return (1.0 / (2 * np.pi)) * np.tensordot(vals, d.A, axes=(0, 0))


# ---------------------------------------------------------------- range membership

def range_membership(g, tag: GermSpaceTag, k_max: int = 3, R: float = 40.0, noise_floor: float = 0.0,
                     slope_tol: float = 1e-3, n_r: int = 32, n_theta: int = 72) -> list:
    """Sampled weighted sup-norms of ``g`` for ``k = 1..k_max``.

    For each ``k`` the values ``|g(z)| exp(w_k(z))`` are sampled over the test
    region within ``|z| <= R``.  The verdict is ``'consistent'`` when the
    fitted growth slope of their envelope is not positive, ``'violated'`` when
    it is positive and the offending points reach the outer shell, and
    ``'inconclusive'`` otherwise.  Values with ``|g| <= noise_floor`` are
    treated as zero.
    """
    reports = []
    for k in range(1, k_max + 1):
        z = tag.grid(k, R, n_r, n_theta)
        if isinstance(g, TransformFunction):
            z = z[in_domain(z, g.domain)]
            vals = g(z)
            space = g.space
        else:
            with np.errstate(over="ignore", invalid="ignore"):
                vals = np.asarray(g(z), dtype=complex)
            space = ValueSpace(vals.shape[1:])
        mag = space.seminorm(vals).reshape(z.size)
        sig = mag > noise_floor
        with np.errstate(divide="ignore", over="ignore"):
            logw = np.log(mag) + tag.log_weight(z, k)
        if not np.any(sig):
            reports.append(SeminormReport(str(tag), k, f"{z.size} polar points, |z|<={R:g}", 0.0, 0.0,
                                          "consistent", int(z.size)))
            continue
        r = np.abs(z[sig])
        lw = logw[sig]
        sup = float(np.exp(min(lw.max(), 700.0)))
        slope = envelope_slope(r, lw)
        if slope <= slope_tol:
            verdict = "consistent"
        elif r.max() >= 0.9 * R:
            verdict = "violated"
        else:
            verdict = "inconclusive"
        reports.append(SeminormReport(str(tag), k, f"{z.size} polar points, |z|<={R:g}", sup, slope,
                                      verdict, int(z.size)))
    return reports


def germ_equivalent_heuristic(g1, g2, tag: GermSpaceTag, k_max: int = 3, R: float = 40.0,
                              tol: float = 1e-6):
    """Heuristic test that ``g1 - g2`` is negligible in the germ space ``tag``.

    Differences below ``tol`` count as zero.  Returns ``(verdict, reports)``
    with verdict ``'equivalent'`` when every ``k <= k_max`` is consistent,
    ``'distinct'`` when some ``k`` is violated, and ``'inconclusive'``
    otherwise.  Only finitely many ``k`` and a bounded region are sampled, so
    the answer is evidence, not proof.
    """
    if isinstance(g1, TransformFunction) and isinstance(g2, TransformFunction):
        d = g1 - g2
    else:
        def d(z):
            return np.asarray(g1(z), dtype=complex) - np.asarray(g2(z), dtype=complex)
    reports = range_membership(d, tag, k_max, R, noise_floor=tol)
    verdicts = {r.verdict for r in reports}
    if verdicts == {"consistent"}:
        verdict = "equivalent"
    elif "violated" in verdicts:
        verdict = "distinct"
    else:
        verdict = "inconclusive"
    return verdict, reports


germ_equivalent = germ_equivalent_heuristic


def asymptotic_laplace_class(h: Hyperfunction, cfg: QuadConfig | None = None):
    """Laplace transform of a half-line representative, as a class modulo germs at ``+inf``."""
    if h.growth.kind == "exponential_type" and h.growth.tau > 0:
        raise PreconditionError("asymptotic Laplace classes need a slowly increasing or type -inf representative")
    K = h.support.closure()
    if K.kind == "empty":
        return constant_transform(np.zeros(h.space.shape), "right", "0"), GermSpaceTag("LO_plus_inf")
    rp = K.real_part()
    if K.kind != "plus_inf" and (rp is None or rp[0] == -math.inf):
        raise UnsupportedSupportError(f"asymptotic Laplace class needs a support bounded on the left, got {K}")
    return laplace(h, side="right", cfg=cfg), GermSpaceTag("LO_plus_inf")


# ---------------------------------------------------------------- decomposition

def decompose_at(h: Hyperfunction, j: float):
    """Split ``h`` into parts supported left and right of ``j``.

    Point masses at ``j`` go to the left part.  Densities are restricted to
    either side; half-line indicators crossing ``j`` are split into an
    embedded constant and a half-line indicator starting at ``j``.

    Raises
    ------
    NotDecomposableError
        For opaque hyperfunctions.
    """
    if h.atoms is None:
        raise NotDecomposableError(f"{h.name or 'hyperfunction'} has no structural metadata to split at {j:g}")
    j = float(j)
    left, right = [], []
    for at in h.atoms:
        if isinstance(at, PointMass):
            (left if at.location <= j else right).append(at)
        elif isinstance(at, Density):
            if at.b <= j:
                left.append(at)
            elif at.a >= j:
                right.append(at)
            else:
                left.append(at.restricted(at.a, j))
                right.append(at.restricted(j, at.b))
        elif isinstance(at, HalfLineIndicator):
            one = _const_one
            if at.side == "right":
                if at.a >= j:
                    right.append(at)
                else:
                    left.append(Density(one, at.a, j, at.weight, at.order))
                    right.append(HalfLineIndicator(j, at.weight, "right", at.order))
            else:
                if at.a <= j:
                    left.append(at)
                else:
                    left.append(HalfLineIndicator(j, at.weight, "left", at.order))
                    right.append(Density(one, j, at.a, at.weight, at.order))
        else:
            raise NotDecomposableError(f"unknown atom {at!r}")
    hl = from_atoms(left, h.space, f"{h.name}|<={j:g}") if left else zero(h.space)
    hr = from_atoms(right, h.space, f"{h.name}|>={j:g}") if right else zero(h.space)
    return hl, hr


def _const_one(t):
    return np.ones_like(np.asarray(t, dtype=float))


def fourier_fullline(h_left: Hyperfunction, h_right: Hyperfunction, a: float | None = None,
                     cfg: QuadConfig | None = None):
    """Upper and lower half-plane parts of the Fourier transform of ``h_left + h_right``.

    Returns ``(F_left on im > 0, -F_right on im < 0)``.
    """
    rl = h_left.support.closure().real_part() if h_left.support.kind != "empty" else None
    rr = h_right.support.closure().real_part() if h_right.support.kind != "empty" else None
    if a is not None:
        if rl is not None and rl[1] > a:
            raise PreconditionError(f"left part extends beyond the split point {a:g}")
        if rr is not None and rr[0] < a:
            raise PreconditionError(f"right part extends below the split point {a:g}")
    elif rl is not None and rr is not None and rl[1] > rr[0]:
        raise PreconditionError("left and right parts overlap beyond a common split point")
    up = fourier_halfline(h_left, "left", cfg=cfg)
    low = fourier_halfline(h_right, "right", cfg=cfg).scaled(-1.0)
    return up, low


# ---------------------------------------------------------------- export

CSV_HEADER = "zeta_re,zeta_im,entry_row,entry_col,val_re,val_im,err_abs"


def samples_to_csv(zeta, values, errors, space: ValueSpace = SCALAR) -> str:
    """CSV text with one row per sample and matrix entry (flat addressing)."""
    zeta = np.asarray(zeta, dtype=complex).ravel()
    values = np.asarray(values).reshape(zeta.shape + space.shape)
    errors = np.asarray(errors, dtype=float).ravel()
    lines = [CSV_HEADER]
    shape = space.shape
    if not shape:
        entries = [((0, 0), ())]
    elif len(shape) == 1:
        entries = [((i, 0), (i,)) for i in range(shape[0])]
    else:
        entries = [((i, j), (i, j)) for i in range(shape[0]) for j in range(shape[1])]
    for (row, col), idx in entries:
        for z, v, e in zip(zeta, values, errors):
            x = v[idx] if idx else v
            lines.append(f"{z.real:.17g},{z.imag:.17g},{row},{col},{x.real:.17g},{x.imag:.17g},{e:.17g}")
    return "\n".join(lines) + "\n"
