"""Hyperfunctions represented by defining functions.

A hyperfunction is stored as a vectorized defining function ``F`` holomorphic
off its support, together with a growth certificate.  When it is built from
library constructors it also carries a tuple of *atoms* (point masses with
derivative order, Cauchy-embedded densities, half-line indicators) from which
``F`` is evaluated in closed form or by real quadrature; the atoms make
decomposition at a cut point constructive.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

import numpy as np

from .errors import (DivergingJumpError, NearSingularError, PreconditionError,
                     UnsupportedSupportError, ValueSpaceError)
from .geometry import Support, build_contour, in_strip
from .quadrature import (GrowthCertificate, IntegralResult, QuadConfig, gauss_legendre_panels,
                         integrate_path, ray_truncation)

COLLAR = 1e-8
_TWO_PI_I = 2j * np.pi


# ---------------------------------------------------------------- value spaces

@dataclass(frozen=True)
class ValueSpace:
    """Finite-dimensional value space: scalars, ``C^d`` or ``C^{d x d}``."""

    shape: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "shape", tuple(int(s) for s in self.shape))
        if len(self.shape) > 2 or any(s < 1 for s in self.shape):
            raise ValueSpaceError(f"unsupported value shape {self.shape}")
        if len(self.shape) == 2 and self.shape[0] != self.shape[1]:
            raise ValueSpaceError("matrix values must be square")

    @classmethod
    def of(cls, x):
        return cls(np.shape(x))

    @property
    def kind(self):
        return ("scalar", "vector", "matrix")[len(self.shape)]

    @property
    def d(self):
        return self.shape[0] if self.shape else 1

    @property
    def product_constant(self):
        """Constant ``D`` in ``|xy| <= D |x| |y|`` for the max-abs seminorm."""
        return self.d if self.kind == "matrix" else 1

    def seminorm(self, x):
        """Max-abs seminorm over the value axes (the trailing ``len(shape)`` axes)."""
        x = np.abs(np.asarray(x))
        if not self.shape:
            return x
        axes = tuple(range(x.ndim - len(self.shape), x.ndim))
        return x.max(axis=axes)

    def product_space(self, other: "ValueSpace") -> "ValueSpace":
        if not self.shape:
            return other
        if not other.shape:
            return self
        if self.kind == "matrix" and self.shape[1] == other.shape[0]:
            return ValueSpace(self.shape[:1] + other.shape[1:])
        raise ValueSpaceError(f"no product between {self.shape} and {other.shape}")

    def product(self, x, other: "ValueSpace", y):
        """Batched product of ``x`` (values in self) and ``y`` (values in other).

        Leading axes of ``x`` and ``y`` broadcast against each other.
        """
        self.product_space(other)
        x = np.asarray(x)
        y = np.asarray(y)
        if not self.shape:
            return x.reshape(x.shape + (1,) * len(other.shape)) * y
        if not other.shape:
            return x * y.reshape(y.shape + (1,) * len(self.shape))
        if other.kind == "matrix":
            return np.matmul(x, y)
        return np.matmul(x, y[..., None])[..., 0]


SCALAR = ValueSpace(())


def _as_weight(w):
    return np.asarray(w, dtype=complex)


def _attach(vals, weight):
    """Multiply scalar node values ``(N,)`` by a weight of shape ``S``: ``(N, *S)``."""
    return vals.reshape(vals.shape + (1,) * weight.ndim) * weight


# ---------------------------------------------------------------- atoms

@dataclass(frozen=True, eq=False)
class PointMass:
    """``weight * delta_a^{(order)}`` with defining function a higher-order pole."""

    location: float
    weight: np.ndarray
    order: int = 0

    def F(self, z):
        k = self.order
        coef = -((-1) ** k) * math.factorial(k) / _TWO_PI_I
        return _attach(coef / (z - self.location) ** (k + 1), self.weight)

    def shifted(self, s):
        return PointMass(self.location + s, self.weight, self.order)

    def scaled(self, lam):
        return PointMass(self.location, self.weight * lam, self.order)

    @property
    def bounds(self):
        return (self.location, self.location)

    def describe(self):
        return {"type": "point_mass", "location": self.location, "order": self.order,
                "weight": _json_value(self.weight)}


class _NodeCache:
    """Thread-safe memo of Gauss-Legendre nodes and density values."""

    def __init__(self):
        self._lock = threading.Lock()
        self._data = {}

    def get(self, key, make):
        with self._lock:
            hit = self._data.get(key)
        if hit is None:
            hit = make()
            with self._lock:
                self._data.setdefault(key, hit)
        return hit


def _vectorized(f):
    def g(t):
        t = np.asarray(t, dtype=float)
        return np.broadcast_to(np.asarray(f(t), dtype=complex), t.shape)
    return g


@dataclass(frozen=True, eq=False)
class Density:
    """``weight * (d/dx)^order`` of the Cauchy embedding of ``f`` on ``[a, b]``."""

    f: object
    a: float
    b: float
    weight: np.ndarray
    order: int = 0
    breakpoints: tuple = ()
    cache: _NodeCache = field(default_factory=_NodeCache, repr=False)

    def _nodes(self, n_panels):
        def make():
            t, w = gauss_legendre_panels(self.a, self.b, n_panels, 20, self.breakpoints)
            return t, _vectorized(self.f)(t) * w
        return self.cache.get(n_panels, make)

    def F(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        if self.b > self.a and z.size:
            out = cauchy_transform_nodes(self._nodes, self.a, self.b, z, self.order)
        return _attach(out, self.weight)

    def shifted(self, s):
        f = self.f
        return Density(lambda t: f(np.asarray(t) - s), self.a + s, self.b + s, self.weight,
                       self.order, tuple(p + s for p in self.breakpoints))

    def scaled(self, lam):
        return Density(self.f, self.a, self.b, self.weight * lam, self.order, self.breakpoints,
                       self.cache)

    def restricted(self, a, b):
        return Density(self.f, a, b, self.weight, self.order,
                       tuple(p for p in self.breakpoints if a < p < b))

    @property
    def bounds(self):
        return (self.a, self.b)

    def describe(self):
        return {"type": "density", "a": self.a, "b": self.b, "order": self.order,
                "weight": _json_value(self.weight)}


@dataclass(frozen=True, eq=False)
class HalfLineIndicator:
    """``weight`` times the indicator of ``[a, inf)`` (side 'right') or ``(-inf, a]``."""

    a: float
    weight: np.ndarray
    side: str = "right"
    order: int = 0

    def F(self, z):
        k = self.order
        if self.side == "right":
            if k == 0:
                v = -np.log(self.a - z) / _TWO_PI_I
            else:
                v = math.factorial(k - 1) / (_TWO_PI_I * (self.a - z) ** k)
        else:
            if k == 0:
                v = np.log(z - self.a) / _TWO_PI_I
            else:
                v = (-1) ** (k - 1) * math.factorial(k - 1) / (_TWO_PI_I * (z - self.a) ** k)
        return _attach(v, self.weight)

    def shifted(self, s):
        return HalfLineIndicator(self.a + s, self.weight, self.side, self.order)

    def scaled(self, lam):
        return HalfLineIndicator(self.a, self.weight * lam, self.side, self.order)

    @property
    def bounds(self):
        return (self.a, math.inf) if self.side == "right" else (-math.inf, self.a)

    def describe(self):
        return {"type": "halfline", "a": self.a, "side": self.side, "order": self.order,
                "weight": _json_value(self.weight)}


def _json_value(w):
    w = np.asarray(w)
    if w.ndim == 0:
        return [float(w.real), float(w.imag)]
    return [_json_value(x) for x in w]


def cauchy_transform_nodes(nodes, a, b, z, order=0):
    """``order!/(2 pi i) * int f(t)/(t-z)^(order+1) dt`` for all ``z``.

    ``nodes(n_panels)`` returns Gauss-Legendre nodes and ``f*w`` products.  The
    panel count adapts to the distance of each ``z`` from ``[a, b]`` so that
    near-singular points are resolved.
    """
    shape = z.shape
    z = z.ravel()
    x = z.real
    dx = np.where(x < a, a - x, np.where(x > b, x - b, 0.0))
    d = np.hypot(dx, z.imag)
    if np.any(d < COLLAR):
        bad = complex(z[np.argmin(d)])
        raise NearSingularError(f"defining function evaluated within {COLLAR:g} of [{a:g}, {b:g}] at z={bad}", bad)
    need = np.ceil((b - a) / (1.2 * d))
    npan = np.where(need <= 1, 1, 2 ** np.ceil(np.log2(np.maximum(need, 1)))).astype(np.int64)
    npan = np.minimum(npan, 2 ** 17)
    out = np.empty(z.shape, dtype=complex)
    coef = math.factorial(order) / _TWO_PI_I
    for p in np.unique(npan):
        sel = np.nonzero(npan == p)[0]
        t, fw = nodes(int(p))
        chunk = max(1, 2_000_000 // t.size)
        for s in range(0, sel.size, chunk):
            idx = sel[s:s + chunk]
            r = 1.0 / (t[None, :] - z[idx, None])
            if order:
                r = r ** (order + 1)
            out[idx] = coef * (r @ fw)
    return out.reshape(shape)


# ---------------------------------------------------------------- hyperfunctions

@dataclass(frozen=True, eq=False)
class Hyperfunction:
    """Defining-function representation of a hyperfunction.

    Parameters
    ----------
    support : Support
        Carrier; ``F`` is holomorphic off its finite part.
    F : callable, optional
        Vectorized defining function for opaque hyperfunctions; built from
        ``atoms`` otherwise.
    growth : GrowthCertificate
    atoms : tuple or None
        Structural metadata; ``None`` marks an opaque hyperfunction.
    space : ValueSpace
    min_clearance : float
        ``F`` is only available at distance at least this from the support.
    """

    support: Support
    F_opaque: object = None
    growth: GrowthCertificate = field(default_factory=GrowthCertificate.bounded)
    atoms: tuple | None = None
    space: ValueSpace = SCALAR
    name: str = ""
    min_clearance: float = 0.0

    def __post_init__(self):
        if self.atoms is None and self.F_opaque is None:
            raise ValueError("a hyperfunction needs atoms or a defining function")

    @property
    def structure(self):
        if self.atoms is None:
            return "opaque"
        if all(isinstance(a, PointMass) and a.order == 0 for a in self.atoms):
            return "point_masses"
        if all(isinstance(a, Density) and a.order == 0 for a in self.atoms):
            return "embedded_density"
        return "atoms"

    def F(self, z):
        """Evaluate the defining function; returns shape ``z.shape + space.shape``."""
        z = np.asarray(z, dtype=complex)
        flat = z.ravel()
        d = self.support.distance(flat)
        lim = max(COLLAR, self.min_clearance * (1 - 1e-9))
        if flat.size and np.any(d < lim):
            bad = complex(flat[np.argmin(d)])
            raise NearSingularError(
                f"{self.name or 'hyperfunction'}: defining function evaluated at z={bad}, "
                f"closer than {lim:g} to the support {self.support}", bad)
        if self.atoms is None:
            out = np.asarray(self.F_opaque(flat), dtype=complex)
        else:
            out = np.zeros(flat.shape + self.space.shape, dtype=complex)
            for atom in self.atoms:
                out = out + atom.F(flat)
        return out.reshape(z.shape + self.space.shape)

    __call__ = F

    # arithmetic helpers
    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(other, -1.0))

    def __neg__(self):
        return scale(self, -1.0)

    def __mul__(self, lam):
        return scale(self, lam)

    __rmul__ = __mul__

    def describe(self):
        return {"name": self.name, "support": self.support.to_json(), "structure": self.structure,
                "atoms": [a.describe() for a in self.atoms] if self.atoms is not None else None}


def _support_of_atoms(atoms):
    lo, hi = math.inf, -math.inf
    for a in atoms:
        l, h = a.bounds
        lo, hi = min(lo, l), max(hi, h)
    if lo > hi:
        return Support.empty()
    if math.isfinite(lo) and math.isfinite(hi):
        return Support.compact(lo, hi)
    if math.isfinite(lo):
        return Support.right_ray(lo)
    if math.isfinite(hi):
        return Support.left_ray(hi)
    return Support.full_line()


def _growth_of_atoms(atoms):
    if any(isinstance(a, HalfLineIndicator) for a in atoms):
        return GrowthCertificate.slowly_increasing(20, C=1.0)
    return GrowthCertificate.bounded()


def from_atoms(atoms, space: ValueSpace | None = None, name="", support=None) -> Hyperfunction:
    atoms = tuple(atoms)
    if space is None:
        space = ValueSpace.of(atoms[0].weight) if atoms else SCALAR
    for a in atoms:
        if ValueSpace.of(a.weight) != space:
            raise ValueSpaceError("atoms with different value spaces")
    sup = support if support is not None else _support_of_atoms(atoms)
    return Hyperfunction(sup, None, _growth_of_atoms(atoms), atoms, space, name)


def zero(space: ValueSpace = SCALAR, support: Support | None = None) -> Hyperfunction:
    return Hyperfunction(support or Support.empty(), None, GrowthCertificate.bounded(), (), space, "0")


def dirac(a: float, weight=1.0, name: str = "") -> Hyperfunction:
    """Point mass ``weight * delta_a`` with ``F(z) = -weight / (2 pi i (z - a))``."""
    w = _as_weight(weight)
    return from_atoms((PointMass(float(a), w, 0),), ValueSpace.of(w), name or f"dirac({a:g})")


def cauchy_embed(f, a: float, b: float, weight=1.0, breakpoints=(), name: str = "") -> Hyperfunction:
    """Embed the density ``f`` on ``[a, b]`` by its Cauchy transform.

    ``F(z) = 1/(2 pi i) * int_a^b f(t)/(t - z) dt``, computed with composite
    Gauss-Legendre panels refined near ``z``.
    """
    if not a <= b:
        raise ValueError("cauchy_embed needs a <= b")
    w = _as_weight(weight)
    atom = Density(f, float(a), float(b), w, 0, tuple(breakpoints))
    return from_atoms((atom,), ValueSpace.of(w), name or f"embed[{a:g},{b:g}]",
                      support=Support.compact(a, b))


def heaviside(a: float, weight=1.0, side: str = "right", name: str = "") -> Hyperfunction:
    """Indicator of ``[a, inf)`` (or ``(-inf, a]``) with a logarithmic defining function."""
    if side not in ("right", "left"):
        raise ValueError("side must be 'right' or 'left'")
    w = _as_weight(weight)
    return from_atoms((HalfLineIndicator(float(a), w, side),), ValueSpace.of(w),
                      name or f"heaviside({a:g},{side})")


def density_from_csv(source):
    """Read a density sampled as columns ``t,re,im``; returns ``(f, a, b, breakpoints)``.

    ``f`` interpolates linearly between samples.  ``source`` is a path or a
    file-like object.
    """
    data = np.loadtxt(source, delimiter=",", skiprows=1, ndmin=2)
    order = np.argsort(data[:, 0])
    t, re, im = data[order, 0], data[order, 1], data[order, 2]

    def f(x):
        return np.interp(x, t, re) + 1j * np.interp(x, t, im)

    return f, float(t[0]), float(t[-1]), tuple(float(x) for x in t[1:-1])


def opaque(F, support: Support, growth: GrowthCertificate | None = None,
           space: ValueSpace = SCALAR, name: str = "", min_clearance: float = 0.0) -> Hyperfunction:
    """Wrap a user-supplied vectorized defining function."""
    return Hyperfunction(support, F, growth or GrowthCertificate.bounded(), None, space, name,
                         min_clearance)


def add(h1: Hyperfunction, h2: Hyperfunction) -> Hyperfunction:
    if h1.space != h2.space:
        raise ValueSpaceError(f"cannot add values in {h1.space.shape} and {h2.space.shape}")
    sup = h1.support.hull(h2.support)
    name = f"({h1.name} + {h2.name})"
    if h1.atoms is not None and h2.atoms is not None:
        return from_atoms(h1.atoms + h2.atoms, h1.space, name, support=sup)
    g = h1.growth if h1.growth.rate >= h2.growth.rate else h2.growth
    g = GrowthCertificate(g.kind, h1.growth.C + h2.growth.C, g.n, g.tau)
    F1, F2 = h1.F, h2.F
    return Hyperfunction(sup, lambda z: F1(z) + F2(z), g, None, h1.space, name,
                         max(h1.min_clearance, h2.min_clearance))


def scale(h: Hyperfunction, lam) -> Hyperfunction:
    lam = complex(lam)
    name = f"{lam:g}*{h.name}"
    if h.atoms is not None:
        return from_atoms(tuple(a.scaled(lam) for a in h.atoms), h.space, name, support=h.support)
    F = h.F
    g = GrowthCertificate(h.growth.kind, h.growth.C * max(abs(lam), 1e-300), h.growth.n, h.growth.tau)
    return Hyperfunction(h.support, lambda z: lam * F(z), g, None, h.space, name, h.min_clearance)


def shift(h: Hyperfunction, s: float) -> Hyperfunction:
    """Translate by ``s``: defining function ``F(z - s)``, support moved by ``s``."""
    s = float(s)
    name = f"shift({h.name},{s:g})"
    sup = h.support.translate(s)
    if h.atoms is not None:
        return from_atoms(tuple(a.shifted(s) for a in h.atoms), h.space, name, support=sup)
    F = h.F
    return Hyperfunction(sup, lambda z: F(np.asarray(z) - s), h.growth, None, h.space, name,
                         h.min_clearance)


# ---------------------------------------------------------------- test functions

@dataclass(frozen=True, eq=False)
class TestFunction:
    """Holomorphic test function with declared strip index ``n``.

    ``|phi(z)| exp(|re z|/n) <= bound`` is expected on the closed neighbourhood
    ``U(K, 1/n)``.
    """

    __test__ = False  # not a pytest class

    evaluator: object
    n: int = 1
    bound: float | None = None
    name: str = ""

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return np.broadcast_to(np.asarray(self.evaluator(z), dtype=complex), z.shape)

    def sampled_bound(self, K: Support, re_max=30.0, num=400):
        """Sampled ``sup |phi| exp(|re z|/n)`` on the boundary and inside of ``U(K, 1/n)``."""
        c = 1.0 / self.n
        rp = K.real_part() or (0.0, 0.0)
        lo = max(rp[0], -re_max) - c
        hi = min(rp[1], re_max) + c
        x = np.linspace(lo, hi, num)
        y = np.linspace(-c, c, 9)
        z = (x[:, None] + 1j * y[None, :]).ravel()
        z = z[K.distance(z) <= c]
        return float(np.max(np.abs(self(z)) * np.exp(np.abs(z.real) / self.n)))


def as_test_function(phi, n=None) -> TestFunction:
    if isinstance(phi, TestFunction):
        return phi if n is None else TestFunction(phi.evaluator, n, phi.bound, phi.name)
    return TestFunction(phi, 1 if n is None else n)


def gaussian(mu=0.0, s=1.0, poly=(1.0,)) -> TestFunction:
    """``p(w) exp(-s (w - mu)^2)`` with polynomial coefficients ``poly`` (lowest first)."""
    coeffs = np.asarray(poly, dtype=complex)

    def phi(w):
        return np.polynomial.polynomial.polyval(w, coeffs) * np.exp(-s * (w - mu) ** 2)

    return TestFunction(phi, 1, None, f"gauss(mu={mu:g},s={s:g})")


# ---------------------------------------------------------------- contour integrals

def _broadcast_product(Fv, Kv, space: ValueSpace):
    """Combine ``F`` values ``(N, *S)`` with kernel values ``(N, *B)`` into ``(N, *B, *S)``."""
    nb = Kv.ndim - 1
    ns = len(space.shape)
    Fr = Fv.reshape((Fv.shape[0],) + (1,) * nb + space.shape)
    Kr = Kv.reshape(Kv.shape + (1,) * ns)
    return Fr * Kr


def contour_integral(h: Hyperfunction, kernel, clearance: float, cfg: QuadConfig | None = None,
                     ray_rate=None, tail_tol=None, support: Support | None = None) -> IntegralResult:
    """Clockwise ``int F(w) kernel(w) dw`` around the support of ``h``.

    Parameters
    ----------
    kernel : callable
        ``kernel(w)`` for ``w`` of shape ``(N,)`` returns ``(N, *B)``.
    clearance : float
        Distance of the contour from the support.
    ray_rate : callable, optional
        ``ray_rate(ray)`` gives the exponential rate of ``|kernel|`` along a
        ray; required for unbounded supports.  The growth rate of ``h`` is
        added to it.
    support : Support, optional
        Carrier to encircle instead of ``h.support`` (for instance a half-line
        containing a compact support).
    """
    cfg = cfg or QuadConfig()
    K = (support or h.support).closure()
    c = float(clearance)
    tail = 0.0
    if K.is_compact:
        path = build_contour(K, c)
    else:
        rp = K.real_part()
        ends = [abs(x) for x in (rp or ()) if math.isfinite(x)]
        path = build_contour(K, c, 1.0 / c + max(ends, default=0.0) + 2.0)
        if ray_rate is None:
            raise PreconditionError("unbounded support needs the kernel decay rate along rays")
        tail_tol = tail_tol if tail_tol is not None else 0.1 * cfg.abs_tol
        lengths = []
        for ray in path.rays:
            rate = h.growth.rate + ray_rate(ray)

            def mag(z):
                return np.max(np.abs(_broadcast_product(h.F(z), np.asarray(kernel(z)), h.space))
                              .reshape(z.size, -1), axis=1)

            new, t = ray_truncation(mag, ray, rate, tail_tol, probe_length=min(60.0, 30.0 / abs(rate)))
            lengths.append(new.R_max)
            tail += t
        path = path.with_ray_lengths(lengths)

    def integrand(w):
        return _broadcast_product(h.F(w), np.asarray(kernel(w)), h.space)

    return integrate_path(integrand, path, cfg, tail_bound=tail)


def default_clearance(h: Hyperfunction, n: int = 1) -> float:
    return max(0.5 / n, h.min_clearance * 1.05) if h.min_clearance else 0.5 / n


def pair(h: Hyperfunction, phi, n: int | None = None, clearance: float | None = None,
         cfg: QuadConfig | None = None, full_output: bool = False):
    """Duality pairing ``int_gamma F(w) phi(w) dw`` along the clockwise contour.

    Parameters
    ----------
    h : Hyperfunction
    phi : TestFunction or callable
    n : int, optional
        Strip index of ``phi``; the contour clearance defaults to ``0.5/n``.
    full_output : bool
        Return the :class:`IntegralResult` instead of the value.

    Raises
    ------
    DivergenceError
        For unbounded supports when the growth of ``F`` beats the decay of ``phi``.
    """
    phi = as_test_function(phi, n)
    if h.support.kind == "empty":
        res = IntegralResult(np.zeros(h.space.shape, dtype=complex), 0.0)
        return res if full_output else res.value
    c = clearance if clearance is not None else default_clearance(h, phi.n)
    res = contour_integral(h, phi, c, cfg, ray_rate=lambda ray: -1.0 / phi.n)
    return res if full_output else res.value


# ---------------------------------------------------------------- standard representative

class StandardRepresentative:
    """Rapidly decreasing defining function ``Psi(z) = i/(2 pi) <h, e^{-(z-w)^2}/(z-w)>``."""

    def __init__(self, h: Hyperfunction, cfg: QuadConfig | None = None):
        if not h.support.is_compact and h.support.kind != "empty":
            raise UnsupportedSupportError(f"standard representative needs a compact support, got {h.support}")
        self.h = h
        self.cfg = cfg or QuadConfig()
        self.support = h.support
        self.space = h.space
        self.growth = GrowthCertificate.type_minus_infinity(1)

    def evaluate(self, z):
        """Return values ``z.shape + S`` and the per-point quadrature error."""
        z = np.asarray(z, dtype=complex)
        flat = z.ravel()
        vals = np.zeros(flat.shape + self.space.shape, dtype=complex)
        errs = np.zeros(flat.shape)
        if self.support.kind == "empty" or flat.size == 0:
            return vals.reshape(z.shape + self.space.shape), errs.reshape(z.shape)
        d = self.support.distance(flat)
        if np.any(d < COLLAR):
            bad = complex(flat[np.argmin(d)])
            raise NearSingularError(f"standard representative evaluated on the support at z={bad}", bad)
        base = 0.5
        if self.h.min_clearance:
            base = max(base, 1.05 * self.h.min_clearance)
            if np.any(d <= 1.1 * base):
                bad = complex(flat[np.argmin(d)])
                raise NearSingularError(f"z={bad} too close to the support for this representative", bad)
        # group points by contour clearance so that every z stays outside its contour
        level = np.where(d > 2 * base, 0, np.ceil(np.log2(2 * base / d)).astype(int))
        for lev in np.unique(level):
            sel = np.nonzero(level == lev)[0]
            cw = base * 2.0 ** (-lev)
            if lev > 0:
                cw = min(cw, 0.45 * d[sel].min())
            zs = flat[sel]

            def kern(w, zs=zs):
                dd = zs[None, :] - w[:, None]
                return np.exp(-dd * dd) / dd

            res = contour_integral(self.h, kern, cw, self.cfg)
            vals[sel] = (1j / (2 * np.pi)) * res.value
            errs[sel] = res.error / (2 * np.pi)
        return vals.reshape(z.shape + self.space.shape), errs.reshape(z.shape)

    def __call__(self, z):
        return self.evaluate(z)[0]


def standard_representative(h: Hyperfunction, cfg: QuadConfig | None = None) -> StandardRepresentative:
    return StandardRepresentative(h, cfg)


# ---------------------------------------------------------------- boundary jumps

def _neville_to_zero(eps, vals):
    """Polynomial extrapolation of ``vals(eps)`` to ``eps = 0``; returns the diagonal."""
    n = len(eps)
    T = [np.asarray(v, dtype=complex) for v in vals]
    diag = [T[0]]
    for k in range(1, n):
        for i in range(n - 1, k - 1, -1):
            T[i] = T[i] + (T[i] - T[i - 1]) * eps[i] / (eps[i - k] - eps[i])
        diag.append(T[k])
    return diag


def boundary_jump(h: Hyperfunction, x: float, eps_sequence=None, tol: float = 1e-7):
    """Extrapolated limit of ``F(x + i eps) - F(x - i eps)`` as ``eps -> 0``.

    Raises
    ------
    DivergingJumpError
        If successive extrapolants disagree (for instance at a point mass).
    """
    x = float(x)
    ends = []
    for atom in (h.atoms or ()):
        ends += [p for p in atom.bounds if math.isfinite(p)]
    rp = h.support.real_part()
    if rp is not None:
        ends += [p for p in rp if math.isfinite(p)]
    d_end = min((abs(x - p) for p in ends), default=1.0)
    if eps_sequence is None:
        e0 = min(0.05, 0.25 * d_end) if d_end > 1e-6 else 0.05
        eps_sequence = e0 * 2.0 ** -np.arange(7)
    eps = np.asarray(eps_sequence, dtype=float)
    z = np.concatenate([x + 1j * eps, x - 1j * eps])
    v = h.F(z)
    m = eps.size
    jumps = [v[i] - v[m + i] for i in range(m)]
    diag = _neville_to_zero(list(eps), jumps)
    last, prev = diag[-1], diag[-2]
    dev = float(np.max(np.abs(last - prev)))
    scale = max(1.0, float(np.max(np.abs(last))))
    if not np.all(np.isfinite(last)) or dev > tol * scale:
        raise DivergingJumpError(f"boundary jump at x={x:g} does not converge (last change {dev:.3g})",
                                 samples=jumps)
    return last


# ---------------------------------------------------------------- seminorm sampling

@dataclass(frozen=True)
class SeminormReport:
    space_tag: str
    k: int
    grid: str
    sampled_sup: float
    growth_slope: float
    verdict: str = ""
    n_points: int = 0

    def to_json(self):
        return {"tag": self.space_tag, "k": self.k, "sup": self.sampled_sup,
                "slope": self.growth_slope, "verdict": self.verdict, "grid": self.grid,
                "n_points": self.n_points}


def envelope_slope(r, logw, nbins=24, start_fraction=0.25):
    """Least-squares slope of the per-bin maximum of ``logw`` against ``r``.

    Only bins beyond ``start_fraction`` of the largest ``r`` enter the fit.
    Returns 0 when fewer than two bins carry finite values.
    """
    r = np.asarray(r, dtype=float)
    logw = np.asarray(logw, dtype=float)
    ok = np.isfinite(logw)
    if ok.sum() < 2:
        return 0.0
    r, logw = r[ok], logw[ok]
    rmax = r.max()
    rmin = max(r.min(), start_fraction * rmax)
    if rmax <= rmin:
        return 0.0
    edges = np.linspace(rmin, rmax, nbins + 1)
    centers, peaks = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        sel = (r >= lo) & (r <= hi)
        if sel.any():
            centers.append(r[sel][np.argmax(logw[sel])])
            peaks.append(logw[sel].max())
    if len(centers) < 2:
        return 0.0
    slope = np.polyfit(np.asarray(centers), np.asarray(peaks), 1)[0]
    return float(slope)


def strip_grid(K: Support, n: int, re_max: float = 50.0, n_re: int = 201, n_im: int = 9):
    """Grid of points inside ``S_n(K)`` with ``|re z| <= re_max``."""
    x = np.linspace(-re_max, re_max, n_re)
    y = np.linspace(-n, n, n_im + 2)[1:-1]
    z = (x[:, None] + 1j * y[None, :]).ravel()
    return z[in_strip(z, K, n)]


def seminorm_estimate(F, K: Support, n: int, grid=None, space: ValueSpace | None = None,
                      tag: str = "slowly_increasing") -> SeminormReport:
    """Sampled ``sup |F(z)| exp(-|re z|/n)`` over grid points of ``S_n(K)``.

    The growth slope is the fitted exponential rate of the weighted values
    against ``|re z|``; a positive slope flags a violated certificate.
    """
    z = strip_grid(K, n) if grid is None else np.asarray(grid, dtype=complex).ravel()
    if z.size == 0:
        raise PreconditionError("empty sampling grid")
    if not np.all(in_strip(z, K, n)):
        raise PreconditionError("grid points must lie in the strip S_n(K)")
    with np.errstate(over="ignore", invalid="ignore"):
        vals = np.asarray(F(z))
    space = space or ValueSpace(vals.shape[1:])
    mag = space.seminorm(vals).reshape(z.size)
    with np.errstate(divide="ignore", over="ignore"):
        logw = np.log(mag) - np.abs(z.real) / n
    sup = float(np.max(np.exp(logw))) if np.any(mag > 0) else 0.0
    slope = envelope_slope(np.abs(z.real), logw)
    verdict = "consistent" if (sup == 0.0 or slope <= 1e-3) else "violated"
    desc = f"{z.size} points in S_{n}({K}), |re z|<={np.max(np.abs(z.real)):g}"
    return SeminormReport(tag, n, desc, sup, slope, verdict, int(z.size))
