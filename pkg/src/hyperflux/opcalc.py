"""Operational calculus: differential operators, multipliers and convolutions.

Operators act on the atoms of structured hyperfunctions in closed form and on
opaque defining functions through numerical Cauchy-circle derivatives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NearSingularError, TruncationError, UnsupportedSupportError
from .geometry import build_contour
from .hyperfn import COLLAR, Density, HalfLineIndicator, Hyperfunction, PointMass, from_atoms, opaque
from .quadrature import GrowthCertificate, QuadConfig, integrate_path
from .transforms import TransformFunction, fourier_compact, intersect_domains, inverse_fourier_compact


# ---------------------------------------------------------------- symbols

@dataclass(frozen=True)
class EntireSymbol:
    """Entire symbol ``P(x) = sum_k c_k x^k / k!`` given by its derivatives ``c_k = P^(k)(0)``.

    Parameters
    ----------
    coeffs : sequence of complex
        ``c_0, ..., c_M``; higher derivatives are taken as zero.
    eps_list : tuple of float
        Values of ``eps`` on which the exponential-type-0 bound
        ``|c_k| <= C eps^k`` is spot-checked.
    polynomial : bool
        ``coeffs`` are exact (no truncation).
    """

    coeffs: tuple
    eps_list: tuple = (0.5, 0.25, 0.1)
    polynomial: bool = True

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))

    @classmethod
    def from_polynomial(cls, poly, eps_list=(0.5, 0.25, 0.1)):
        """Symbol of ``sum_k poly[k] x^k`` (coefficients lowest first)."""
        c = [complex(a) * math.factorial(k) for k, a in enumerate(poly)]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        return cls(tuple(c), tuple(eps_list), True)

    @classmethod
    def from_taylor(cls, taylor, eps_list=(0.5, 0.25, 0.1)):
        """Truncated series ``sum_k taylor[k] x^k`` of a transcendental entire function."""
        c = [complex(a) * math.factorial(k) for k, a in enumerate(taylor)]
        return cls(tuple(c), tuple(eps_list), False)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def taylor(self):
        return np.array([c / math.factorial(k) for k, c in enumerate(self.coeffs)], dtype=complex)

    def __call__(self, x):
        return np.polynomial.polynomial.polyval(np.asarray(x, dtype=complex), self.taylor)

    def derivative(self, j: int) -> "EntireSymbol":
        return EntireSymbol(self.coeffs[j:] or (0.0,), self.eps_list, self.polynomial)

    def substituted(self, lam) -> "EntireSymbol":
        """Symbol of ``x -> P(lam x)``."""
        lam = complex(lam)
        return EntireSymbol(tuple(c * lam ** k for k, c in enumerate(self.coeffs)), self.eps_list,
                            self.polynomial)

    def type_zero_constants(self):
        """``max_k |c_k| / eps^k`` for every declared ``eps``."""
        c = np.abs(np.asarray(self.coeffs))
        k = np.arange(c.size)
        return {eps: float(np.max(c / eps ** k)) for eps in self.eps_list}

    def passes_type_zero_check(self) -> bool:
        """Spot check: ``|c_k| / eps^k`` must not increase over the last terms."""
        if self.polynomial:
            return True
        c = np.abs(np.asarray(self.coeffs))
        k = np.arange(c.size)
        for eps in self.eps_list:
            r = c / eps ** k
            tail = r[-max(3, r.size // 4):]
            if tail[-1] > tail.max() * (1 - 1e-12) and tail[-1] > r.max() * 1e-3:
                return False
        return True

    def truncation_tail(self, r: float) -> float:
        """Geometric tail bound ``C (eps/r)^(M+1) / (1 - eps/r)`` for Cauchy radius ``r``.

        Uses the smallest declared ``eps`` below ``r``; relative to ``sup |F|``
        on the Cauchy circle.  Zero for polynomials.
        """
        if self.polynomial:
            return 0.0
        consts = self.type_zero_constants()
        best = math.inf
        M = self.degree
        for eps, C in consts.items():
            q = eps / r
            if q < 1:
                best = min(best, C * q ** (M + 1) / (1 - q))
        return best


def as_symbol(P) -> EntireSymbol:
    if isinstance(P, EntireSymbol):
        return P
    return EntireSymbol.from_polynomial(P)


# ---------------------------------------------------------------- Cauchy-circle derivatives

def taylor_coefficients(F, z, r, kmax: int, n_nodes: int = 64):
    """Taylor coefficients ``F^(k)(z)/k!`` for ``k <= kmax`` by the trapezoid rule on a circle.

    Returns an array of shape ``(kmax+1,) + F(z).shape``.
    """
    z = np.asarray(z, dtype=complex).ravel()
    r = np.broadcast_to(np.asarray(r, dtype=float), z.shape)
    N = max(n_nodes, 2 * kmax + 8)
    th = 2 * np.pi * np.arange(N) / N
    pts = z[None, :] + r[None, :] * np.exp(1j * th)[:, None]
    vals = np.asarray(F(pts.ravel()))
    S = vals.shape[1:]
    vals = vals.reshape((N, z.size) + S)
    coef = np.fft.fft(vals, axis=0)[:kmax + 1] / N
    scale = r[None, :] ** np.arange(kmax + 1)[:, None]
    return coef / scale.reshape(scale.shape + (1,) * len(S))


# ---------------------------------------------------------------- differential operators

def _derivative_atom(atom, k):
    if isinstance(atom, (PointMass, Density, HalfLineIndicator)):
        kw = dict(atom.__dict__)
        kw["order"] = atom.order + k
        kw.pop("cache", None)
        return type(atom)(**kw)
    raise UnsupportedSupportError(f"no closed-form derivative for {atom!r}")


def apply_P_deriv(h: Hyperfunction, P, M: int | None = 32, side: str = "fourier", tol: float = 1e-8,
                  radius: float | None = None) -> Hyperfunction:
    """Apply ``P(-i d/dz)`` (``side='fourier'``) or ``P(d/dz)`` (``side='laplace'``).

    Afterwards ``fourier(result) = P * fourier(h)`` respectively
    ``laplace(result) = P * laplace(h)``.  Structured hyperfunctions gain
    derivative orders on their atoms; opaque ones are differentiated on Cauchy
    circles of radius ``radius`` (default a quarter of the distance to the
    support, capped at 0.25).

    Raises
    ------
    TruncationError
        If a non-polynomial symbol's tail bound exceeds ``tol``.
    """
    P = as_symbol(P)
    if side == "laplace":
        P = P.substituted(1j)
    elif side != "fourier":
        raise ValueError("side must be 'fourier' or 'laplace'")
    coeffs = list(P.coeffs[: (M + 1) if M is not None else None])
    sym = EntireSymbol(tuple(coeffs), P.eps_list, P.polynomial and len(coeffs) == len(P.coeffs))
    # operator weights c_k (-i)^k / k!
    ops = [(k, c * (-1j) ** k / math.factorial(k)) for k, c in enumerate(coeffs) if c != 0]
    r_ref = radius if radius is not None else 0.25
    tail = sym.truncation_tail(r_ref)
    if tail > tol:
        raise TruncationError(f"symbol truncated at M={sym.degree} leaves a tail bound {tail:.3g} > {tol:g}")
    name = f"P(-i d)[{h.name}]" if side == "fourier" else f"P(d)[{h.name}]"
    if h.atoms is not None:
        atoms = [_derivative_atom(a, k).scaled(w) for k, w in ops for a in h.atoms]
        out = from_atoms(atoms, h.space, name, support=h.support)
    else:
        kmax = max((k for k, _ in ops), default=0)
        F = h.F
        support = h.support

        def G(z):
            d = support.distance(z)
            r = np.minimum(radius if radius is not None else 0.25, 0.25 * d)
            a = taylor_coefficients(F, z, r, kmax)
            out = np.zeros(a.shape[1:], dtype=complex)
            for k, w in ops:
                out = out + w * math.factorial(k) * a[k]
            return out

        out = opaque(G, h.support, h.growth, h.space, name, h.min_clearance * 1.5)
    object.__setattr__(out, "truncation_tail", tail)
    return out


def _poly_derivative_values(P: EntireSymbol, j: int, x):
    return P.derivative(j)(x)


def multiply_entire(h: Hyperfunction, P) -> Hyperfunction:
    """Multiply by the entire function ``P``: defining function ``P(z) F(z)``.

    Point masses and densities are rewritten with
    ``P delta_a^(k) = sum_j (-1)^j C(k, j) P^(j)(a) delta_a^(k-j)``.
    """
    P = as_symbol(P)
    name = f"P*{h.name}"
    if h.atoms is not None and all(isinstance(a, (PointMass, Density)) for a in h.atoms):
        atoms = []
        for a in h.atoms:
            for j in range(a.order + 1):
                coef = (-1) ** j * math.comb(a.order, j)
                if isinstance(a, PointMass):
                    v = complex(_poly_derivative_values(P, j, a.location))
                    if v != 0:
                        atoms.append(PointMass(a.location, a.weight * coef * v, a.order - j))
                else:
                    Pj = P.derivative(j)
                    f = a.f
                    atoms.append(Density(lambda t, f=f, Pj=Pj: Pj(t) * f(t), a.a, a.b, a.weight * coef,
                                         a.order - j, a.breakpoints))
        return from_atoms(atoms, h.space, name, support=h.support)
    F = h.F

    def G(z):
        z = np.asarray(z, dtype=complex)
        p = P(z)
        return p.reshape(p.shape + (1,) * len(h.space.shape)) * F(z)

    return opaque(G, h.support, h.growth, h.space, name, h.min_clearance)


def transform_P_i_deriv(g: TransformFunction, P, radius: float = 0.5, n_nodes: int = 64) -> TransformFunction:
    """``P(i d/dzeta) g`` evaluated with Cauchy-circle derivatives of ``g``."""
    P = as_symbol(P)
    ops = [(k, c * (1j) ** k) for k, c in enumerate(P.coeffs) if c != 0]
    kmax = max((k for k, _ in ops), default=0)

    def ev(zeta):
        N = max(n_nodes, 2 * kmax + 8)
        th = 2 * np.pi * np.arange(N) / N
        pts = zeta[None, :] + radius * np.exp(1j * th)[:, None]
        v, e = g.evaluate(pts.ravel())
        S = g.space.shape
        coef = np.fft.fft(v.reshape((N, zeta.size) + S), axis=0)[:kmax + 1] / N
        emax = e.reshape(N, zeta.size).max(axis=0)
        out = np.zeros((zeta.size,) + S, dtype=complex)
        err = np.zeros(zeta.shape)
        for k, c in ops:
            # coef[k] / radius^k = g^(k)/k!, so c_k/k! (i d)^k g = c_k i^k coef[k] / radius^k
            out = out + c * coef[k] / radius ** k
            err = err + abs(c) * emax / radius ** k
        return out, err

    return TransformFunction(ev, g.domain, f"P(i d)[{g.provenance}]", g.space, None, g.cfg_key,
                             divergent=g.divergent)


def transform_multiplier(g: TransformFunction, P) -> TransformFunction:
    """Pointwise ``P(zeta) g(zeta)``."""
    P = as_symbol(P)
    return g.multiplied(P, "P")


# ---------------------------------------------------------------- convolutions

def _conv_clearance(d):
    """Contour clearance ``1/(2n)`` with ``n`` the smallest index keeping ``z`` outside ``U(K, 1/n)``."""
    n = np.maximum(1, np.floor(1.0 / d) + 1).astype(int)
    return n, 0.5 / n


def convolve_contour(h1: Hyperfunction, h2: Hyperfunction, cfg: QuadConfig | None = None) -> Hyperfunction:
    """Convolution with defining function ``z -> int_gamma F1(w) F2(z - w) dw``.

    ``gamma`` is the clockwise contour around the compact support of ``h1``
    with clearance ``1/(2n)``, where ``n`` is chosen per evaluation point so
    that ``z - gamma`` stays outside the support of ``h2``.
    """
    cfg = cfg or QuadConfig()
    K1 = h1.support.closure()
    if not K1.is_compact:
        raise UnsupportedSupportError(f"the first factor must be compactly supported, got {K1}")
    sup = K1.minkowski(h2.support.closure())
    space = h1.space.product_space(h2.space)
    name = f"({h1.name} (*) {h2.name})"
    if h1.atoms is not None and h2.atoms is not None and \
            all(isinstance(a, PointMass) and a.order == 0 for a in h1.atoms + h2.atoms):
        atoms = [PointMass(a.location + b.location, h1.space.product(a.weight, h2.space, b.weight), 0)
                 for a in h1.atoms for b in h2.atoms]
        return from_atoms(atoms, space, name, support=sup)
    m1, m2 = h1.min_clearance, h2.min_clearance
    min_clear = (2 * m1 + m2) * 1.05 if (m1 or m2) else 0.0
    F1, F2 = h1.F, h2.F
    S2 = h2.space.shape

    def G(z):
        z = np.asarray(z, dtype=complex).ravel()
        out = np.empty(z.shape + space.shape, dtype=complex)
        d = sup.distance(z)
        if np.any(d < COLLAR):
            bad = complex(z[np.argmin(d)])
            raise NearSingularError(f"{name}: evaluated on the support at z={bad}", bad)
        n, c = _conv_clearance(d)
        c = np.maximum(c, 1.05 * m1) if m1 else c
        if np.any(d - c < max(m2, COLLAR)):
            bad = complex(z[np.argmin(d - c)])
            raise NearSingularError(f"{name}: z={bad} too close to the support for the convolution contour", bad)
        for cc in np.unique(c):
            sel = np.nonzero(c == cc)[0]
            zs = z[sel]
            path = build_contour(K1, float(cc))

            def integrand(w, zs=zs):
                f1 = F1(w)
                arg = zs[None, :] - w[:, None]
                f2 = F2(arg.ravel()).reshape(arg.shape + S2)
                f1 = f1.reshape((w.size, 1) + h1.space.shape)
                return h1.space.product(f1, h2.space, f2)

            out[sel] = integrate_path(integrand, path, cfg).value
        return out

    g = h2.growth
    return opaque(G, sup, GrowthCertificate(g.kind, g.C * max(h1.growth.C, 1.0), g.n, g.tau), space, name,
                  min_clear)


def transform_product(g1: TransformFunction, g2: TransformFunction) -> TransformFunction:
    """Pointwise product on the common domain; supports in the tags add."""
    dom = intersect_domains(g1.domain, g2.domain)
    space = g1.space.product_space(g2.space)
    D = max(g1.space.product_constant, g2.space.product_constant)

    def ev(zeta):
        v1, e1 = g1.evaluate(zeta)
        v2, e2 = g2.evaluate(zeta)
        val = g1.space.product(v1, g2.space, v2)
        n1 = g1.space.seminorm(v1).reshape(zeta.shape)
        n2 = g2.space.seminorm(v2).reshape(zeta.shape)
        err = D * (e1 * n2 + e2 * n1 + e1 * e2)
        return val, err

    tag = g1.tag.combine(g2.tag) if (g1.tag is not None and g2.tag is not None) else None
    return TransformFunction(ev, dom, f"({g1.provenance} x {g2.provenance})", space, tag,
                             g1.cfg_key + g2.cfg_key, divergent=g1.divergent or g2.divergent)


def convolve_transform(h1: Hyperfunction, h2: Hyperfunction, cfg: QuadConfig | None = None,
                       tol: float = 1e-9) -> Hyperfunction:
    """Convolution by inverting the product of the compact Fourier transforms."""
    for h in (h1, h2):
        if not h.support.closure().is_compact:
            raise UnsupportedSupportError(f"transform-side convolution needs compact supports, got {h.support}")
    g = transform_product(fourier_compact(h1, cfg=cfg), fourier_compact(h2, cfg=cfg))
    K = h1.support.closure().minkowski(h2.support.closure())
    out = inverse_fourier_compact(g, K.a, K.b, tol=tol)
    object.__setattr__(out, "name", f"({h1.name} * {h2.name})")
    return out

