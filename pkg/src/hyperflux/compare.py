"""Side-by-side asymptotic Laplace transforms and their consistency checks.

Three routes to the Laplace transform of a hyperfunction supported near
``[0, inf]`` are compared: the contour transform of a rapidly decreasing
(type minus infinity) representative, the transform along a two-ray path
``Gamma_a`` opening to the right, and direct real-axis quadrature of a
density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad_vec

from .errors import PreconditionError, UnsupportedSupportError
from .geometry import Support, build_gamma_komatsu
from .hyperfn import Hyperfunction, StandardRepresentative, ValueSpace, cauchy_embed, contour_integral, opaque
from .quadrature import GrowthCertificate, QuadConfig, integrate_path, ray_truncation
from .transforms import GermSpaceTag, TransformFunction, auto_clearance, germ_equivalent_heuristic, laplace


# ---------------------------------------------------------------- sector grids

@dataclass(frozen=True)
class SectorGrid:
    """Nodes ``rho exp(i psi)`` with ``r <= rho <= R`` and ``|psi| <= phi``."""

    r: float
    phi: float
    R: float = 40.0
    n_rho: int = 12
    n_psi: int = 7
    nodes: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError("sector radius r must be positive")
        if not 0 < self.phi < math.pi / 2:
            raise ValueError("sector aperture phi must lie in (0, pi/2)")
        if not self.R >= self.r:
            raise ValueError("truncation radius R must be at least r")
        rho = np.geomspace(self.r, self.R, self.n_rho)
        psi = np.linspace(-self.phi, self.phi, self.n_psi)
        z = (rho[:, None] * np.exp(1j * psi[None, :])).ravel()
        object.__setattr__(self, "nodes", z)

    def contains(self, z):
        z = np.asarray(z, dtype=complex)
        return (np.abs(z) >= self.r * (1 - 1e-12)) & (np.abs(np.angle(z)) <= self.phi * (1 + 1e-12))


# ---------------------------------------------------------------- rapidly decreasing representatives

def to_type_minus_infinity(h: Hyperfunction, cfg: QuadConfig | None = None) -> StandardRepresentative:
    """Gaussian standard representative of a compactly supported hyperfunction.

    Raises
    ------
    UnsupportedSupportError
        For non-compact supports, which have no constructive representative here.
    """
    K = h.support.closure()
    if not (K.is_compact or K.kind == "empty"):
        raise UnsupportedSupportError(f"no type -inf representative is constructed for support {K}")
    return StandardRepresentative(h, cfg)


def _as_decreasing(g, support: Support, n: int):
    """Wrap a representative as an opaque hyperfunction over ``support``."""
    growth = getattr(g, "growth", None)
    if growth is None or growth.kind not in ("type_minus_infinity", "entire"):
        raise PreconditionError("the Langenbruch transform needs a type -inf certificate on the representative")
    if isinstance(g, StandardRepresentative):
        F = g.__call__
        space = g.space
    else:
        F = g
        space = getattr(g, "space", ValueSpace(()))
    return opaque(F, support, GrowthCertificate.type_minus_infinity(n), space, "representative")


def langenbruch_laplace(g, support: Support | None = None, clearance: float | None = None,
                        cfg: QuadConfig | None = None, decay: int = 8) -> TransformFunction:
    """``z -> int_gamma g(w) exp(-z w) dw`` around ``[0, inf]`` for a type -inf ``g``.

    Parameters
    ----------
    g : StandardRepresentative or callable
        Must carry a ``growth`` certificate of kind ``type_minus_infinity``
        (or ``entire``).
    support : Support
        ``[0, inf]`` (default) or ``{+inf}``.
    decay : int
        Working exponential decay rate of ``g`` used for ray truncation.
    """
    cfg = cfg or QuadConfig.from_env()
    support = support or Support.right_ray(0.0)
    if support.kind not in ("right_ray", "plus_inf"):
        raise UnsupportedSupportError(f"Langenbruch transform is taken over [0, inf] or {{inf}}, got {support}")
    gs = getattr(g, "support", None)
    if isinstance(gs, Support) and gs.kind not in ("empty",):
        rp = gs.closure().real_part()
        lo = support.real_part()[0] if support.kind == "right_ray" else math.inf
        if rp is None or rp[0] < lo:
            raise PreconditionError(f"representative support {gs} is not inside {support}")
    h = _as_decreasing(g, support, decay)

    def ev(z):
        vals = np.empty(z.shape + h.space.shape, dtype=complex)
        errs = np.empty(z.shape)
        if getattr(g, "support", None) is not None and g.support.kind == "empty":
            vals[:] = 0
            errs[:] = 0
            return vals, errs
        c = np.full(z.shape, float(clearance)) if clearance is not None else auto_clearance(z)
        for cc in np.unique(c):
            sel = np.nonzero(c == cc)[0]
            zs = z[sel]

            def kernel(w, zs=zs):
                return np.exp(-w[:, None] * zs[None, :])

            def rate(ray, zs=zs):
                return float(np.max(-(ray.direction * zs).real))

            res = contour_integral(h, kernel, float(cc), cfg, ray_rate=rate)
            vals[sel] = res.value
            errs[sel] = res.error
        return vals, errs

    return TransformFunction(ev, "entire", "langenbruch_laplace", h.space, GermSpaceTag("LG_zero_inf"),
                             (cfg.key(), clearance))


# ---------------------------------------------------------------- two-ray path transform

@dataclass
class SampledValues:
    """Values at nodes with per-node error estimates and divergence flags."""

    nodes: np.ndarray
    values: np.ndarray
    errors: np.ndarray
    flagged: np.ndarray

    def to_json(self):
        return [{"node": [float(z.real), float(z.imag)],
                 "value": None if f else [float(np.real(v).item()), float(np.imag(v).item())]
                 if np.ndim(v) == 0 else None,
                 "err": float(e), "flagged": bool(f)}
                for z, v, e, f in zip(self.nodes, self.values, self.errors, self.flagged)]


def komatsu_path_angles(zeta):
    """Ray angles ``(alpha, beta)`` giving decay ``cos(pi/4 + |psi|/2)|zeta|`` on both rays."""
    psi = np.angle(zeta)
    alpha = np.clip(-np.pi / 4 - psi / 2, -np.pi / 2 + 1e-3, np.pi / 2 - 1e-3)
    beta = np.clip(np.pi / 4 - psi / 2, -np.pi / 2 + 1e-3, np.pi / 2 - 1e-3)
    return alpha, beta


def komatsu_laplace(F, a: float, zetas, growth: GrowthCertificate | None = None,
                    clearance: float | None = None, alpha: float | None = None, beta: float | None = None,
                    cfg: QuadConfig | None = None, space: ValueSpace | None = None) -> SampledValues:
    """``zeta -> int_{Gamma_a} F(z) exp(-z zeta) dz`` along the two-ray path around ``[a, inf)``.

    The path comes in along the ray of angle ``alpha`` (below the axis) to the
    vertex ``a - clearance`` and leaves along the ray of angle ``beta``; this
    orientation gives ``+1`` for ``F = -1/(2 pi i z)``.  Nodes where the
    combined exponent on a ray is not negative are flagged and get NaN.

    Parameters
    ----------
    F : callable or Hyperfunction
        Vectorized function holomorphic off ``[a, inf)``.
    growth : GrowthCertificate, optional
        Exponential type of ``F`` in the sector (default bounded).
    alpha, beta : float, optional
        Fixed ray angles; by default chosen per node from ``arg zeta``.
    """
    cfg = cfg or QuadConfig.from_env()
    growth = growth or getattr(F, "growth", None) or GrowthCertificate.bounded()
    if growth.kind == "type_minus_infinity":
        growth = GrowthCertificate.bounded(growth.C)
    tau = growth.rate
    Fv = F.F if isinstance(F, Hyperfunction) else F
    if space is None:
        space = F.space if isinstance(F, Hyperfunction) else ValueSpace(())
    zetas = np.asarray(zetas, dtype=complex).ravel()
    vals = np.full(zetas.shape + space.shape, np.nan + 0j)
    errs = np.full(zetas.shape, np.nan)
    flagged = np.zeros(zetas.shape, dtype=bool)
    al, be = komatsu_path_angles(zetas)
    if alpha is not None:
        al = np.full(zetas.shape, float(alpha))
    if beta is not None:
        be = np.full(zetas.shape, float(beta))
    c = np.full(zetas.shape, float(clearance)) if clearance is not None else auto_clearance(zetas)
    # exponential rate of the integrand along each ray
    r_in = tau - (np.exp(1j * al) * zetas).real
    r_out = tau - (np.exp(1j * be) * zetas).real
    flagged = (r_in >= 0) | (r_out >= 0)
    keys = np.stack([al, be, c], axis=1)
    for key in np.unique(keys[~flagged], axis=0):
        sel = np.nonzero((keys == key).all(axis=1) & ~flagged)[0]
        zs = zetas[sel]
        A, B, cc = float(key[0]), float(key[1]), float(key[2])
        path = build_gamma_komatsu(a, a - cc, A, B, 1.0)

        def integrand(z, zs=zs):
            f = np.asarray(Fv(z))
            k = np.exp(-z[:, None] * zs[None, :])
            return f.reshape((z.size, 1) + space.shape) * k.reshape(k.shape + (1,) * len(space.shape))

        def mag(z, zs=zs):
            f = space.seminorm(np.asarray(Fv(z))).reshape(z.size)
            return f * np.max(np.abs(np.exp(-z[:, None] * zs[None, :])), axis=1)

        tail = 0.0
        lengths = []
        for ray, rate in zip(path.rays, (float(r_in[sel].max()), float(r_out[sel].max()))):
            new, t = ray_truncation(mag, ray, rate, 0.1 * cfg.abs_tol, C_declared=growth.C,
                                    probe_length=min(60.0, 30.0 / abs(rate)))
            lengths.append(new.R_max)
            tail += t
        res = integrate_path(integrand, path.with_ray_lengths(lengths), cfg, tail_bound=tail)
        vals[sel] = res.value
        errs[sel] = res.error
    return SampledValues(zetas, vals, errs, flagged)


# ---------------------------------------------------------------- classical oracle

def classical_laplace_oracle(f, T: float, zetas, tol: float = 1e-12, breakpoints=()):
    """``int_0^T f(t) exp(-t zeta) dt`` by adaptive real quadrature (``T`` may be ``inf``).

    Returns ``(values, errors)``.
    """
    zetas = np.asarray(zetas, dtype=complex).ravel()
    if zetas.size == 0:
        return np.zeros(0, dtype=complex), np.zeros(0)

    def integrand(t):
        return np.asarray(f(np.asarray(t, dtype=float)), dtype=complex) * np.exp(-t * zetas)

    pts = [p for p in breakpoints if 0 < p < T] if math.isfinite(T) else None
    kw = {"points": pts} if pts else {}
    val, err = quad_vec(integrand, 0.0, T, epsabs=tol, epsrel=tol, limit=2000, **kw)
    return np.asarray(val), np.full(zetas.shape, float(err))


# ---------------------------------------------------------------- consistency reports

def _cjson(v):
    v = complex(v)
    return [v.real, v.imag]


def consistency_I0(h: Hyperfunction, k_max: int = 3, R: float = 40.0, tol: float = 1e-6,
                   nodes=None, cfg: QuadConfig | None = None) -> dict:
    """Compare the Langenbruch transform of the standard representative with ``laplace(h)``.

    The difference must lie in the germs at ``+inf`` (tested with the
    heuristic germ test on ``LO_plus_inf``).  ``h`` needs compact support in
    ``[0, inf)``.
    """
    K = h.support.closure()
    if K.kind != "empty" and not (K.is_compact and K.a >= 0):
        raise PreconditionError(f"consistency_I0 needs a compact support inside [0, inf), got {K}")
    ours = laplace(h, side="compact", cfg=cfg)
    lan = langenbruch_laplace(to_type_minus_infinity(h, cfg), cfg=cfg)
    verdict, reports = germ_equivalent_heuristic(lan, ours, GermSpaceTag("LO_plus_inf"), k_max, R, tol)
    if nodes is None:
        nodes = np.linspace(0.5, 20, 8) + 0j
    nodes = np.asarray(nodes, dtype=complex)
    vo, eo = ours.evaluate(nodes)
    vl, el = lan.evaluate(nodes)
    entries = [{"node": _cjson(z), "value_ours": _cjson(a), "value_lan": _cjson(b),
                "max_pairwise_dev": float(abs(a - b))} for z, a, b in zip(nodes, vo, vl)]
    return {"check": "I0", "object": h.name, "germ_verdict": verdict,
            "germ_reports": [r.to_json() for r in reports], "nodes": entries,
            "max_pairwise_dev": float(np.max(np.abs(vo - vl))) if nodes.size else 0.0,
            "passed": verdict == "equivalent"}


def consistency_chain(f, T: float, zetas=None, breakpoints=(), tol: float = 1e-6, germ_k_max: int = 0,
                      R: float = 40.0, cfg: QuadConfig | None = None) -> dict:
    """Agreement of ``laplace(embed f)``, the two-ray transform and real quadrature.

    For a density on ``[0, T]`` all three are holomorphic on ``re zeta > 0`` and
    must agree pointwise.  With ``germ_k_max > 0`` pairwise germ reports on
    ``LO_plus_inf`` are added.
    """
    cfg = cfg or QuadConfig.from_env()
    if zetas is None:
        x = np.linspace(0.5, 20, 12)
        y = np.linspace(-5, 5, 5)
        zetas = (x[:, None] + 1j * y[None, :]).ravel()
    zetas = np.asarray(zetas, dtype=complex).ravel()
    h = cauchy_embed(f, 0.0, T, breakpoints=breakpoints, name="density")
    ours_tf = laplace(h, side="compact", cfg=cfg)
    vo, eo = ours_tf.evaluate(zetas)
    kom = komatsu_laplace(h, 0.0, zetas, cfg=cfg)
    vc, ec = classical_laplace_oracle(f, T, zetas, breakpoints=breakpoints)
    vk = kom.values
    dev = np.nanmax(np.stack([np.abs(vo - vk), np.abs(vo - vc), np.abs(vk - vc)]), axis=0)
    entries = [{"node": _cjson(z), "value_ours": _cjson(a), "value_kom": _cjson(b) if not fl else None,
                "value_classical": _cjson(c), "max_pairwise_dev": float(d)}
               for z, a, b, c, d, fl in zip(zetas, vo, vk, vc, dev, kom.flagged)]
    report = {"check": "chain", "T": T, "nodes": entries, "max_pairwise_dev": float(np.nanmax(dev)),
              "flagged_nodes": int(kom.flagged.sum()),
              "passed": bool(np.nanmax(dev) <= tol and not kom.flagged.any())}
    if germ_k_max:
        def kom_fn(z):
            return komatsu_laplace(h, 0.0, z, cfg=cfg).values

        def cls_fn(z):
            return classical_laplace_oracle(f, T, z, breakpoints=breakpoints)[0]

        tag = GermSpaceTag("LO_plus_inf")
        germ = {}
        for name, g1, g2 in (("ours_kom", ours_tf, kom_fn), ("ours_classical", ours_tf, cls_fn),
                             ("kom_classical", kom_fn, cls_fn)):
            verdict, reps = germ_equivalent_heuristic(g1, g2, tag, germ_k_max, R, tol)
            germ[name] = {"verdict": verdict, "reports": [r.to_json() for r in reps]}
        report["germ_verdicts"] = germ
    return report
