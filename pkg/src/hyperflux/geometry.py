"""Supports on the extended real line, their neighbourhoods and integration paths.

A support is an interval or point of the extended line.  The neighbourhood
``U(K, c)`` of a support is the set of points at distance less than ``c`` from
its finite part, together with the half strips ``]1/c, inf[ + i]-c, c[`` (and
its mirror image) whenever the support contains an infinite endpoint.  All
contours built here run clockwise around the support along the boundary of
that neighbourhood.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegeneratePathError, UnsupportedSupportError

KINDS = (
    "empty",
    "compact",
    "right_ray",
    "left_ray",
    "full_line",
    "plus_inf",
    "minus_inf",
    "pm_inf",
    "halfline_open_right",
    "halfline_open_left",
)


@dataclass(frozen=True)
class Support:
    """Interval or point normal form of a closed subset of the extended line.

    ``right_ray`` is ``[a, +inf]``, ``left_ray`` is ``[-inf, b]``.  The two
    ``halfline_open_*`` kinds describe supports ``[a, inf)`` and ``(-inf, b]``
    inside the real line; their closures are the corresponding rays.
    """

    kind: str
    a: float | None = None
    b: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown support kind {self.kind!r}")
        if self.kind == "compact":
            if self.a is None or self.b is None:
                raise ValueError("compact support needs both endpoints")
            if not (math.isfinite(self.a) and math.isfinite(self.b)):
                raise ValueError("compact support endpoints must be finite")
            if self.a > self.b:
                raise ValueError(f"compact support needs a <= b, got [{self.a}, {self.b}]")
        if self.kind in ("right_ray", "halfline_open_right") and not _finite(self.a):
            raise ValueError("right ray needs a finite left endpoint a")
        if self.kind in ("left_ray", "halfline_open_left") and not _finite(self.b):
            raise ValueError("left ray needs a finite right endpoint b")

    # constructors
    @classmethod
    def empty(cls):
        return cls("empty")

    @classmethod
    def compact(cls, a, b):
        return cls("compact", float(a), float(b))

    @classmethod
    def point(cls, a):
        return cls("compact", float(a), float(a))

    @classmethod
    def right_ray(cls, a):
        return cls("right_ray", a=float(a))

    @classmethod
    def left_ray(cls, b):
        return cls("left_ray", b=float(b))

    @classmethod
    def full_line(cls):
        return cls("full_line")

    @classmethod
    def plus_inf(cls):
        return cls("plus_inf")

    @classmethod
    def minus_inf(cls):
        return cls("minus_inf")

    @classmethod
    def pm_inf(cls):
        return cls("pm_inf")

    @classmethod
    def halfline_open_right(cls, a):
        return cls("halfline_open_right", a=float(a))

    @classmethod
    def halfline_open_left(cls, b):
        return cls("halfline_open_left", b=float(b))

    # queries
    @property
    def is_compact(self):
        return self.kind == "compact"

    @property
    def is_point(self):
        return self.kind == "compact" and self.a == self.b

    def closure(self) -> "Support":
        if self.kind == "halfline_open_right":
            return Support.right_ray(self.a)
        if self.kind == "halfline_open_left":
            return Support.left_ray(self.b)
        return self

    def real_part(self):
        """Return ``(lo, hi)`` describing ``K`` intersected with the real line, or None."""
        k = self.kind
        if k == "compact":
            return (self.a, self.b)
        if k in ("right_ray", "halfline_open_right"):
            return (self.a, math.inf)
        if k in ("left_ray", "halfline_open_left"):
            return (-math.inf, self.b)
        if k == "full_line":
            return (-math.inf, math.inf)
        return None

    @property
    def has_plus_inf(self):
        return self.kind in ("right_ray", "full_line", "plus_inf", "pm_inf")

    @property
    def has_minus_inf(self):
        return self.kind in ("left_ray", "full_line", "minus_inf", "pm_inf")

    def distance(self, z):
        """Distance from ``z`` to the finite part of the support (inf if empty)."""
        z = np.asarray(z, dtype=complex)
        rp = self.real_part()
        if rp is None:
            return np.full(z.shape, np.inf)
        lo, hi = rp
        x = z.real
        dx = np.where(x < lo, lo - x, np.where(x > hi, x - hi, 0.0))
        return np.hypot(dx, z.imag)

    def translate(self, s: float) -> "Support":
        s = float(s)
        a = None if self.a is None else self.a + s
        b = None if self.b is None else self.b + s
        return Support(self.kind, a, b)

    def hull(self, other: "Support") -> "Support":
        """Smallest interval support containing both (used for sums)."""
        if self.kind == "empty":
            return other
        if other.kind == "empty":
            return self
        r1, r2 = self.real_part(), other.real_part()
        if r1 is None or r2 is None:
            raise UnsupportedSupportError("hull is only defined for supports meeting the real line")
        lo, hi = min(r1[0], r2[0]), max(r1[1], r2[1])
        open_ = "halfline_open" in self.kind or "halfline_open" in other.kind
        return _from_bounds(lo, hi, open_)

    def minkowski(self, other: "Support") -> "Support":
        """Minkowski sum of two interval supports."""
        if self.kind == "empty" or other.kind == "empty":
            return Support.empty()
        r1, r2 = self.real_part(), other.real_part()
        if r1 is None or r2 is None:
            raise UnsupportedSupportError("Minkowski sum needs supports meeting the real line")
        if (r1[0] == -math.inf and r2[1] == math.inf) or (r1[1] == math.inf and r2[0] == -math.inf):
            return Support.full_line()
        open_ = "halfline_open" in self.kind or "halfline_open" in other.kind
        return _from_bounds(r1[0] + r2[0], r1[1] + r2[1], open_)

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.a is not None:
            out["a"] = self.a
        if self.b is not None:
            out["b"] = self.b
        return out

    @classmethod
    def from_json(cls, d: dict) -> "Support":
        return cls(d["kind"], d.get("a"), d.get("b"))

    def __str__(self):
        k = self.kind
        if k == "compact":
            return f"{{{self.a:g}}}" if self.a == self.b else f"[{self.a:g}, {self.b:g}]"
        if k == "right_ray":
            return f"[{self.a:g}, +inf]"
        if k == "left_ray":
            return f"[-inf, {self.b:g}]"
        if k == "halfline_open_right":
            return f"[{self.a:g}, inf)"
        if k == "halfline_open_left":
            return f"(-inf, {self.b:g}]"
        return {"empty": "{}", "full_line": "[-inf, +inf]", "plus_inf": "{+inf}",
                "minus_inf": "{-inf}", "pm_inf": "{-inf, +inf}"}[k]


def _finite(x):
    return x is not None and math.isfinite(x)


def _from_bounds(lo, hi, open_=False):
    if math.isfinite(lo) and math.isfinite(hi):
        return Support.compact(lo, hi)
    if math.isfinite(lo):
        return Support.halfline_open_right(lo) if open_ else Support.right_ray(lo)
    if math.isfinite(hi):
        return Support.halfline_open_left(hi) if open_ else Support.left_ray(hi)
    return Support.full_line()


def supporting_function(K: Support, y):
    """``H_K(y) = max(a*y, b*y)`` for a compact interval ``K = [a, b]``."""
    if K.kind != "compact":
        raise UnsupportedSupportError(f"supporting function needs a compact support, got {K}")
    y = np.asarray(y, dtype=float)
    out = np.maximum(K.a * y, K.b * y)
    return out if out.ndim else float(out)


def in_neighborhood(z, K: Support, c: float):
    """True where ``z`` lies in the neighbourhood ``U(K, c)``."""
    if c <= 0:
        raise ValueError("clearance c must be positive")
    z = np.asarray(z, dtype=complex)
    inside = K.distance(z) < c
    strip = np.abs(z.imag) < c
    if K.has_plus_inf:
        inside |= strip & (z.real > 1.0 / c)
    if K.has_minus_inf:
        inside |= strip & (z.real < -1.0 / c)
    return bool(inside) if inside.ndim == 0 else inside


def _in_closed_neighborhood(z, K, c):
    inside = K.distance(z) <= c
    strip = np.abs(z.imag) <= c
    if K.has_plus_inf:
        inside |= strip & (z.real >= 1.0 / c)
    if K.has_minus_inf:
        inside |= strip & (z.real <= -1.0 / c)
    return inside


def in_strip(z, K: Support, n: int):
    """True where ``z`` lies in ``S_n(K)``: outside the closed ``U(K, 1/n)``, ``|im z| < n``."""
    if n < 1:
        raise ValueError("strip index n must be >= 1")
    z = np.asarray(z, dtype=complex)
    out = (~_in_closed_neighborhood(z, K, 1.0 / n)) & (np.abs(z.imag) < n)
    return bool(out) if out.ndim == 0 else out


def strip_index(z, K: Support) -> int:
    """Smallest ``n`` with every point of ``z`` inside ``S_n(K)``."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    for n in range(1, 10_000):
        if np.all(in_strip(z, K, n)):
            return n
    raise DegeneratePathError("evaluation point too close to the support")


# ---------------------------------------------------------------- segments

@dataclass(frozen=True)
class Line:
    p: complex
    q: complex

    def point(self, t):
        return self.p + (self.q - self.p) * t

    def deriv(self, t):
        return np.full(np.shape(t), self.q - self.p, dtype=complex)

    @property
    def length(self):
        return abs(self.q - self.p)

    @property
    def start(self):
        return complex(self.p)

    @property
    def end(self):
        return complex(self.q)

    def reversed(self):
        return Line(self.q, self.p)

    def rotated(self, w):
        return Line(w * self.p, w * self.q)

    def to_json(self):
        return {"type": "line", "p": [self.p.real, self.p.imag], "q": [self.q.real, self.q.imag]}


@dataclass(frozen=True)
class Arc:
    center: complex
    radius: float
    theta_start: float
    theta_end: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("arc radius must be positive")

    def point(self, t):
        th = self.theta_start + (self.theta_end - self.theta_start) * t
        return self.center + self.radius * np.exp(1j * th)

    def deriv(self, t):
        dth = self.theta_end - self.theta_start
        th = self.theta_start + dth * t
        return 1j * self.radius * dth * np.exp(1j * th)

    @property
    def length(self):
        return self.radius * abs(self.theta_end - self.theta_start)

    @property
    def start(self):
        return complex(self.point(0.0))

    @property
    def end(self):
        return complex(self.point(1.0))

    def reversed(self):
        return Arc(self.center, self.radius, self.theta_end, self.theta_start)

    def rotated(self, w):
        ang = float(np.angle(w))
        return Arc(w * self.center, self.radius, self.theta_start + ang, self.theta_end + ang)

    def to_json(self):
        return {"type": "arc", "center": [self.center.real, self.center.imag],
                "radius": self.radius, "theta_start": self.theta_start, "theta_end": self.theta_end}


@dataclass(frozen=True)
class Ray:
    """Truncated ray ``start + direction*s`` for ``0 <= s <= R_max``.

    With ``inward=True`` the ray is traversed from its far end towards ``start``.
    """

    start_point: complex
    direction: complex
    R_max: float
    inward: bool = False

    def __post_init__(self):
        if abs(abs(self.direction) - 1.0) > 1e-12:
            raise ValueError("ray direction must have modulus 1")
        if not (self.R_max > 0 and math.isfinite(self.R_max)):
            raise ValueError("ray truncation length must be finite and positive")

    def _s(self, t):
        return self.R_max * (1.0 - t) if self.inward else self.R_max * t

    def point(self, t):
        return self.start_point + self.direction * self._s(t)

    def deriv(self, t):
        v = -self.direction * self.R_max if self.inward else self.direction * self.R_max
        return np.full(np.shape(t), v, dtype=complex)

    @property
    def length(self):
        return self.R_max

    @property
    def start(self):
        return complex(self.point(0.0))

    @property
    def end(self):
        return complex(self.point(1.0))

    @property
    def far_point(self):
        return complex(self.start_point + self.direction * self.R_max)

    def with_length(self, R):
        return Ray(self.start_point, self.direction, float(R), self.inward)

    def reversed(self):
        return Ray(self.start_point, self.direction, self.R_max, not self.inward)

    def rotated(self, w):
        return Ray(w * self.start_point, w * self.direction, self.R_max, self.inward)

    def to_json(self):
        return {"type": "ray", "start": [self.start_point.real, self.start_point.imag],
                "direction": [self.direction.real, self.direction.imag],
                "R_max": self.R_max, "inward": self.inward}


@dataclass(frozen=True)
class ContourPath:
    """Oriented piecewise path.

    ``breaks`` lists indices ``i`` for which segment ``i`` need not start where
    segment ``i-1`` ends (the path then has several components joined at
    infinity).
    """

    segments: tuple
    orientation: str = "clockwise"
    encircled: Support = field(default_factory=Support.empty)
    clearance: float = 0.0
    breaks: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        object.__setattr__(self, "breaks", frozenset(self.breaks))
        for i in range(1, len(self.segments)):
            if i in self.breaks:
                continue
            gap = abs(self.segments[i].start - self.segments[i - 1].end)
            if gap > 1e-10 * max(1.0, abs(self.segments[i].start)):
                raise DegeneratePathError(f"segments {i - 1} and {i} are not continuous (gap {gap:.3g})")

    @property
    def length(self):
        return sum(s.length for s in self.segments)

    @property
    def rays(self):
        return [s for s in self.segments if isinstance(s, Ray)]

    def sample(self, n_per_segment=32):
        t = np.linspace(0.0, 1.0, n_per_segment)
        return np.concatenate([np.asarray(s.point(t), dtype=complex) for s in self.segments])

    def reversed(self):
        segs = tuple(s.reversed() for s in reversed(self.segments))
        m = len(self.segments)
        brk = frozenset(m - i for i in self.breaks)
        orient = {"clockwise": "counterclockwise", "counterclockwise": "clockwise"}.get(
            self.orientation, self.orientation + "_reversed")
        return ContourPath(segs, orient, self.encircled, self.clearance, brk)

    def with_ray_lengths(self, lengths):
        """Copy with the ray truncation lengths replaced, in path order."""
        it = iter(lengths)
        segs = [s.with_length(next(it)) if isinstance(s, Ray) else s for s in self.segments]
        return ContourPath(tuple(segs), self.orientation, self.encircled, self.clearance, self.breaks)

    def to_json(self):
        return {"orientation": self.orientation, "encircled": self.encircled.to_json(),
                "clearance": self.clearance, "breaks": sorted(self.breaks),
                "segments": [s.to_json() for s in self.segments]}


def _arc_pieces(center, r, th0, th1):
    """Split an arc into pieces spanning at most pi/2 each."""
    n = max(1, int(math.ceil(abs(th1 - th0) / (math.pi / 2) - 1e-12)))
    ths = np.linspace(th0, th1, n + 1)
    return [Arc(complex(center), float(r), float(ths[i]), float(ths[i + 1])) for i in range(n)]


def _right_cap(a, c, x0):
    """Clockwise left end of the boundary of U([a, inf], c), from below to above.

    ``x0 = 1/c`` is where the far strip starts.  Returns the segments and the
    abscissa where the two horizontal rays attach.
    """
    if a <= x0:
        return _arc_pieces(a, c, 1.5 * math.pi, 0.5 * math.pi), a
    if a - c >= x0:
        return [Line(complex(x0, -c), complex(x0, c))], x0
    h = math.sqrt(c * c - (a - x0) ** 2)
    th_b = 2 * math.pi + math.atan2(-h, x0 - a)
    th_t = math.atan2(h, x0 - a)
    segs = [Line(complex(x0, -c), complex(x0, -h))]
    segs += _arc_pieces(a, c, th_b, th_t)
    segs.append(Line(complex(x0, h), complex(x0, c)))
    return segs, x0


def _right_ray_segments(a, c, R_max, cap=True):
    x0 = 1.0 / c
    if cap:
        cap_segs, x_att = _right_cap(a, c, x0)
    else:
        cap_segs, x_att = [Line(complex(x0, -c), complex(x0, c))], x0
    if R_max <= x_att:
        raise DegeneratePathError(f"R_max={R_max} does not exceed the ray attachment point {x_att}")
    L = R_max - x_att
    bottom = Ray(complex(x_att, -c), 1.0 + 0j, L, inward=True)
    top = Ray(complex(x_att, c), 1.0 + 0j, L)
    return [bottom, *cap_segs, top]


def build_contour(K: Support, c: float, R_max: float | None = None) -> ContourPath:
    """Clockwise boundary of ``U(K, c)``.

    Parameters
    ----------
    K : Support
        Any non-empty support.  Open half lines are replaced by their closure.
    c : float
        Clearance, the distance from the finite part of ``K``.
    R_max : float, optional
        Truncation abscissa of the horizontal rays (required for unbounded K).
        Rays to ``-inf`` end at ``re z = -R_max``.

    Raises
    ------
    DegeneratePathError
        If ``R_max <= 1/c`` for an unbounded support or ``K`` is empty.
    """
    if not c > 0:
        raise DegeneratePathError("clearance must be positive")
    K = K.closure()
    kind = K.kind
    if kind == "empty":
        raise DegeneratePathError("cannot build a contour around the empty set")
    if kind == "compact":
        a, b = K.a, K.b
        if a == b:
            segs = _arc_pieces(a, c, 0.5 * math.pi, 0.5 * math.pi - 2 * math.pi)
        else:
            segs = _arc_pieces(a, c, 1.5 * math.pi, 0.5 * math.pi)
            segs.append(Line(complex(a, c), complex(b, c)))
            segs += _arc_pieces(b, c, 0.5 * math.pi, -0.5 * math.pi)
            segs.append(Line(complex(b, -c), complex(a, -c)))
        return ContourPath(tuple(segs), "clockwise", K, c)

    if R_max is None or R_max <= 1.0 / c:
        raise DegeneratePathError(f"R_max={R_max} must exceed 1/c={1.0 / c:g} for unbounded supports")
    breaks = set()
    if kind == "right_ray":
        segs = _right_ray_segments(K.a, c, R_max)
    elif kind == "left_ray":
        segs = [s.rotated(-1.0) for s in _right_ray_segments(-K.b, c, R_max)]
    elif kind == "plus_inf":
        segs = _right_ray_segments(math.inf, c, R_max, cap=False)
    elif kind == "minus_inf":
        segs = [s.rotated(-1.0) for s in _right_ray_segments(math.inf, c, R_max, cap=False)]
    elif kind == "pm_inf":
        right = _right_ray_segments(math.inf, c, R_max, cap=False)
        left = [s.rotated(-1.0) for s in right]
        segs = right + left
        breaks.add(len(right))
    elif kind == "full_line":
        segs = [
            Ray(complex(0, c), -1.0 + 0j, R_max, inward=True),
            Ray(complex(0, c), 1.0 + 0j, R_max),
            Ray(complex(0, -c), 1.0 + 0j, R_max, inward=True),
            Ray(complex(0, -c), -1.0 + 0j, R_max),
        ]
        breaks.add(2)
    else:  # pragma: no cover - closure() removed the open kinds
        raise UnsupportedSupportError(kind)
    return ContourPath(tuple(segs), "clockwise", K, c, frozenset(breaks))


def build_gamma_komatsu(a: float, c: float, alpha: float, beta: float, R_max: float) -> ContourPath:
    """Two-ray path coming in from ``c + R e^{i alpha}`` to ``c`` and leaving towards ``c + R e^{i beta}``.

    The vertex ``c`` lies left of ``a``; ``-pi/2 < alpha < 0 < beta < pi/2``.
    """
    if not c < a:
        raise DegeneratePathError(f"vertex c={c} must lie left of a={a}")
    if not (-math.pi / 2 < alpha < 0):
        raise DegeneratePathError(f"alpha={alpha} outside (-pi/2, 0)")
    if not (0 < beta < math.pi / 2):
        raise DegeneratePathError(f"beta={beta} outside (0, pi/2)")
    if not R_max > 0:
        raise DegeneratePathError("R_max must be positive")
    c = complex(c)
    segs = (Ray(c, complex(np.exp(1j * alpha)), R_max, inward=True),
            Ray(c, complex(np.exp(1j * beta)), R_max))
    return ContourPath(segs, "komatsu", Support.right_ray(a), float(a - c.real))
