"""Upper half-plane geometry with projective ideal points.

Ideal points are homogeneous pairs ``(p, q)`` standing for ``p/q`` on
``R u {inf}``; infinity is ``(1, 0)``.  No code path special-cases infinity:
every computation goes through 2x2 brackets ``[x, y] = x.p * y.q - y.p * x.q``.

The boundary is oriented by increasing real coordinate (wrapping through
infinity).  Seen from any interior point this is the counter-clockwise
direction in the disk model, and it is the orientation used for arcs.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import (
    CrossingError,
    DegenerateConfigurationError,
    DomainError,
    NonHyperbolicError,
    OrderingError,
    ParabolicError,
)

__all__ = [
    "IdealPoint",
    "Geodesic",
    "MoebiusMap",
    "HConfig",
    "INF",
    "ideal",
    "bracket",
    "cross_ratio",
    "normalize_quad",
    "geodesic_distance",
    "param_convert",
    "visual_angle",
    "fixed_points",
    "translation_length",
    "common_perpendicular",
    "reflect",
    "point_distance",
    "to_hyperboloid",
    "geodesic_through",
    "segment_distance",
    "same_side",
]

_EQ_RTOL = 1e-14
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, eq=False)
class IdealPoint:
    """Point ``p/q`` of the boundary circle ``RP^1``."""

    p: float
    q: float

    def __post_init__(self):
        if self.p == 0.0 and self.q == 0.0:
            raise DegenerateConfigurationError("(0, 0) is not a point of RP^1")
        if not (math.isfinite(self.p) and math.isfinite(self.q)):
            raise DomainError("homogeneous coordinates must be finite")

    @property
    def value(self) -> float:
        return math.inf if self.q == 0.0 else self.p / self.q

    @property
    def is_infinite(self) -> bool:
        return self.q == 0.0

    def norm(self) -> float:
        return math.hypot(self.p, self.q)

    def coincides(self, other: "IdealPoint", rtol: float = _EQ_RTOL) -> bool:
        return abs(bracket(self, other)) <= rtol * self.norm() * other.norm()

    def __repr__(self):
        v = self.value
        return "IdealPoint(inf)" if math.isinf(v) else f"IdealPoint({v!r})"


INF = IdealPoint(1.0, 0.0)


def ideal(t: Union[float, IdealPoint]) -> IdealPoint:
    """Coerce a real number (``math.inf`` allowed) to an :class:`IdealPoint`."""
    if isinstance(t, IdealPoint):
        return t
    t = float(t)
    if math.isinf(t):
        return INF
    return IdealPoint(t, 1.0)


def bracket(x: IdealPoint, y: IdealPoint) -> float:
    """Projective difference ``x - y`` scaled by ``x.q * y.q``."""
    return x.p * y.q - y.p * x.q


@dataclass(frozen=True, eq=False)
class Geodesic:
    """Complete geodesic given by its two ideal endpoints.

    The pair is unordered for metric questions; ``start``/``end`` record an
    orientation when one is meaningful (e.g. repelling -> attracting).
    """

    start: IdealPoint
    end: IdealPoint

    def __post_init__(self):
        object.__setattr__(self, "start", ideal(self.start))
        object.__setattr__(self, "end", ideal(self.end))
        if self.start.coincides(self.end):
            raise DegenerateConfigurationError("geodesic endpoints coincide")

    @property
    def endpoints(self) -> tuple[IdealPoint, IdealPoint]:
        return self.start, self.end

    def image(self, m: "MoebiusMap") -> "Geodesic":
        return Geodesic(m(self.start), m(self.end))

    def __repr__(self):
        return f"Geodesic({self.start.value!r}, {self.end.value!r})"


@dataclass(frozen=True, eq=False)
class MoebiusMap:
    """Orientation-preserving isometry ``z -> (az + b)/(cz + d)``, normalised to ``ad - bc = 1``."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if not det > 0.0 or not math.isfinite(det):
            raise DomainError(f"Moebius matrix must have positive determinant, got {det!r}")
        if det != 1.0:
            s = math.sqrt(det)
            object.__setattr__(self, "a", self.a / s)
            object.__setattr__(self, "b", self.b / s)
            object.__setattr__(self, "c", self.c / s)
            object.__setattr__(self, "d", self.d / s)

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def translation(cls, t: float) -> "MoebiusMap":
        """Hyperbolic translation by ``t`` along the axis ``(0, inf)``."""
        h = math.exp(t / 2.0)
        return cls(h, 0.0, 0.0, 1.0 / h)

    @classmethod
    def from_matrix(cls, m) -> "MoebiusMap":
        m = np.asarray(m, dtype=float)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    @property
    def trace(self) -> float:
        return self.a + self.d

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        return MoebiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def conjugate_by(self, g: "MoebiusMap") -> "MoebiusMap":
        """``g M g^-1``."""
        return g @ self @ g.inverse()

    def __call__(self, z):
        if isinstance(z, IdealPoint):
            return IdealPoint(self.a * z.p + self.b * z.q, self.c * z.p + self.d * z.q)
        if isinstance(z, np.ndarray):
            return (self.a * z + self.b) / (self.c * z + self.d)
        if isinstance(z, (int, float)) and not isinstance(z, bool):
            return self(ideal(z)).value
        return (self.a * z + self.b) / (self.c * z + self.d)

    def __repr__(self):
        return f"MoebiusMap({self.a!r}, {self.b!r}, {self.c!r}, {self.d!r})"


def _distinct(*pts: IdealPoint) -> None:
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if pts[i].coincides(pts[j]):
                raise DegenerateConfigurationError(f"ideal points {i} and {j} coincide")


def cross_ratio(a, b, c, d) -> float:
    """Cross-ratio ``(a - c)(b - d) / ((a - d)(b - c))``, evaluated projectively.

    With this convention ``cross_ratio(x, 1, 0, inf) == x``.
    """
    a, b, c, d = ideal(a), ideal(b), ideal(c), ideal(d)
    _distinct(a, b, c, d)
    return (bracket(a, c) * bracket(b, d)) / (bracket(a, d) * bracket(b, c))


# ---------------------------------------------------------------------------
# H configuration


@dataclass(frozen=True)
class HConfig:
    """Normalised H: ``R = (inf, 0)`` and ``L = (x, 1)`` at distance ``l``.

    The three parameters satisfy ``x = (1 + cos(alpha))/2 = tanh(l/2)**2``.
    """

    l: float
    x: float
    alpha: float

    @classmethod
    def from_length(cls, l: float) -> "HConfig":
        l = float(l)
        if not (l > 0.0 and math.isfinite(l)):
            raise DomainError(f"orthogeodesic length must be positive, got {l!r}")
        t = math.tanh(l / 2.0)
        # alpha/2 = atan2(sqrt(1 - x), sqrt(x)) with sqrt(1 - x) = sech(l/2)
        alpha = 2.0 * math.atan2(1.0 / math.cosh(l / 2.0), t)
        return cls(l, t * t, alpha)

    @classmethod
    def from_x(cls, x: float) -> "HConfig":
        x = float(x)
        if not 0.0 < x < 1.0:
            raise DomainError(f"x must lie in (0, 1), got {x!r}")
        r = math.sqrt(x)
        # l = log((1 + r)^2 / (1 - x)) keeps full precision as x -> 1
        l = 2.0 * math.log1p(r) - math.log1p(-x)
        return cls(l, x, 2.0 * math.atan2(math.sqrt(1.0 - x), r))

    @classmethod
    def from_alpha(cls, alpha: float) -> "HConfig":
        alpha = float(alpha)
        if not 0.0 < alpha < math.pi:
            raise DomainError(f"alpha must lie in (0, pi), got {alpha!r}")
        c = math.cos(alpha / 2.0)
        # 1 - cos(alpha/2) = 2 sin^2(alpha/4)
        l = math.log1p(c) - math.log(2.0 * math.sin(alpha / 4.0) ** 2)
        return cls(l, c * c, alpha)

    def vertices(self) -> tuple[IdealPoint, IdealPoint, IdealPoint, IdealPoint]:
        """Quadrilateral vertices ``0, x, 1, inf`` in circular order."""
        return ideal(0.0), ideal(self.x), ideal(1.0), INF

    def edges(self) -> dict[str, Geodesic]:
        z, x, o, inf = self.vertices()
        return {
            "R": Geodesic(inf, z),
            "D": Geodesic(z, x),
            "L": Geodesic(x, o),
            "U": Geodesic(o, inf),
        }

    @property
    def center(self) -> complex:
        """Intersection of the diagonals ``(0, 1)`` and ``(x, inf)``."""
        return complex(self.x, math.sqrt(self.x * (1.0 - self.x)))


def param_convert(*, l: float | None = None, x: float | None = None, alpha: float | None = None) -> HConfig:
    """Build an :class:`HConfig` from exactly one of ``l``, ``x``, ``alpha``."""
    given = [k for k, v in (("l", l), ("x", x), ("alpha", alpha)) if v is not None]
    if len(given) != 1:
        raise DomainError(f"pass exactly one of l, x, alpha (got {given})")
    if l is not None:
        return HConfig.from_length(l)
    if x is not None:
        return HConfig.from_x(x)
    return HConfig.from_alpha(alpha)


def normalize_quad(v0, v1, v2, v3) -> tuple[MoebiusMap, HConfig]:
    """Map ``v0, v2, v3`` to ``0, 1, inf``; the image of ``v1`` is ``x``.

    Raises :class:`OrderingError` unless the points are in positive circular
    order, i.e. unless ``x`` lands in (0, 1) under an orientation-preserving map.
    """
    v0, v1, v2, v3 = ideal(v0), ideal(v1), ideal(v2), ideal(v3)
    _distinct(v0, v1, v2, v3)
    # rows kill v0 (numerator) and v3 (denominator)
    a, b = v0.q, -v0.p
    c, d = v3.q, -v3.p
    image_v2 = (a * v2.p + b * v2.q) / (c * v2.p + d * v2.q)
    k = 1.0 / image_v2
    if not (a * d - b * c) * k > 0.0:
        raise OrderingError("points are not in positive circular order")
    m = MoebiusMap(k * a, k * b, c, d)
    x = cross_ratio(v1, v2, v0, v3)
    if not 0.0 < x < 1.0:
        raise OrderingError(f"normalised fourth vertex {x!r} outside (0, 1)")
    return m, HConfig.from_x(x)


def geodesic_distance(g1: Geodesic, g2: Geodesic) -> float:
    """Length of the common perpendicular of two disjoint geodesics."""
    u1, u2 = g1.endpoints
    w1, w2 = g2.endpoints
    for p in (u1, u2):
        for q in (w1, w2):
            if p.coincides(q):
                raise ParabolicError("geodesics share an ideal endpoint")
    x = cross_ratio(w1, w2, u1, u2)
    if x < 0.0:
        raise CrossingError("geodesics intersect")
    if x > 1.0:
        w1, w2 = w2, w1
        x = cross_ratio(w1, w2, u1, u2)
    # 1 - x as its own cross-ratio keeps precision when l is large
    y = cross_ratio(w1, u1, w2, u2)
    r = math.sqrt(x)
    return math.log((1.0 + r) ** 2 / y)


# ---------------------------------------------------------------------------
# visual angles


def _disk_angle(p: complex, t: IdealPoint) -> float:
    w = (t.p - p * t.q) / (t.p - p.conjugate() * t.q)
    return cmath.phase(w) % TWO_PI


def visual_angle(p: complex, start, end) -> float:
    """Harmonic measure at ``p`` of the boundary arc from ``start`` to ``end``.

    The arc runs in the positive boundary direction; the result is the visual
    angle of the arc from ``p`` divided by ``2 pi``.  Swapping ``start`` and
    ``end`` gives the complementary arc.
    """
    p = complex(p)
    if not p.imag > 0.0:
        raise DomainError(f"point {p!r} is not in the upper half-plane")
    start, end = ideal(start), ideal(end)
    if start.coincides(end):
        raise DegenerateConfigurationError("arc endpoints coincide")
    return ((_disk_angle(p, end) - _disk_angle(p, start)) % TWO_PI) / TWO_PI


# ---------------------------------------------------------------------------
# hyperbolic elements


def _hyperbolic_trace(m: MoebiusMap) -> float:
    t = abs(m.trace)
    if not t > 2.0:
        raise NonHyperbolicError(f"|trace| = {t!r} <= 2")
    return t


def fixed_points(m: MoebiusMap) -> Geodesic:
    """Axis of a hyperbolic map, oriented from repelling to attracting fixed point."""
    t = _hyperbolic_trace(m)
    s = 1.0 if m.trace > 0 else -1.0
    a, b, c, d = s * m.a, s * m.b, s * m.c, s * m.d
    root = math.sqrt((t - 2.0) * (t + 2.0))
    fixed = []
    for lam in ((t - root) / 2.0, (t + root) / 2.0):
        # eigenvector of lam; pick the better conditioned of two forms
        v1 = (b, lam - a)
        v2 = (lam - d, c)
        p, q = v1 if math.hypot(*v1) >= math.hypot(*v2) else v2
        fixed.append(IdealPoint(p, q))
    return Geodesic(fixed[0], fixed[1])


def translation_length(m: MoebiusMap) -> float:
    """``2 arccosh(|trace|/2)``."""
    return 2.0 * math.acosh(_hyperbolic_trace(m) / 2.0)


# ---------------------------------------------------------------------------
# interior points


def point_distance(z1: complex, z2: complex) -> float:
    z1, z2 = complex(z1), complex(z2)
    if not (z1.imag > 0 and z2.imag > 0):
        raise DomainError("points must lie in the upper half-plane")
    return math.acosh(1.0 + abs(z1 - z2) ** 2 / (2.0 * z1.imag * z2.imag))


def to_hyperboloid(z: complex) -> np.ndarray:
    """Hyperboloid coordinates ``(X, Y, T)`` with ``X^2 + Y^2 - T^2 = -1``."""
    u, v = z.real, z.imag
    r2 = u * u + v * v
    return np.array([u / v, (r2 - 1.0) / (2.0 * v), (1.0 + r2) / (2.0 * v)])


def _to_zero_inf(g: Geodesic) -> MoebiusMap:
    p, q = g.start, g.end
    a, b, c, d = p.q, -p.p, q.q, -q.p
    if a * d - b * c < 0:
        a, b = -a, -b
    return MoebiusMap(a, b, c, d)


def common_perpendicular(g1: Geodesic, g2: Geodesic) -> tuple[complex, complex]:
    """Feet of the common perpendicular, on ``g1`` and on ``g2`` respectively."""
    t = _to_zero_inf(g1)
    s1, s2 = (t(e).value for e in g2.endpoints)
    if math.isinf(s1) or math.isinf(s2) or s1 == 0.0 or s2 == 0.0:
        raise ParabolicError("geodesics share an ideal endpoint")
    if s1 * s2 < 0.0:
        raise CrossingError("geodesics intersect")
    sign = 1.0 if s1 > 0 else -1.0
    s1, s2 = abs(s1), abs(s2)
    r = math.sqrt(s1 * s2)
    c0 = (s1 + s2) / 2.0
    u = r * r / c0
    foot2 = complex(sign * u, math.sqrt(max(r * r - u * u, 0.0)))
    inv = t.inverse()
    return inv(complex(0.0, r)), inv(foot2)


def reflect(g: Geodesic, z):
    """Reflection of ``z`` (complex or array) across the geodesic ``g``."""
    t = _to_zero_inf(g)
    w = t(z)
    return t.inverse()(-np.conj(w) if isinstance(w, np.ndarray) else -w.conjugate())


def geodesic_through(z1: complex, z2: complex) -> Geodesic:
    """Complete geodesic through two distinct interior points."""
    z1, z2 = complex(z1), complex(z2)
    if not (z1.imag > 0.0 and z2.imag > 0.0):
        raise DomainError("points must lie in the upper half-plane")
    if z1 == z2:
        raise DegenerateConfigurationError("points coincide")
    du = z2.real - z1.real
    if abs(du) <= 1e-15 * max(abs(z1), abs(z2)):
        return Geodesic(ideal((z1.real + z2.real) / 2.0), INF)
    centre = (abs(z2) ** 2 - abs(z1) ** 2) / (2.0 * du)
    r = abs(z1 - centre)
    return Geodesic(ideal(centre - r), ideal(centre + r))


def same_side(g: Geodesic, *points) -> bool:
    """True when all ideal ``points`` lie in one complementary arc of ``g``."""
    u1, u2 = g.endpoints
    pts = [ideal(t) for t in points]
    for p in pts[1:]:
        if not cross_ratio(pts[0], p, u1, u2) > 0.0:
            return False
    return True


def _minkowski(p: np.ndarray, q: np.ndarray) -> float:
    return float(p[0] * q[0] + p[1] * q[1] - p[2] * q[2])


def _segment_param(p: np.ndarray, q: np.ndarray):
    d = math.acosh(max(1.0, -_minkowski(p, q)))
    if d == 0.0:
        return lambda s: p
    sd = math.sinh(d)
    return lambda s: (math.sinh((1.0 - s) * d) * p + math.sinh(s * d) * q) / sd


def segment_distance(seg1: tuple[complex, complex], seg2: tuple[complex, complex], xatol: float = 1e-13) -> float:
    """Minimum distance between two geodesic segments given by their endpoints.

    Distance between points moving along geodesics is convex, so a bounded
    scalar minimisation nested inside another finds the global minimum.
    """
    f1 = _segment_param(*(to_hyperboloid(complex(z)) for z in seg1))
    f2 = _segment_param(*(to_hyperboloid(complex(z)) for z in seg2))
    opts = {"xatol": xatol}

    def closest(s: float) -> float:
        x = f1(s)
        g = lambda t: -_minkowski(x, f2(t))  # noqa: E731
        r = minimize_scalar(g, bounds=(0.0, 1.0), method="bounded", options=opts)
        # bounded Brent never lands exactly on the ends, where minima often sit
        return min(float(r.fun), g(0.0), g(1.0))

    r = minimize_scalar(closest, bounds=(0.0, 1.0), method="bounded", options=opts)
    best = min(float(r.fun), closest(0.0), closest(1.0))
    return math.acosh(max(1.0, best))
