"""Volume of crossing tangent vectors in the normalised H configuration.

For an H with boundary lifts ``R = (inf, 0)`` and ``L = (x, 1)`` the volume of
unit tangent vectors over the ideal quadrilateral ``Q = (0, x, 1, inf)`` whose
geodesic meets both ``L`` and ``R`` equals ``8 L(1 - x)``.  Three routes are
provided and cross-checked:

* ``V_formula``: closed expression in the one-dimensional integral ``A``;
* ``V_quadrature``: product Gauss-Legendre quadrature of the exact
  crossing measure over the four semi-ideal triangles cut out by the diagonals;
* ``V_montecarlo``: stratified sampling of the two ideal triangles cut out
  by the diagonal ``(0, 1)``.

Semi-ideal triangles are integrated in a frame where the ideal vertices sit
at 0 and infinity and the apex lies on the semicircle over [0, 1].  The
triangle is then ``{0 < u < u_c, v > sqrt(u(1 - u))}`` and the coordinates
``u = (1 - cos psi)/2``, ``v = sqrt(u(1 - u))/s`` turn hyperbolic area into
``dpsi ds`` on the rectangle ``(0, pi - angle) x (0, 1)``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels
from .dilog import rogers_l
from .errors import DomainError, ParameterError
from .hypgeom import (
    INF,
    Geodesic,
    HConfig,
    IdealPoint,
    MoebiusMap,
    _disk_angle,
    _to_zero_inf,
    ideal,
)
from .quadrature import integrate_rectangle, quad

__all__ = [
    "SemiIdealTriangle",
    "TriangleDecomposition",
    "VolumeReport",
    "decompose",
    "A_of",
    "A_deriv",
    "integrate_A_deriv",
    "B_of",
    "C_of",
    "V_formula",
    "crossing_angle_measure",
    "V_quadrature",
    "V_montecarlo",
    "volume_target",
    "volume_report",
    "harmonic_R",
    "harmonic_D",
    "harmonic_L",
    "harmonic_U",
]

PI = math.pi
THIRD_PI = PI / 3.0
MC_SHARD = 1 << 16
MIN_SAMPLES = 10_000


# ---------------------------------------------------------------------------
# harmonic measures of the four boundary arcs behind R, D, L, U


def harmonic_R(z, x):
    """Visual measure / 2pi of the negative axis (behind ``R``)."""
    return np.angle(z) / PI


def harmonic_D(z, x):
    return (np.angle(z - x) - np.angle(z)) / PI


def harmonic_L(z, x):
    return (np.angle(z - 1.0) - np.angle(z - x)) / PI


def harmonic_U(z, x):
    return (PI - np.angle(z - 1.0)) / PI


# ---------------------------------------------------------------------------
# semi-ideal triangles


@dataclass(frozen=True, eq=False)
class SemiIdealTriangle:
    """Triangle with ideal vertices ``p``, ``q`` and interior apex ``apex``."""

    p: IdealPoint
    q: IdealPoint
    apex: complex
    _frame: MoebiusMap = field(init=False, repr=False)
    _reflected: bool = field(init=False, repr=False)
    _scale: float = field(init=False, repr=False)
    _psi_max: float = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "p", ideal(self.p))
        object.__setattr__(self, "q", ideal(self.q))
        apex = complex(self.apex)
        if not apex.imag > 0.0:
            raise DomainError(f"apex {apex!r} is not an interior point")
        object.__setattr__(self, "apex", apex)
        t = _to_zero_inf(Geodesic(self.p, self.q))
        w = t(apex)
        reflected = w.real < 0.0
        if reflected:
            w = -w.conjugate()
        phi = math.atan2(w.imag, w.real)
        cphi = math.cos(phi)
        object.__setattr__(self, "_frame", t)
        object.__setattr__(self, "_reflected", reflected)
        object.__setattr__(self, "_scale", cphi / abs(w))
        # u_c = cos(phi)^2 and psi_max = arccos(1 - 2 u_c) = pi - 2 phi
        object.__setattr__(self, "_psi_max", PI - 2.0 * phi)

    @property
    def angle(self) -> float:
        """Interior angle at the apex, read from the disk model at the apex."""
        d = abs(_disk_angle(self.apex, self.p) - _disk_angle(self.apex, self.q))
        return min(d, 2.0 * PI - d)

    def area(self) -> float:
        """Gauss-Bonnet area ``pi - angle``."""
        return PI - self.angle

    def frame_area(self) -> float:
        """Area measured in the integration frame (length of the psi range)."""
        return self._psi_max

    def points(self, psi, s):
        """Map rectangle coordinates ``(psi, s)`` to points of the triangle."""
        psi = np.asarray(psi, dtype=float)
        s = np.asarray(s, dtype=float)
        u = (1.0 - np.cos(psi)) / 2.0
        h = np.sin(psi) / 2.0  # sqrt(u (1 - u))
        w = (u + 1j * (h / s)) / self._scale
        if self._reflected:
            w = -np.conj(w)
        return self._frame.inverse()(w)

    def integrate(self, f: Callable[[np.ndarray], np.ndarray], tol: float = 1e-10) -> float:
        """Integral of a vectorised ``f(z)`` against hyperbolic area."""
        return integrate_rectangle(lambda a, b: f(self.points(a, b)), self._psi_max, 1.0, tol)


@dataclass(frozen=True)
class TriangleDecomposition:
    """The diagonals ``(0, 1)`` and ``(x, inf)`` cut ``Q`` into four semi-ideal triangles."""

    cfg: HConfig
    center: complex
    triangles: dict

    @property
    def alpha(self) -> float:
        return self.cfg.alpha

    def areas(self) -> dict[str, float]:
        return {k: t.area() for k, t in self.triangles.items()}

    def total_area(self) -> float:
        return math.fsum(self.areas().values())


def decompose(cfg: HConfig) -> TriangleDecomposition:
    c = cfg.center
    z, x, o = ideal(0.0), ideal(cfg.x), ideal(1.0)
    tris = {
        "R": SemiIdealTriangle(INF, z, c),
        "D": SemiIdealTriangle(z, x, c),
        "L": SemiIdealTriangle(x, o, c),
        "U": SemiIdealTriangle(o, INF, c),
    }
    return TriangleDecomposition(cfg, c, tris)


# ---------------------------------------------------------------------------
# A, B, C


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < PI:
        raise DomainError(f"alpha must lie in (0, pi), got {alpha!r}")
    return alpha


def _A_integrand(beta: float) -> float:
    # inner vertical integral of arg(z)/(pi v^2) above the semicircle,
    # in the angle beta of the point (1 + cos beta)/2 on it
    half = beta / 2.0
    sh = math.sin(half)
    if sh == 0.0:
        return 0.0
    return (half - math.tan(half) * math.log(sh)) / PI


def A_of(alpha: float, tol: float = 1e-12) -> float:
    """``A(alpha) = int_{T_R} chi_R``, reduced to a 1D integral."""
    alpha = _check_alpha(alpha)
    return quad(_A_integrand, alpha, PI, tol)


def _A_deriv(x: float, one_minus_x: float) -> float:
    alpha = 2.0 * math.atan2(math.sqrt(one_minus_x), math.sqrt(x))
    sin_alpha = 2.0 * math.sqrt(x * one_minus_x)
    return alpha / (PI * sin_alpha) - math.log(one_minus_x) / (2.0 * PI * x)


def A_deriv(x: float) -> float:
    """Closed form ``dA/dx = alpha/(pi sin alpha) - log(1 - x)/(2 pi x)``."""
    x = float(x)
    if not 0.0 < x < 1.0:
        raise DomainError(f"x must lie in (0, 1), got {x!r}")
    return _A_deriv(x, 1.0 - x)


def integrate_A_deriv(x0: float = 0.0, x1: float = 1.0, tol: float = 1e-12) -> float:
    """``int_{x0}^{x1} A'(x) dx`` with both endpoint singularities removed by substitution.

    ``x = s^2`` on ``[0, 1/2]`` absorbs the inverse square root at 0 and
    ``x = 1 - e^-u`` on ``[1/2, 1]`` absorbs the logarithm at 1.
    """
    x0, x1 = float(x0), float(x1)
    if not 0.0 <= x0 <= x1 <= 1.0:
        raise DomainError(f"need 0 <= x0 <= x1 <= 1, got {x0!r}, {x1!r}")
    total = 0.0
    lo, hi = x0, min(x1, 0.5)
    if lo < hi:
        total += quad(lambda s: 2.0 * s * _A_deriv(s * s, 1.0 - s * s), math.sqrt(lo), math.sqrt(hi), tol / 2)
    lo, hi = max(x0, 0.5), x1
    if lo < hi:
        u0 = -math.log1p(-lo)
        u1 = math.inf if hi == 1.0 else -math.log1p(-hi)

        def f(u):
            e = math.exp(-u)
            if e == 0.0:
                return 0.0
            return _A_deriv(-math.expm1(-u), e) * e

        total += quad(f, u0, u1, tol / 2)
    return total


def _direct_T_R(alpha: float, harmonic, tol: float) -> float:
    cfg = HConfig.from_alpha(alpha)
    tri = decompose(cfg).triangles["R"]
    return tri.integrate(lambda z: harmonic(z, cfg.x), tol)


def B_of(alpha: float, tol: float = 1e-10, method: str = "identity") -> float:
    """``B(alpha) = int_{T_R} chi_U``.

    ``method="identity"`` uses ``pi/3 - A(pi - alpha)``; ``method="quadrature"``
    integrates the harmonic measure of the arc behind ``U`` directly in 2D.
    """
    alpha = _check_alpha(alpha)
    if method == "identity":
        return THIRD_PI - A_of(PI - alpha, tol)
    if method == "quadrature":
        return _direct_T_R(alpha, harmonic_U, tol)
    raise DomainError(f"unknown method {method!r}")


def C_of(alpha: float, tol: float = 1e-10, method: str = "identity") -> float:
    """``C(alpha) = int_{T_R} chi_L``; the identity route is ``pi - alpha - A - 2B``."""
    alpha = _check_alpha(alpha)
    if method == "identity":
        return PI - alpha - A_of(alpha, tol) - 2.0 * B_of(alpha, tol)
    if method == "quadrature":
        return _direct_T_R(alpha, harmonic_L, tol)
    raise DomainError(f"unknown method {method!r}")


def V_formula(alpha: float, tol: float = 1e-12) -> float:
    """``pi^2 (8 - 16/3) - 4 pi alpha - 8 pi (A(alpha) - A(pi - alpha))``."""
    alpha = _check_alpha(alpha)
    return PI * PI * (8.0 - 16.0 / 3.0) - 4.0 * PI * alpha - 8.0 * PI * (A_of(alpha, tol) - A_of(PI - alpha, tol))


def volume_target(cfg: HConfig) -> float:
    return 8.0 * rogers_l(1.0 - cfg.x)


# ---------------------------------------------------------------------------
# crossing measure and the direct volume routes


def crossing_angle_measure(p: complex, cfg: HConfig) -> float:
    """Measure of unit vectors at ``p`` whose geodesic meets both ``L`` and ``R``."""
    p = complex(p)
    if not (p.imag > 0.0 and math.isfinite(p.imag) and math.isfinite(p.real)):
        raise DomainError(f"point {p!r} is not in the upper half-plane")
    m = kernels.crossing_measure(np.array([p.real]), np.array([p.imag]), cfg.x)
    return float(m[0])


def _measure_on(z: np.ndarray, x: float) -> np.ndarray:
    z = np.ascontiguousarray(z)
    return kernels.crossing_measure(np.ascontiguousarray(z.real), np.ascontiguousarray(z.imag), x)


def V_quadrature(cfg: HConfig, tol: float = 1e-8) -> float:
    """``int_Q crossing_angle_measure dA`` by quadrature over the four triangles.

    The measure is smooth inside each triangle and only kinks along the
    diagonals, so each piece converges spectrally.
    """
    tris = decompose(cfg).triangles.values()
    return math.fsum(t.integrate(lambda z: _measure_on(z, cfg.x), tol / 4) for t in tris)


def _reference_points(rng: np.random.Generator, n: int) -> np.ndarray:
    # uniform in hyperbolic area on the ideal triangle (0, 1, inf)
    psi = rng.random(n) * PI
    s = 1.0 - rng.random(n)  # (0, 1]
    u = (1.0 - np.cos(psi)) / 2.0
    return u + 1j * (np.sin(psi) / 2.0 / s)


def _mc_shard(x: float, seed: int, k: int, n: int) -> tuple[tuple[int, float, float], tuple[int, float, float]]:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, k))))
    c = (1.0 - x) / x
    n1 = n // 2
    n2 = n - n1
    z1 = _reference_points(rng, n1)
    # z -> z/(z + c) carries (0, 1, inf) onto the lower triangle (0, x, 1)
    w = _reference_points(rng, n2)
    z2 = w / (w + c)
    out = []
    for z, m in ((z1, n1), (z2, n2)):
        vals = _measure_on(z, x)
        mean = float(vals.mean())
        out.append((m, mean, float(np.sum((vals - mean) ** 2))))
    return out[0], out[1]


def _merge(a: tuple[int, float, float], b: tuple[int, float, float]) -> tuple[int, float, float]:
    # pairwise combination of (count, mean, sum of squared deviations)
    na, ma, sa = a
    nb, mb, sb = b
    n = na + nb
    d = mb - ma
    return n, ma + d * nb / n, sa + sb + d * d * na * nb / n


def V_montecarlo(cfg: HConfig, n_samples: int = 1_000_000, seed: int = 0, threads: int | None = None) -> tuple[float, float]:
    """Stratified Monte Carlo estimate of the crossing volume and its standard error.

    Each of the two ideal triangles (area ``pi``) receives half the samples,
    drawn uniformly in hyperbolic area, so the importance weight is the
    constant ``pi``.  Samples are drawn in fixed shards of ``MC_SHARD``; shard
    ``k`` has its own stream keyed by ``(seed, k)`` and shards are merged in
    order, so the result does not depend on ``threads``.
    """
    n_samples = int(n_samples)
    if n_samples < MIN_SAMPLES:
        raise ParameterError(f"need at least {MIN_SAMPLES} samples, got {n_samples}")
    seed = int(seed)
    if seed < 0:
        raise ParameterError(f"seed must be nonnegative, got {seed}")
    sizes = [MC_SHARD] * (n_samples // MC_SHARD)
    if n_samples % MC_SHARD:
        sizes.append(n_samples % MC_SHARD)
    jobs = [(cfg.x, seed, k, n) for k, n in enumerate(sizes)]
    workers = max(1, int(threads or os.cpu_count() or 1))
    if workers == 1 or len(jobs) == 1:
        parts = [_mc_shard(*j) for j in jobs]
    else:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda j: _mc_shard(*j), jobs))
    upper, lower = parts[0]
    for a, b in parts[1:]:
        upper, lower = _merge(upper, a), _merge(lower, b)
    estimate = PI * (upper[1] + lower[1])
    var = upper[2] / (upper[0] - 1) / upper[0] + lower[2] / (lower[0] - 1) / lower[0]
    return estimate, PI * math.sqrt(var)


# ---------------------------------------------------------------------------
# report


@dataclass(frozen=True)
class VolumeReport:
    alpha: float
    x: float
    l: float
    A_val: float
    B_val: float
    C_val: float
    V_formula: float
    V_quadrature: float
    V_montecarlo: float
    mc_stderr: float
    target: float

    @property
    def residual(self) -> float:
        return abs(self.V_formula - self.target)

    def row(self) -> tuple[float, ...]:
        return (
            self.alpha,
            self.x,
            self.l,
            self.A_val,
            self.B_val,
            self.C_val,
            self.V_formula,
            self.V_quadrature,
            self.V_montecarlo,
            self.mc_stderr,
            self.target,
            self.residual,
        )


REPORT_COLUMNS = ("alpha", "x", "l", "A", "B", "C", "V_formula", "V_quadrature", "V_mc", "mc_stderr", "target", "residual")


def volume_report(alpha: float, tol: float = 1e-6, n_samples: int = 1_000_000, seed: int = 0, threads: int | None = None) -> VolumeReport:
    cfg = HConfig.from_alpha(alpha)
    # internal quadratures run well below the reporting tolerance
    qtol = min(tol, 1e-10)
    a = A_of(cfg.alpha, qtol)
    b = B_of(cfg.alpha, qtol)
    c = PI - cfg.alpha - a - 2.0 * b
    v = PI * PI * (8.0 - 16.0 / 3.0) - 4.0 * PI * cfg.alpha - 8.0 * PI * (a - A_of(PI - cfg.alpha, qtol))
    vq = V_quadrature(cfg, max(tol, 1e-9))
    vm, se = V_montecarlo(cfg, n_samples, seed, threads)
    return VolumeReport(cfg.alpha, cfg.x, cfg.l, a, b, c, v, vq, vm, se, volume_target(cfg))
