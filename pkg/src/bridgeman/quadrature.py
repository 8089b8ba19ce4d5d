"""Quadrature rules.

1D integrals with endpoint singularities go through QUADPACK (``scipy.integrate.quad``)
after a smoothing substitution chosen by the caller.  2D integrals over
semi-ideal triangles use a tensor product of composite Gauss-Legendre rules
graded geometrically toward 0, where the cusp coordinates meet.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import ToleranceError

__all__ = ["quad", "graded_rule", "product_rule", "integrate_rectangle"]


def quad(f: Callable[[float], float], a: float, b: float, tol: float, limit: int = 200) -> float:
    """Adaptive Gauss-Kronrod integral of ``f`` over ``[a, b]`` with absolute error <= ``tol``."""
    value, err = integrate.quad(f, a, b, epsabs=tol * 0.1, epsrel=0.0, limit=limit)
    if not err <= tol:
        raise ToleranceError(f"quad on [{a}, {b}]: error estimate {err:.3e} > tol {tol:.3e}")
    return value


@lru_cache(maxsize=32)
def _graded_unit(levels: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    g, w = np.polynomial.legendre.leggauss(order)
    breaks = [0.0] + [2.0**-k for k in range(levels, -1, -1)]
    nodes, weights = [], []
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        half = (hi - lo) / 2.0
        nodes.append(lo + half * (g + 1.0))
        weights.append(half * w)
    return np.concatenate(nodes), np.concatenate(weights)


def graded_rule(length: float, levels: int = 30, order: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on ``[0, length]`` with panels ``[2^-k-1, 2^-k] * length``."""
    nodes, weights = _graded_unit(levels, order)
    return nodes * length, weights * length


def product_rule(len_a: float, len_b: float, levels: int, order: int):
    """Tensor-product graded rule on ``[0, len_a] x [0, len_b]`` (flattened)."""
    a, wa = graded_rule(len_a, levels, order)
    b, wb = graded_rule(len_b, levels, order)
    aa, bb = np.meshgrid(a, b, indexing="ij")
    return aa.ravel(), bb.ravel(), np.outer(wa, wb).ravel()


def integrate_rectangle(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    len_a: float,
    len_b: float,
    tol: float,
    rules: tuple[tuple[int, int], ...] = ((24, 12), (36, 20), (48, 28)),
) -> float:
    """Integrate a vectorised ``f(a, b)`` over a rectangle, refining until two rules agree to ``tol``."""
    prev = None
    change = float("inf")
    for levels, order in rules:
        a, b, w = product_rule(len_a, len_b, levels, order)
        value = float(np.dot(f(a, b), w))
        if prev is not None:
            change = abs(value - prev)
            if change <= tol:
                return value
        prev = value
    raise ToleranceError(f"product rule did not settle to {tol:.1e} (last change {change:.3e})")
