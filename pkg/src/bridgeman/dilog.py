"""Real dilogarithm and Rogers dilogarithm on [0, 1].

Li2 is summed from its Taylor series on [0, 1/2] and reflected through
``Li2(x) + Li2(1 - x) = pi^2/6 - log(x) log(1 - x)`` above 1/2, so the series
argument never exceeds 1/2 and every term at least halves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError

__all__ = [
    "ZETA2",
    "DilogValue",
    "li2",
    "rogers_l",
    "rogers_l_array",
    "rogers_l_deriv",
    "bridgeman_summand",
    "abel_arguments",
    "abel_residual",
    "evaluate",
]

ZETA2 = math.pi**2 / 6

_TERM_EPS = 1e-16
_MAX_TERMS = 200


@dataclass(frozen=True)
class DilogValue:
    x: float
    li2: float
    value: float

    def __post_init__(self):
        if not 0.0 <= self.x <= 1.0:
            raise DomainError(f"dilogarithm argument {self.x!r} outside [0, 1]")


def _check_unit(x: float, name: str = "x") -> float:
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"{name}={x!r} outside [0, 1]")
    return x


def _li2_series(x: float) -> float:
    # 0 <= x <= 1/2
    total = 0.0
    power = 1.0
    for n in range(1, _MAX_TERMS + 1):
        power *= x
        term = power / (n * n)
        total += term
        if term < _TERM_EPS:
            return total
    raise ConvergenceError(f"Li2 series did not converge in {_MAX_TERMS} terms at x={x!r}")


def li2(x: float) -> float:
    """Dilogarithm ``Li2(x) = sum x**n / n**2`` for real ``x`` in [0, 1]."""
    x = _check_unit(x)
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return ZETA2
    if x <= 0.5:
        return _li2_series(x)
    y = 1.0 - x
    return ZETA2 - math.log(x) * math.log(y) - _li2_series(y)


def rogers_l(x: float) -> float:
    """Rogers dilogarithm ``L(x) = Li2(x) + log(x) log(1 - x) / 2``.

    The endpoint values are the continuous limits ``L(0) = 0`` and
    ``L(1) = pi^2/6``.
    """
    x = _check_unit(x)
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return ZETA2
    if x <= 0.5:
        return _li2_series(x) + 0.5 * math.log(x) * math.log1p(-x)
    y = 1.0 - x
    return ZETA2 - (_li2_series(y) + 0.5 * math.log(y) * math.log1p(-y))


def _rogers_small(y: np.ndarray) -> np.ndarray:
    # vectorised L on (0, 1/2]
    total = np.zeros_like(y)
    power = np.ones_like(y)
    for n in range(1, _MAX_TERMS + 1):
        power = power * y
        term = power / (n * n)
        total += term
        if not np.any(term >= _TERM_EPS):
            break
    else:
        raise ConvergenceError("vectorised Li2 series did not converge")
    return total + 0.5 * np.log(y) * np.log1p(-y)


def rogers_l_array(x) -> np.ndarray:
    """Vectorised :func:`rogers_l` for an array of arguments in [0, 1]."""
    x = np.asarray(x, dtype=np.float64)
    if x.size and (np.min(x) < 0.0 or np.max(x) > 1.0):
        raise DomainError("rogers_l_array arguments must lie in [0, 1]")
    out = np.empty_like(x)
    out[x == 0.0] = 0.0
    out[x == 1.0] = ZETA2
    low = (x > 0.0) & (x <= 0.5)
    high = (x > 0.5) & (x < 1.0)
    if np.any(low):
        out[low] = _rogers_small(x[low])
    if np.any(high):
        out[high] = ZETA2 - _rogers_small(1.0 - x[high])
    return out


def rogers_l_deriv(x: float) -> float:
    """Closed-form derivative ``L'(x) = -(log(1-x)/x + log(x)/(1-x)) / 2`` on (0, 1)."""
    x = float(x)
    if not 0.0 < x < 1.0:
        raise DomainError(f"L'(x) diverges at x={x!r}; need 0 < x < 1")
    return -0.5 * (math.log1p(-x) / x + math.log(x) / (1.0 - x))


def bridgeman_summand(l: float) -> float:
    """``L(1 / cosh^2(l/2))``, the contribution of one orthogeodesic of length ``l``."""
    l = float(l)
    if not l > 0.0:
        raise DomainError(f"orthogeodesic length must be positive, got {l!r}")
    # 1/cosh^2(l/2) = 4 e^-l / (1 + e^-l)^2, overflow-free; rounding can nudge it past 1
    e = math.exp(-l)
    return rogers_l(min(1.0, 4.0 * e / (1.0 + e) ** 2))


def abel_arguments(s1: float, s2: float) -> tuple[float, float, float, float, float]:
    """The five arguments of Abel's five-term relation at ``0 < s2 < s1 < 1``."""
    s1, s2 = float(s1), float(s2)
    if not 0.0 < s2 < s1 < 1.0:
        raise DomainError(f"need 0 < s2 < s1 < 1, got s1={s1!r}, s2={s2!r}")
    return (
        s1,
        s2,
        s2 / s1,
        (1.0 - 1.0 / s1) / (1.0 - 1.0 / s2),
        (1.0 - s1) / (1.0 - s2),
    )


def abel_residual(s1: float, s2: float) -> float:
    """Five-term combination ``f(s1) - f(s2) + f(s2/s1) - f(...) + f(...)`` with ``f = L``.

    For the Rogers dilogarithm this is independent of ``(s1, s2)``.
    """
    a1, a2, a3, a4, a5 = abel_arguments(s1, s2)
    return rogers_l(a1) - rogers_l(a2) + rogers_l(a3) - rogers_l(a4) + rogers_l(a5)


def evaluate(x: float) -> DilogValue:
    return DilogValue(x=float(x), li2=li2(x), value=rogers_l(x))
