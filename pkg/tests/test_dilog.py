import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bridgeman import dilog
from bridgeman.errors import DomainError

ZETA2 = math.pi**2 / 6
# mpmath polylog at 30 digits
LI2_HALF = 0.58224052646501250590
ROGERS_FROZEN = {0.1: 0.22391856747132942121, 0.3: 0.54084297631883188370, 0.7: 1.1040910905293945528, 0.9: 1.4210154993768970153}


def test_li2_endpoints():
    assert dilog.li2(0.0) == 0.0
    assert abs(dilog.li2(1.0) - ZETA2) < 1e-15


def test_li2_half_against_direct_series():
    direct = math.fsum(0.5**n / n**2 for n in range(1, 80))
    assert abs(dilog.li2(0.5) - direct) < 1e-13
    assert abs(dilog.li2(0.5) - LI2_HALF) < 1e-15


@settings(max_examples=200, deadline=None)
@given(st.floats(0.0, 1.0))
def test_li2_matches_mpmath(x):
    assert abs(dilog.li2(x) - float(mpmath.polylog(2, x))) < 1e-13


def test_rogers_endpoints_and_half():
    assert dilog.rogers_l(0.0) == 0.0
    assert dilog.rogers_l(1.0) == ZETA2
    assert abs(dilog.rogers_l(0.5) - math.pi**2 / 12) < 1e-15
    oracle = dilog.li2(0.5) + 0.5 * math.log(0.5) ** 2
    assert abs(dilog.rogers_l(0.5) - oracle) < 1e-15


@pytest.mark.parametrize("x,value", sorted(ROGERS_FROZEN.items()))
def test_rogers_frozen_values(x, value):
    assert abs(dilog.rogers_l(x) - value) < 1e-14


@pytest.mark.parametrize("bad", [-1e-12, 1.0000001, math.nan, 2.0])
def test_domain_errors(bad):
    with pytest.raises(DomainError):
        dilog.li2(bad)
    with pytest.raises(DomainError):
        dilog.rogers_l(bad)


def test_reflection_on_random_points():
    xs = np.random.default_rng(1).random(1000)
    worst = max(abs(dilog.rogers_l(x) + dilog.rogers_l(1 - x) - ZETA2) for x in xs)
    assert worst < 1e-11


def test_vectorised_matches_scalar():
    xs = np.concatenate([[0.0, 0.5, 1.0], np.random.default_rng(2).random(500)])
    arr = dilog.rogers_l_array(xs)
    assert np.max(np.abs(arr - [dilog.rogers_l(x) for x in xs])) < 1e-15
    with pytest.raises(DomainError):
        dilog.rogers_l_array([0.2, 1.5])


def test_strictly_increasing():
    grid = np.linspace(0.0, 1.0, 1000)
    vals = [dilog.rogers_l(x) for x in grid]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_derivative_closed_form():
    assert abs(dilog.rogers_l_deriv(0.5) - 2 * math.log(2)) < 1e-15
    assert abs(dilog.rogers_l_deriv(0.3) - dilog.rogers_l_deriv(0.7)) < 1e-13
    h = 1e-6
    fd = (dilog.rogers_l(0.7 + h) - dilog.rogers_l(0.7 - h)) / (2 * h)
    assert abs(fd - dilog.rogers_l_deriv(0.7)) < 1e-6
    for bad in (0.0, 1.0):
        with pytest.raises(DomainError):
            dilog.rogers_l_deriv(bad)


def test_derivative_symmetry_and_finite_differences():
    rng = np.random.default_rng(3)
    for x in rng.uniform(0.01, 0.99, 100):
        assert abs(dilog.rogers_l_deriv(x) - dilog.rogers_l_deriv(1 - x)) < 1e-13
        h = 1e-6
        fd = (dilog.rogers_l(x + h) - dilog.rogers_l(x - h)) / (2 * h)
        assert abs(fd - dilog.rogers_l_deriv(x)) < 1e-6


def test_summand_values():
    l_half = 2 * math.atanh(1 / math.sqrt(2))
    assert abs(l_half - 1.7627471740390860505) < 1e-15
    assert abs(dilog.bridgeman_summand(l_half) - math.pi**2 / 12) < 1e-14
    assert abs(dilog.bridgeman_summand(1e-9) - ZETA2) < 1e-6
    assert dilog.bridgeman_summand(800.0) == 0.0 or dilog.bridgeman_summand(800.0) < 1e-300
    with pytest.raises(DomainError):
        dilog.bridgeman_summand(0.0)


def test_summand_range_and_monotone():
    grid = np.linspace(0.01, 40.0, 2000)
    vals = [dilog.bridgeman_summand(l) for l in grid]
    assert all(0.0 < v < ZETA2 for v in vals)
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_abel_examples():
    assert abs(dilog.abel_residual(0.7, 0.3) - dilog.abel_residual(0.9, 0.2)) < 1e-10
    assert abs(dilog.abel_residual(0.6, 0.5) - dilog.abel_residual(0.99, 0.01)) < 1e-9
    assert all(0 < a < 1 for a in dilog.abel_arguments(0.7, 0.3))
    with pytest.raises(DomainError):
        dilog.abel_residual(0.3, 0.7)


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-6, 1 - 1e-6), st.floats(1e-6, 1 - 1e-6))
def test_abel_constancy_property(s, t):
    s1, s2 = max(s, t), min(s, t)
    if not s2 < s1:
        return
    assert abs(dilog.abel_residual(s1, s2) - dilog.abel_residual(0.7, 0.3)) < 1e-10


def test_evaluate_value_object():
    v = dilog.evaluate(0.25)
    assert v.x == 0.25 and v.value == dilog.rogers_l(0.25) and v.li2 == dilog.li2(0.25)
    with pytest.raises(DomainError):
        dilog.DilogValue(1.5, 0.0, 0.0)
