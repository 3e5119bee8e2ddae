"""Test the scalar Bellman functions."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dyadic_bellman.bellman_core import (
    ap2_rhs,
    bellman_dual_composite,
    bellman_star,
    bellman_unweighted,
    doob_constant,
    doob_refined_l2,
    h_p,
    minimize_ap2,
    omega_p,
    thm3_w1_bound,
    thm3_w2_bound,
)
from dyadic_bellman.exceptions import DyadicBellmanDomainError
from dyadic_bellman.models import BellmanPoint, PowerWeightSpec, WeightedBellmanPoint
from dyadic_bellman.weight_theory import power_weight_constants


@pytest.mark.parametrize("p", [1.25, 1.5, 2.0, 3.0, 10.0])
def test_omega_inverts_h(p: float) -> None:
    """H_p(omega_p(y)) = y on a 1000-point grid."""
    for y in np.linspace(0.0, 1.0, 1000):
        z = omega_p(p, float(y))
        assert 1.0 <= z <= p / (p - 1)
        assert abs(h_p(p, z) - y) <= 1e-12


def test_omega_closed_form_p2() -> None:
    """omega_2(y) = 1 + sqrt(1 - y)."""
    for y in np.linspace(0.0, 1.0, 1000):
        assert omega_p(2.0, float(y)) == pytest.approx(1 + math.sqrt(1 - y), abs=1e-12)


def test_omega_examples() -> None:
    """Worked values and endpoints."""
    assert omega_p(2.0, 0.75) == pytest.approx(1.5, abs=1e-12)
    assert omega_p(2.0, 1.0) == 1.0
    assert omega_p(2.0, 0.0) == 2.0
    assert omega_p(3.0, 0.0) == 1.5


def test_omega_domain() -> None:
    """y outside [0, 1] and p <= 1 are rejected."""
    with pytest.raises(DyadicBellmanDomainError, match=r"y must lie in \[0,1\]"):
        omega_p(2.0, 1.5)
    with pytest.raises(DyadicBellmanDomainError):
        omega_p(2.0, -0.1)
    with pytest.raises(DyadicBellmanDomainError):
        omega_p(1.0, 0.5)


@pytest.mark.parametrize("p", [1.5, 2.0, 2.25, 3.0])
@pytest.mark.parametrize("y", [1e-300, 1e-17, 1 - 1e-16])
def test_omega_below_rounding(p: float, y: float) -> None:
    """Arguments within rounding of an endpoint return that endpoint."""
    z = omega_p(p, y)
    assert 1.0 <= z <= p / (p - 1)
    assert abs(h_p(p, z) - y) <= 1e-12
    if y < 0.5:
        assert z == pytest.approx(p / (p - 1), rel=1e-12)


def test_bellman_unweighted_tiny_f() -> None:
    """f**p/F far below rounding gives the Doob envelope."""
    value = bellman_unweighted(BellmanPoint(2.25, 1.0, 1e-8))
    assert value == pytest.approx(doob_constant(2.25), rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(
    p=st.floats(min_value=1.05, max_value=20.0),
    y1=st.floats(min_value=0.0, max_value=1.0),
    y2=st.floats(min_value=0.0, max_value=1.0),
)
def test_omega_decreasing(p: float, y1: float, y2: float) -> None:
    """omega_p is nonincreasing in y."""
    low, high = sorted((y1, y2))
    assert omega_p(p, low) >= omega_p(p, high) - 1e-12


def test_bellman_unweighted_p2_identity() -> None:
    """B_2(F, f) = (sqrt(F) + sqrt(F - f**2))**2 on a grid."""
    for big_f in np.linspace(0.5, 5.0, 10):
        for fraction in np.linspace(0.0, 0.99, 10):
            f = fraction * math.sqrt(big_f)
            expected = (math.sqrt(big_f) + math.sqrt(max(big_f - f * f, 0.0))) ** 2
            value = bellman_unweighted(BellmanPoint(2.0, float(big_f), float(f)))
            assert value == pytest.approx(expected, rel=1e-12)
            assert doob_refined_l2(float(big_f), float(f)) == pytest.approx(
                value, rel=1e-12
            )


def test_bellman_unweighted_examples() -> None:
    """Worked value, endpoints and the Doob envelope."""
    assert bellman_unweighted(BellmanPoint(2.0, 2.0, 1.0)) == pytest.approx(
        5.8284271247461903, rel=1e-12
    )
    assert bellman_unweighted(BellmanPoint(2.0, 1.0, 1.0)) == pytest.approx(1.0)
    assert bellman_unweighted(BellmanPoint(2.0, 1.0, 0.0)) == pytest.approx(4.0)
    assert doob_constant(2.0) == 4.0
    for p in (1.5, 2.0, 3.0):
        assert bellman_unweighted(BellmanPoint(p, 1.0, 0.0)) == pytest.approx(
            doob_constant(p)
        )


def test_bellman_point_domain() -> None:
    """f**p > F and F <= 0 are outside the domain."""
    with pytest.raises(DyadicBellmanDomainError):
        BellmanPoint(2.0, 1.0, 2.0)
    with pytest.raises(DyadicBellmanDomainError):
        BellmanPoint(2.0, 0.0, 0.0)
    with pytest.raises(DyadicBellmanDomainError):
        WeightedBellmanPoint.build(2.0, 1.0, 1.0, 1.0, 2.0)
    with pytest.raises(DyadicBellmanDomainError):
        WeightedBellmanPoint.build(1.0, 1.0, 1.0, 1.0, 1.0)
    with pytest.raises(DyadicBellmanDomainError):
        WeightedBellmanPoint.build(2.0, 0.0, 0.0, 1.0, 1.0)


def test_weighted_point_allows_f_power_above_f() -> None:
    """Only c*f**p <= (p-1)**(p-1) * a**p * F binds the weighted domain."""
    point = WeightedBellmanPoint.build(2.0, 1.0, 2.0, 1.0, 0.1)
    assert point.argument == pytest.approx(0.4)
    # 1 * omega_2(0.4)**2 = (1 + sqrt(0.6))**2.
    assert bellman_star(point) == pytest.approx((1 + math.sqrt(0.6)) ** 2, rel=1e-12)
    beta, value = minimize_ap2(2.0, 1.0, 0.1, 1.0, 2.0)
    assert beta > 0
    assert value == pytest.approx(bellman_star(point), rel=1e-6)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_bellman_star_reduces_to_unweighted(p: float) -> None:
    """Constants of the constant weight give back B_p."""
    constants = power_weight_constants(PowerWeightSpec(k=1.0, b=0.0, p=p))
    for big_f in np.linspace(0.5, 3.0, 10):
        for fraction in np.linspace(0.0, 0.99, 10):
            f = float(fraction * big_f ** (1 / p))
            star = bellman_star(
                WeightedBellmanPoint.build(p, float(big_f), f, constants.a, constants.c)
            )
            plain = bellman_unweighted(BellmanPoint(p, float(big_f), f))
            assert star == pytest.approx(plain, rel=1e-12)


def test_bellman_star_worked_value() -> None:
    """B*(2, 2, 1, a=1, c=1) = 2*(1 + sqrt(0.5))**2."""
    value = bellman_star(WeightedBellmanPoint.build(2.0, 2.0, 1.0, 1.0, 1.0))
    assert value == pytest.approx(2 * (1 + math.sqrt(0.5)) ** 2, rel=1e-12)


@pytest.mark.parametrize(("p", "big_f", "f_max"), [(2.0, 2.0, 1.4), (3.0, 2.0, 1.25)])
def test_minimize_ap2_matches_closed_form(p: float, big_f: float, f_max: float) -> None:
    """The minimized Young bound equals B* on a 50-point grid."""
    constants = power_weight_constants(PowerWeightSpec(k=1.0, b=0.0, p=p))
    for f in np.linspace(0.0, f_max, 50):
        beta, value = minimize_ap2(p, constants.a, constants.c, big_f, float(f))
        expected = bellman_star(
            WeightedBellmanPoint.build(p, big_f, float(f), constants.a, constants.c)
        )
        assert beta > 0
        assert value == pytest.approx(expected, rel=1e-6)
        assert ap2_rhs(p, constants.a, constants.c, big_f, float(f), beta) == (
            pytest.approx(value, rel=1e-12)
        )


def test_ap2_domain() -> None:
    """beta must be positive and B may not exceed A."""
    with pytest.raises(DyadicBellmanDomainError):
        ap2_rhs(2.0, 1.0, 1.0, 2.0, 1.0, 0.0)
    with pytest.raises(DyadicBellmanDomainError):
        minimize_ap2(2.0, 1.0, 1.0, 1.0, 2.0)


def test_dual_composite_monotone() -> None:
    """The composite increases in x and decreases in y."""
    base = bellman_dual_composite(2.0, 2.0, 1.0)
    assert bellman_dual_composite(2.0, 3.0, 1.0) > base
    assert bellman_dual_composite(2.0, 2.0, 1.2) < base
    assert base == pytest.approx(2.0 * omega_p(2.0, 0.5) ** 2)
    with pytest.raises(DyadicBellmanDomainError):
        bellman_dual_composite(2.0, 1.0, 2.0)


def test_weighted_bounds_order() -> None:
    """W1 <= W2 for the constant weight, where m = f and [w]_p = 1."""
    p, big_f, f = 2.0, 2.0, 1.0
    first = thm3_w1_bound(p, big_f, f, f, 1.0, 1.0, 1.0)
    second = thm3_w2_bound(p, big_f, f, 1.0, 1.0)
    assert 0 < first <= second
    assert second == pytest.approx(4 * bellman_unweighted(BellmanPoint(p, big_f, f)))
    with pytest.raises(DyadicBellmanDomainError):
        thm3_w2_bound(p, big_f, f, 1.0, 0.0)
    with pytest.raises(DyadicBellmanDomainError):
        thm3_w1_bound(p, big_f, f, -1.0, 1.0, 1.0, 1.0)


@settings(max_examples=100, deadline=None)
@given(
    p=st.sampled_from([1.5, 2.0, 3.0, 5.0]),
    big_f=st.floats(min_value=0.1, max_value=10.0),
    growth=st.floats(min_value=0.0, max_value=5.0),
    fractions=st.tuples(
        st.floats(min_value=0.0, max_value=1.0),
        st.floats(min_value=0.0, max_value=1.0),
    ),
)
def test_bellman_unweighted_monotone(
    p: float, big_f: float, growth: float, fractions: tuple[float, float]
) -> None:
    """B_p grows with F and shrinks with f."""
    low, high = sorted(fractions)
    f_low, f_high = low * big_f ** (1 / p), high * big_f ** (1 / p)
    at_low = bellman_unweighted(BellmanPoint(p, big_f, f_low))
    at_high = bellman_unweighted(BellmanPoint(p, big_f, f_high))
    assert at_high <= at_low * (1 + 1e-12)
    larger = bellman_unweighted(BellmanPoint(p, big_f + growth, f_low))
    assert larger >= at_low * (1 - 1e-12)
