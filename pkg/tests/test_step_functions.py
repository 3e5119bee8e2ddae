"""Test rearrangements, Hardy averages and integrals of piecewise powers."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dyadic_bellman.exceptions import (
    DyadicBellmanDomainError,
    DyadicBellmanIntegrabilityError,
)
from dyadic_bellman.measure_tree import build_uniform_tree, load_instance
from dyadic_bellman.models import LeafFunction, PiecewisePower
from dyadic_bellman.step_functions import (
    cell_averages,
    decreasing_rearrangement,
    delta_w,
    hardy_average,
    integrate,
    integrate_power_composite,
)

from . import fixture_path


def test_rearrangement_sorts_and_merges() -> None:
    """Equal values merge into one step; steps follow the leaf measures."""
    tree, functions = load_instance(fixture_path("uneven_tree.json"))
    result = decreasing_rearrangement(tree, functions["phi"])
    np.testing.assert_allclose(result.values, [8.0, 5.0, 2.0, 0.0])
    np.testing.assert_allclose(result.masses, [0.375, 0.25, 0.25, 0.125])
    assert result.function.nonincreasing
    assert result.source is functions["phi"]

    tree = build_uniform_tree(2, 2)
    merged = decreasing_rearrangement(tree, LeafFunction(tree, np.array([1, 3, 3, 1])))
    np.testing.assert_allclose(merged.values, [3.0, 1.0])
    np.testing.assert_allclose(merged.masses, [0.5, 0.5])


@settings(max_examples=50, deadline=None)
@given(
    st.lists(
        st.floats(min_value=0.0, max_value=100.0, allow_nan=False),
        min_size=8,
        max_size=8,
    )
)
def test_rearrangement_is_equimeasurable(values: list[float]) -> None:
    """The rearrangement keeps the integral and every power integral."""
    tree = build_uniform_tree(3, 2)
    phi = LeafFunction(tree, np.array(values))
    function = decreasing_rearrangement(tree, phi).function
    assert integrate(function) == pytest.approx(float(np.mean(values)), abs=1e-9)
    squares = integrate_power_composite(function, 2.0, PiecewisePower.constant(1.0))
    expected = float(np.mean(np.square(values)))
    assert squares == pytest.approx(expected, rel=1e-9, abs=1e-9)


def test_hardy_average_of_power() -> None:
    """The Hardy average of t**e is t**e/(e + 1)."""
    average = hardy_average(PiecewisePower.power(3.0, -0.5))
    assert average.terms == (((6.0, -0.5),),)
    assert average.evaluate(0.25)[0] == pytest.approx(12.0)


def test_hardy_average_of_steps() -> None:
    """On later steps the average carries K/t."""
    g = PiecewisePower.step([0.0, 0.5, 1.0], [4.0, 2.0])
    average = hardy_average(g)
    # On (1/2, 1]: (1 + 2t)/t.
    assert average.evaluate(1.0)[0] == pytest.approx(3.0)
    assert average.evaluate(0.75)[0] == pytest.approx((1.0 + 1.5) / 0.75)
    assert average.evaluate(0.5)[0] == pytest.approx(4.0)


def test_hardy_average_errors() -> None:
    """Non-integrable heads and c/t on later pieces are rejected."""
    with pytest.raises(DyadicBellmanIntegrabilityError):
        hardy_average(PiecewisePower.power(1.0, -1.0))
    g = PiecewisePower((0.0, 0.5, 1.0), (((1.0, 0.0),), ((1.0, -1.0),)))
    with pytest.raises(DyadicBellmanDomainError):
        hardy_average(g)


def test_integrate_closed_form() -> None:
    """Integrals of power sums, over the whole and over parts of (0, 1]."""
    data = PiecewisePower.from_json(
        {
            "pieces": [
                {"lo": 0.0, "hi": 0.25, "terms": [{"c": 2.0, "e": -0.5}]},
                {
                    "lo": 0.25,
                    "hi": 1.0,
                    "terms": [{"c": 1.5, "e": 0.0}, {"c": 0.5, "e": 1.0}],
                },
            ]
        }
    )
    head = 4 * math.sqrt(0.25)
    tail = 1.5 * 0.75 + 0.25 * (1 - 0.0625)
    assert integrate(data) == pytest.approx(head + tail)
    assert integrate(data, 0.25, 1.0) == pytest.approx(tail)
    with pytest.raises(DyadicBellmanDomainError):
        integrate(data, 0.5, 0.25)
    with pytest.raises(DyadicBellmanIntegrabilityError):
        integrate(PiecewisePower.power(1.0, -1.5))


def test_composite_closed_form_and_quadrature() -> None:
    """Single-term pieces are exact, mixed pieces agree with the closed form."""
    value = integrate_power_composite(
        PiecewisePower.power(1.0, -0.25), 2.0, PiecewisePower.power(1.0, 0.5)
    )
    assert value == pytest.approx(1.0, rel=1e-12)

    # (1 + t)**2 * t**0.5 expands into closed-form power terms.
    mixed = PiecewisePower((0.0, 1.0), (((1.0, 0.0), (1.0, 1.0)),), nonneg=True)
    expected = 1 / 1.5 + 2 / 2.5 + 1 / 3.5
    result = integrate_power_composite(mixed, 2.0, PiecewisePower.power(1.0, 0.5))
    assert result == pytest.approx(expected, rel=1e-9)


def test_composite_singular_mixed_head() -> None:
    """Mixed terms reaching 0 are split geometrically toward 0."""
    base = PiecewisePower((0.0, 1.0), (((1.0, -0.3), (1.0, 0.0)),), nonneg=True)
    expected = 1 / 0.4 + 2 / 0.7 + 1.0
    assert integrate_power_composite(
        base, 2.0, PiecewisePower.constant(1.0)
    ) == pytest.approx(expected, rel=1e-8)


def test_composite_errors() -> None:
    """Non-integrable integrands and bad exponents are rejected."""
    with pytest.raises(DyadicBellmanIntegrabilityError):
        integrate_power_composite(
            PiecewisePower.power(1.0, -0.6), 2.0, PiecewisePower.constant(1.0)
        )
    with pytest.raises(DyadicBellmanDomainError):
        integrate_power_composite(
            PiecewisePower.constant(1.0), 0.0, PiecewisePower.constant(1.0)
        )


def test_delta_w_extremal() -> None:
    """Delta_w of the extremal g with alpha_g = sqrt(2) - 1 is 2*(1 + sqrt(0.5))**2."""
    alpha_g = math.sqrt(2) - 1
    g = PiecewisePower.power(1 - alpha_g, -alpha_g)
    value = delta_w(g, PiecewisePower.constant(1.0), 2.0)
    assert value == pytest.approx(2 * (1 + math.sqrt(0.5)) ** 2, rel=1e-9)


def test_delta_w_requires_flags() -> None:
    """Delta_w needs a nonnegative nonincreasing g and p > 1."""
    increasing = PiecewisePower.power(1.0, 1.0)
    with pytest.raises(DyadicBellmanDomainError):
        delta_w(increasing, PiecewisePower.constant(1.0), 2.0)
    with pytest.raises(DyadicBellmanDomainError):
        delta_w(PiecewisePower.constant(1.0), PiecewisePower.constant(1.0), 1.0)


def test_cell_averages() -> None:
    """Cell averages of t**-0.5 over halves."""
    averages = cell_averages(PiecewisePower.power(1.0, -0.5), [0.0, 0.5, 1.0])
    np.testing.assert_allclose(
        averages, [2 * math.sqrt(0.5) / 0.5, 2 * (1 - math.sqrt(0.5)) / 0.5]
    )


def _random_decreasing(seed: int) -> PiecewisePower:
    """Draw a decreasing step function, sometimes with a t**-e head."""
    rng = np.random.default_rng(seed)
    count = int(rng.integers(1, 6))
    cuts = np.sort(rng.uniform(0.05, 0.95, size=count - 1))
    breakpoints = np.concatenate(([0.0], cuts, [1.0]))
    values = np.sort(rng.uniform(0.1, 5.0, size=count))[::-1]
    terms = [((float(value), 0.0),) for value in values]
    if rng.random() < 0.5:
        exponent = float(rng.uniform(0.0, 0.2))
        terms[0] = ((float(values[0]) * breakpoints[1] ** exponent, -exponent),)
    return PiecewisePower(
        tuple(breakpoints.tolist()), tuple(terms), nonneg=True, nonincreasing=True
    )


GRID = np.linspace(1e-3, 1.0, 400)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_hardy_average_dominates_and_decreases(seed: int) -> None:
    """For nonincreasing g the average is >= g and nonincreasing."""
    g = _random_decreasing(seed)
    average = hardy_average(g)
    assert average.nonincreasing
    values = average.evaluate(GRID)
    assert np.all(values >= g.evaluate(GRID) * (1 - 1e-12))
    assert np.all(np.diff(values) <= 1e-12 * values[:-1])


@settings(max_examples=50, deadline=None)
@given(
    seed=st.integers(min_value=0, max_value=2**32 - 1),
    first=st.floats(min_value=0.0, max_value=10.0),
    second=st.floats(min_value=0.0, max_value=10.0),
)
def test_hardy_average_is_linear(seed: int, first: float, second: float) -> None:
    """The average of a*g + b*h is a*A(g) + b*A(h) for steps on one partition."""
    rng = np.random.default_rng(seed)
    breakpoints = np.concatenate(([0.0], np.sort(rng.uniform(0.05, 0.95, 3)), [1.0]))
    g_values, h_values = rng.uniform(0.0, 5.0, size=(2, 4))
    g = PiecewisePower.step(breakpoints, g_values)
    h = PiecewisePower.step(breakpoints, h_values)
    combined = PiecewisePower.step(breakpoints, first * g_values + second * h_values)
    expected = first * hardy_average(g).evaluate(GRID)
    expected += second * hardy_average(h).evaluate(GRID)
    np.testing.assert_allclose(
        hardy_average(combined).evaluate(GRID), expected, rtol=1e-10, atol=1e-12
    )


@settings(max_examples=50, deadline=None)
@given(
    seed=st.integers(min_value=0, max_value=2**32 - 1),
    middle=st.floats(min_value=0.01, max_value=0.99),
)
def test_integrate_is_additive(seed: int, middle: float) -> None:
    """Integrals over (0, m] and (m, 1] add up to the whole."""
    g = _random_decreasing(seed)
    whole = integrate(g)
    assert integrate(g, 0.0, middle) + integrate(g, middle, 1.0) == pytest.approx(
        whole, rel=1e-12
    )


@settings(max_examples=25, deadline=None)
@given(
    seed=st.integers(min_value=0, max_value=2**32 - 1),
    p=st.sampled_from([1.5, 2.0, 3.0]),
)
def test_delta_w_dominates_plain_integral(seed: int, p: float) -> None:
    """Delta_w(g) >= integral of g**p * w** since the average dominates g."""
    g = _random_decreasing(seed)
    wss = PiecewisePower.power(1.0, -0.25)
    plain = integrate_power_composite(g, p, wss)
    assert delta_w(g, wss, p) >= plain * (1 - 1e-9)
