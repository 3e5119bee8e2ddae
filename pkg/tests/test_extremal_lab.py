"""Test extremal functions, geometric profiles and the lower-bound sequence."""

import math

import numpy as np
import pytest

from dyadic_bellman.bellman_core import bellman_star
from dyadic_bellman.exceptions import (
    DyadicBellmanDivergenceError,
    DyadicBellmanDomainError,
    DyadicBellmanIntegrabilityError,
)
from dyadic_bellman.extremal_lab import (
    discretize_power,
    extremal_g,
    prop2_derive_kb,
    prop2_instance,
    prop2_limit_rhs,
    profile_average_factor,
    profile_on_tree,
    profile_tail_average,
    salpha_ap_constant,
    sharpness_gap,
    sigma_profile,
    solve_ap5,
)
from dyadic_bellman.measure_tree import build_salpha, integrate_leaves
from dyadic_bellman.models import (
    GeometricProfile,
    PowerWeightSpec,
    Prop2Config,
    WeightedBellmanPoint,
)
from dyadic_bellman.step_functions import delta_w, integrate
from dyadic_bellman.weight_theory import ap_constant_tree, power_weight_constants

from . import load_json_fixture


def test_extremal_worked_value() -> None:
    """p=2, k=1, b=0, F=2, f=1 gives alpha_g = sqrt(2) - 1 and attains B*."""
    alpha_g = solve_ap5(2.0, 1.0, 0.0, 2.0, 1.0)
    assert alpha_g == pytest.approx(math.sqrt(2) - 1, abs=1e-12)

    g = extremal_g(1.0, alpha_g)
    assert integrate(g) == pytest.approx(1.0, rel=1e-12)
    value = delta_w(g, PowerWeightSpec(k=1.0, b=0.0, p=2.0).weight(), 2.0)
    assert value == pytest.approx(5.828427124746190, rel=1e-9)
    bound = bellman_star(WeightedBellmanPoint.build(2.0, 2.0, 1.0, 1.0, 1.0))
    assert value == pytest.approx(bound, rel=1e-9)


@pytest.mark.parametrize(
    ("p", "k", "b", "big_f", "f"),
    [(2.0, 1.0, -0.5, 3.0, 1.0), (3.0, 2.0, 0.5, 2.0, 1.0), (1.5, 1.0, 0.0, 1.5, 1.0)],
)
def test_sharpness_gap(  # noqa: PLR0913
    p: float, k: float, b: float, big_f: float, f: float
) -> None:
    """The extremal attains B* for power weights."""
    assert sharpness_gap(p, k, b, big_f, f) < 1e-9


def test_solve_ap5_solves_its_equation() -> None:
    """(1-alpha)**p/(1+b-alpha*p) = F/(k*f**p) at the solution."""
    p, k, b, big_f, f = 3.0, 2.0, 0.5, 2.0, 1.0
    alpha = solve_ap5(p, k, b, big_f, f)
    assert (1 - alpha) ** p / (1 + b - alpha * p) == pytest.approx(
        big_f / (k * f**p), rel=1e-10
    )
    assert 0 <= alpha < (1 + b) / p


def test_solve_ap5_domain() -> None:
    """Data without an extremal in the power family are rejected."""
    with pytest.raises(DyadicBellmanDomainError):
        solve_ap5(2.0, 1.0, 0.0, 0.5, 1.0)
    with pytest.raises(DyadicBellmanDomainError):
        solve_ap5(2.0, 1.0, 0.0, 2.0, 0.0)
    with pytest.raises(DyadicBellmanDomainError):
        extremal_g(1.0, 1.0)


def test_discretize_power() -> None:
    """Annulus averages of t**s are geometric with ratio (1-alpha)**s."""
    profile = discretize_power(2.0, -0.5, 0.1)
    assert profile.gamma == pytest.approx(0.9**-0.5)
    # Average of 2*t**-0.5 over (0.9, 1].
    assert profile.value(0) == pytest.approx(4 * (1 - math.sqrt(0.9)) / 0.1)
    # The whole integral of 2*t**-0.5 is 4.
    assert profile_tail_average(profile, 0) == pytest.approx(4.0, rel=1e-12)
    with pytest.raises(DyadicBellmanIntegrabilityError):
        discretize_power(1.0, -1.0, 0.1)


def test_profile_divergence() -> None:
    """A ratio gamma*(1-alpha) >= 1 diverges."""
    profile = GeometricProfile(lam=1.0, gamma=3.0, exponent=-1.0, alpha=0.5)
    with pytest.raises(DyadicBellmanDivergenceError):
        profile_average_factor(profile)


def test_sigma_profile() -> None:
    """sigma of a geometric weight is geometric."""
    weight = discretize_power(0.5, -0.5, 0.1)
    sigma = sigma_profile(weight, 2.0)
    assert sigma.lam == pytest.approx(1 / weight.lam)
    assert sigma.gamma == pytest.approx(1 / weight.gamma)
    assert sigma.exponent == pytest.approx(0.5)


def test_profile_on_tree_matches_infinite_tree() -> None:
    """Closing the truncated tree with tail averages keeps every integral."""
    salpha = build_salpha(0.2, 8)
    profile = discretize_power(1.0, 0.5, 0.2)
    function = profile_on_tree(salpha, profile)
    assert integrate_leaves(salpha.tree, function) == pytest.approx(
        profile_tail_average(profile, 0), rel=1e-12
    )
    with pytest.raises(DyadicBellmanDomainError):
        profile_on_tree(salpha, discretize_power(1.0, 0.5, 0.3))


def test_salpha_ap_constant_matches_tree() -> None:
    """The closed form equals the direct tree computation at rank cutoff 12."""
    p, alpha = 2.0, 0.1
    weight = discretize_power(0.5, -0.5, alpha)
    salpha = build_salpha(alpha, 12)
    w = profile_on_tree(salpha, weight)
    sigma = profile_on_tree(salpha, sigma_profile(weight, p))
    direct = ap_constant_tree(salpha.tree, w, p, sigma)
    assert salpha_ap_constant(weight, p) == pytest.approx(direct, rel=1e-10)


def test_prop2_derive_kb() -> None:
    """h = 4/3 at p = 2 gives b = -1/2 and k = z/2."""
    cfg = Prop2Config.from_json(load_json_fixture("prop2.json"))
    k, b = prop2_derive_kb(cfg)
    assert b == pytest.approx(-0.5, abs=1e-12)
    assert k == pytest.approx(0.5, abs=1e-12)
    constants = power_weight_constants(PowerWeightSpec(k=k, b=b, p=2.0))
    assert constants.a == pytest.approx(2 / 3)


def test_prop2_instance_limits() -> None:
    """Members keep f and z exactly and approach h, F and the limit."""
    cfg = Prop2Config(p=2.0, F=2.0, f=1.0, h=4 / 3, z=1.0)
    limit = prop2_limit_rhs(cfg)
    previous = None
    for alpha in (0.1, 0.01, 0.001):
        member = prop2_instance(cfg, alpha)
        assert member.int_phi == pytest.approx(1.0, abs=1e-12)
        assert member.int_w == pytest.approx(1.0, abs=1e-12)
        errors = (
            abs(member.ap_const - cfg.h),
            abs(member.int_phi_p_w - cfg.F),
            abs(member.int_maximal_p_w / limit - 1),
        )
        if previous is not None:
            pairs = zip(errors, previous, strict=True)
            assert all(now <= before for now, before in pairs)
        previous = errors
    assert previous is not None
    assert previous[0] / cfg.h < 0.02
    assert previous[2] < 0.01


def test_prop2_limit_rhs() -> None:
    """h = 1 forces the limit to F."""
    cfg = Prop2Config(p=2.0, F=1.0, f=1.0, h=1.0, z=1.0)
    assert prop2_limit_rhs(cfg) == pytest.approx(1.0)


def test_prop2_config_validation() -> None:
    """z*f**p may not exceed h*F and h must be at least 1."""
    with pytest.raises(DyadicBellmanDomainError):
        Prop2Config(p=2.0, F=1.0, f=2.0, h=1.0, z=1.0)
    with pytest.raises(DyadicBellmanDomainError):
        Prop2Config(p=2.0, F=1.0, f=0.5, h=0.5, z=1.0)
    with pytest.raises(DyadicBellmanDomainError):
        Prop2Config.from_json({"p": 2})
    assert Prop2Config.from_json(load_json_fixture("prop2.json")).to_json()["F"] == 2.0
    assert np.isclose(Prop2Config(2.0, 2.0, 1.0, 4 / 3, 1.0).h, 4 / 3)


def test_prop2_errors_shrink_with_alpha() -> None:
    """Halving alpha from 0.02 to 0.01 at least halves every error."""
    cfg = Prop2Config(p=2.0, F=2.0, f=1.0, h=4 / 3, z=1.0)
    limit = prop2_limit_rhs(cfg)

    def errors(alpha: float) -> tuple[float, float, float]:
        member = prop2_instance(cfg, alpha)
        return (
            abs(member.ap_const - cfg.h),
            abs(member.int_phi_p_w - cfg.F),
            abs(member.int_maximal_p_w - limit),
        )

    coarse, fine = errors(0.02), errors(0.01)
    for before, now in zip(coarse, fine, strict=True):
        assert now <= 0.55 * before + 1e-13
    assert fine[2] > 0
