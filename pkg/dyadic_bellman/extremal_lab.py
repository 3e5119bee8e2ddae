"""Extremal functions, S-alpha discretizations and the lower-bound sequence."""

from __future__ import annotations

import logging
import math

from .bellman_core import bellman_star, omega_p
from .const import AP5_RESIDUAL_TOLERANCE, BACK_SUBSTITUTION_TOLERANCE
from .exceptions import (
    DyadicBellmanConvergenceError,
    DyadicBellmanDivergenceError,
    DyadicBellmanDomainError,
    DyadicBellmanIntegrabilityError,
)
from .measure_tree import salpha_leaf_function
from .models import (
    GeometricProfile,
    LeafFunction,
    PiecewisePower,
    PowerWeightSpec,
    Prop2Config,
    Prop2Instance,
    SAlphaTree,
    WeightedBellmanPoint,
)
from .step_functions import delta_w
from .weight_theory import power_weight_constants

_LOGGER = logging.getLogger(__name__)

# Rounding below which a negative extremal exponent is read as zero.
_ZERO_EXPONENT = 1e-14


def extremal_g(f: float, alpha_g: float) -> PiecewisePower:
    """Return g(t) = f * (1 - alpha_g) * t**(-alpha_g), whose integral is f.

    Raises
    ------
        DyadicBellmanDomainError: alpha_g outside [0, 1) or f negative.

    """
    if not 0 <= alpha_g < 1:
        msg = "alpha_g must lie in [0, 1)."
        raise DyadicBellmanDomainError(msg, {"alpha_g": alpha_g})
    if not f >= 0:
        msg = "f must be nonnegative."
        raise DyadicBellmanDomainError(msg, {"f": f})
    return PiecewisePower.power(f * (1 - alpha_g), -alpha_g)


def _ap5_residual(  # noqa: PLR0913
    p: float, k: float, b: float, F: float, f: float, alpha: float  # noqa: N803
) -> float:
    """Return the relative residual of (1-alpha)**p/(1+b-alpha*p) = F/(k*f**p)."""
    target = F / (k * f**p)
    return abs((1 - alpha) ** p / (1 + b - alpha * p) - target) / target


def solve_ap5(
    p: float, k: float, b: float, F: float, f: float  # noqa: N803
) -> float:
    """Return the exponent of the extremal g for the power weight k*t**b.

    With y = k*f**p / (((p-1)/(p-1-b))**(p-1) * F) and z = omega_p(y), the
    exponent is 1 - (p-1-b)/((p-1)*z).

    Args:
    ----
        p: Exponent greater than 1.
        k: Coefficient of the weight.
        b: Exponent of the weight, -1 < b < p-1.
        F: Integral of g**p against the weight.
        f: Integral of g, positive.

    Returns:
    -------
        alpha_g in [0, (1+b)/p).

    Raises:
    ------
        DyadicBellmanDomainError: y lies outside [0, 1] or the extremal
            would be increasing.
        DyadicBellmanConvergenceError: The equation residual exceeds 1e-10.

    """
    PowerWeightSpec(k=k, b=b, p=p)
    if not (F > 0 and f > 0):
        msg = "F and f must be positive."
        raise DyadicBellmanDomainError(msg, {"F": F, "f": f})
    argument = k * f**p / (((p - 1) / (p - 1 - b)) ** (p - 1) * F)
    if argument > 1 + 1e-12:
        msg = "No extremal of the power family exists for these data."
        raise DyadicBellmanDomainError(msg, {"argument": argument})
    z = omega_p(p, min(argument, 1.0))
    alpha_g = 1 - (p - 1 - b) / ((p - 1) * z)
    if -_ZERO_EXPONENT < alpha_g < 0:
        alpha_g = 0.0
    if alpha_g < 0:
        msg = "The extremal of the power family would be increasing."
        raise DyadicBellmanDomainError(msg, {"alpha_g": alpha_g})
    if not alpha_g < (1 + b) / p:
        msg = "The extremal is not p-integrable against the weight."
        raise DyadicBellmanDomainError(msg, {"alpha_g": alpha_g})

    residual = _ap5_residual(p, k, b, F, f, alpha_g)
    if residual > AP5_RESIDUAL_TOLERANCE:
        msg = "The extremal exponent does not solve its equation."
        raise DyadicBellmanConvergenceError(msg, {"residual": residual})
    return alpha_g


def sharpness_gap(
    p: float, k: float, b: float, F: float, f: float  # noqa: N803
) -> float:
    """Return |Delta_w(g) - B*| / B* for the extremal g of the power weight."""
    spec = PowerWeightSpec(k=k, b=b, p=p)
    constants = power_weight_constants(spec)
    achieved = delta_w(extremal_g(f, solve_ap5(p, k, b, F, f)), spec.weight(), p)
    bound = bellman_star(WeightedBellmanPoint.build(p, F, f, constants.a, constants.c))
    return abs(achieved - bound) / bound


def discretize_power(lam: float, s: float, alpha: float) -> GeometricProfile:
    """Average lam*t**s over the rank annuli of S-alpha.

    The rank-m annulus stands for ((1-alpha)**(m+1), (1-alpha)**m], so the
    averages are lam_eff * gamma**m with gamma = (1-alpha)**s and
    lam_eff = lam * (1 - (1-alpha)**(s+1)) / (alpha * (s+1)).

    Raises
    ------
        DyadicBellmanIntegrabilityError: s <= -1.

    """
    if not s > -1:
        msg = "t**s is not integrable for s <= -1."
        raise DyadicBellmanIntegrabilityError(msg, {"s": s})
    if not 0 < alpha < 1:
        msg = "alpha must lie in (0, 1)."
        raise DyadicBellmanDomainError(msg, {"alpha": alpha})
    shrink = math.log1p(-alpha)
    lam_eff = lam * -math.expm1((s + 1) * shrink) / (alpha * (s + 1))
    return GeometricProfile(
        lam=lam_eff, gamma=math.exp(s * shrink), exponent=s, alpha=alpha
    )


def profile_average_factor(prof: GeometricProfile) -> float:
    """Return alpha / (1 - gamma*(1-alpha)).

    The average of the profile over an S-node of rank r is this factor times
    its value on rank-r annuli.

    Raises
    ------
        DyadicBellmanDivergenceError: gamma*(1-alpha) >= 1.

    """
    log_ratio = prof.log_ratio()
    if log_ratio >= 0:
        msg = "The geometric series of the profile diverges."
        raise DyadicBellmanDivergenceError(
            msg, {"ratio": prof.gamma * (1 - prof.alpha)}
        )
    return prof.alpha / -math.expm1(log_ratio)


def profile_tail_average(prof: GeometricProfile, rank: int) -> float:
    """Return the average of the profile over an S-node of the given rank."""
    return prof.value(rank) * profile_average_factor(prof)


def sigma_profile(wprof: GeometricProfile, p: float) -> GeometricProfile:
    """Return the profile of sigma = w**(-1/(p-1))."""
    if not p > 1:
        msg = "p must be greater than 1."
        raise DyadicBellmanDomainError(msg, {"p": p})
    power = -1 / (p - 1)
    return GeometricProfile(
        lam=wprof.lam**power,
        gamma=wprof.gamma**power,
        exponent=wprof.exponent * power,
        alpha=wprof.alpha,
    )


def profile_on_tree(salpha: SAlphaTree, prof: GeometricProfile) -> LeafFunction:
    """Lay a profile on a truncated S-alpha tree.

    Annuli carry lam*gamma**m and the cutoff S-nodes carry the average of the
    profile below them, so every S-node integral matches the infinite tree.
    """
    if prof.alpha != salpha.alpha:
        msg = "The profile and the tree use different alpha."
        raise DyadicBellmanDomainError(
            msg, {"profile": prof.alpha, "tree": salpha.alpha}
        )
    return salpha_leaf_function(
        salpha,
        [prof.value(rank) for rank in range(salpha.rank_cutoff)],
        profile_tail_average(prof, salpha.rank_cutoff),
    )


def salpha_ap_constant(wprof: GeometricProfile, p: float) -> float:
    """Return [w]_p of a geometric weight with respect to S-alpha.

    Both w and sigma have node averages proportional to their annulus values,
    so the ratio is the same at every S-node:
    alpha**p / ((1 - g*(1-alpha)) * (1 - g**(-1/(p-1))*(1-alpha))**(p-1)).

    Raises
    ------
        DyadicBellmanDivergenceError: One of the two series diverges.

    """
    sigma = sigma_profile(wprof, p)
    return profile_average_factor(wprof) * profile_average_factor(sigma) ** (p - 1)


def prop2_derive_kb(cfg: Prop2Config) -> tuple[float, float]:
    """Return the power weight (k, b) whose limits are [w]_p = h and int w = z.

    Args:
    ----
        cfg: The targets.

    Returns:
    -------
        k = z*(b + 1) and b = (p-1)*(1 - omega_p(1/h)).

    Raises:
    ------
        DyadicBellmanDomainError: b falls outside (-1, p-1).
        DyadicBellmanConvergenceError: Substituting back misses h.

    """
    p = cfg.p
    theta = omega_p(p, 1 / cfg.h)
    b = (p - 1) * (1 - theta)
    if not -1 < b < p - 1:
        msg = "The derived exponent b must lie in (-1, p-1)."
        raise DyadicBellmanDomainError(msg, {"b": b, "h": cfg.h})
    k = cfg.z * (b + 1)
    recovered = ((p - 1) / (p - 1 - b)) ** (p - 1) / (b + 1)
    if abs(recovered - cfg.h) > BACK_SUBSTITUTION_TOLERANCE * cfg.h:
        msg = "The derived weight does not reproduce h."
        raise DyadicBellmanConvergenceError(msg, {"h": cfg.h, "recovered": recovered})
    return k, b


def prop2_instance(cfg: Prop2Config, alpha: float) -> Prop2Instance:
    """Return the closed-form integrals of one member of the lower-bound sequence.

    Args:
    ----
        cfg: The targets.
        alpha: The shedding fraction of the S-alpha tree.

    Returns:
    -------
        A Prop2Instance whose quantities are geometric series sums.

    """
    p = cfg.p
    k, b = prop2_derive_kb(cfg)
    alpha_g = solve_ap5(p, k, b, cfg.F, cfg.f)
    phi = discretize_power(cfg.f * (1 - alpha_g), -alpha_g, alpha)
    weight = discretize_power(k, b, alpha)

    # Ratio of the series of phi**p * w: (1-alpha)**(1 + b - p*alpha_g).
    log_ratio = (1 + b - p * alpha_g) * math.log1p(-alpha)
    if log_ratio >= 0:
        msg = "The series of phi**p * w diverges."
        raise DyadicBellmanDivergenceError(msg, {"alpha_g": alpha_g, "b": b})
    int_phi_p_w = phi.lam**p * weight.lam * alpha / -math.expm1(log_ratio)

    instance = Prop2Instance(
        alpha=alpha,
        alpha_g=alpha_g,
        int_phi=profile_tail_average(phi, 0),
        int_phi_p_w=int_phi_p_w,
        int_w=profile_tail_average(weight, 0),
        ap_const=salpha_ap_constant(weight, p),
        int_maximal_p_w=profile_average_factor(phi) ** p * int_phi_p_w,
    )
    _LOGGER.debug("Lower-bound member at alpha=%s: %s", alpha, instance)
    return instance


def prop2_limit_rhs(cfg: Prop2Config) -> float:
    """Return F * omega_p(z*f**p/(h*F))**p / omega_p(1/h)**p."""
    p = cfg.p
    # The config bounds z*f**p by h*F up to rounding.
    argument = min(cfg.z * cfg.f**p / (cfg.h * cfg.F), 1.0)
    return cfg.F * (omega_p(p, argument) / omega_p(p, 1 / cfg.h)) ** p
