"""Scalar Bellman functions of the dyadic maximal operator."""

from __future__ import annotations

import contextlib
import logging
import math

import numpy as np
from scipy import optimize

from .const import (
    AP2_RELATIVE_TOLERANCE,
    BETA_LOWER,
    BETA_SCAN_POINTS,
    BETA_UPPER,
    OMEGA_MAX_ITERATIONS,
    OMEGA_TOLERANCE,
)
from .exceptions import DyadicBellmanConvergenceError, DyadicBellmanDomainError
from .models import BellmanPoint, WeightedBellmanPoint

_LOGGER = logging.getLogger(__name__)

# Relative slack accepted on omega arguments before they count as outside [0, 1].
_ARGUMENT_SLACK = 1e-12


def _require_p(p: float) -> None:
    if not (math.isfinite(p) and p > 1):
        msg = "p must be greater than 1."
        raise DyadicBellmanDomainError(msg, {"p": p})


def _unit_argument(value: float, name: str) -> float:
    """Clip rounding overshoot of an omega argument, reject real violations."""
    if not (math.isfinite(value) and 0 <= value <= 1 + _ARGUMENT_SLACK):
        msg = f"The {name} argument of omega must lie in [0,1]."
        raise DyadicBellmanDomainError(msg, {name: value})
    return min(value, 1.0)


def h_p(p: float, z: float) -> float:
    """Return H_p(z) = -(p-1)*z**p + p*z**(p-1)."""
    _require_p(p)
    if not (math.isfinite(z) and z >= 0):
        msg = "z must be a finite nonnegative number."
        raise DyadicBellmanDomainError(msg, {"z": z})
    return -(p - 1) * z**p + p * z ** (p - 1)


def omega_p(p: float, y: float) -> float:
    """Return the inverse of H_p on [1, p/(p-1)] at y.

    H_p decreases strictly from 1 to 0 on [1, p/(p-1)], so the root is
    bracketed by the endpoints, which are returned exactly.

    Args:
    ----
        p: Exponent greater than 1.
        y: Point of [0, 1].

    Returns:
    -------
        The unique z in [1, p/(p-1)] with H_p(z) = y.

    Raises:
    ------
        DyadicBellmanDomainError: y outside [0, 1].

    """
    _require_p(p)
    if not (math.isfinite(y) and 0 <= y <= 1):
        msg = "y must lie in [0,1]"
        raise DyadicBellmanDomainError(msg, {"y": y})
    upper = p / (p - 1)
    # H_p rounds to about 1e-15 at the right end and may miss 1 at the left.
    if y == 0 or h_p(p, upper) >= y:
        return upper
    if h_p(p, 1.0) <= y:
        return 1.0

    root, result = optimize.bisect(
        lambda z: h_p(p, z) - y,
        1.0,
        upper,
        xtol=1e-300,
        rtol=4 * np.finfo(float).eps,
        maxiter=OMEGA_MAX_ITERATIONS,
        full_output=True,
        disp=False,
    )
    residual = abs(h_p(p, root) - y)
    if residual > OMEGA_TOLERANCE:
        _LOGGER.debug(
            "omega_%s(%s): residual %s after %s iterations",
            p,
            y,
            residual,
            result.iterations,
        )
    return float(root)


def bellman_unweighted(pt: BellmanPoint) -> float:
    """Return B_p(F, f) = F * omega_p(f**p/F)**p."""
    argument = _unit_argument(pt.f**pt.p / pt.F, "f**p/F")
    return pt.F * omega_p(pt.p, argument) ** pt.p


def doob_constant(p: float) -> float:
    """Return (p/(p-1))**p, the classical constant of the maximal inequality."""
    _require_p(p)
    return (p / (p - 1)) ** p


def doob_refined_l2(F: float, f: float) -> float:  # noqa: N803
    """Return (sqrt(F) + sqrt(F - f**2))**2, the sharp L2 bound.

    Args:
    ----
        F: The squared L2 norm of the function.
        f: Its L1 norm.

    Returns:
    -------
        The bound on the squared L2 norm of the maximal function.

    """
    BellmanPoint(2.0, F, f)
    return (math.sqrt(F) + math.sqrt(max(F - f * f, 0.0))) ** 2


def bellman_star(wpt: WeightedBellmanPoint) -> float:
    """Return the weighted Bellman function of an A_p* weight with constants (a, c).

    The value is (p-1)**p * a**p * F * omega_p(argument)**p where the
    argument is c*f**p / ((p-1)**(p-1) * a**p * F).
    """
    p, F = wpt.p, wpt.F  # noqa: N806
    argument = _unit_argument(wpt.argument, "weighted")
    return (p - 1) ** p * wpt.a**p * F * omega_p(p, argument) ** p


def _ap2_terms(
    p: float, a: float, c: float, F: float, f: float  # noqa: N803
) -> tuple[float, float]:
    _require_p(p)
    return (p - 1) ** p * a**p * F, (p - 1) * c * f**p


def ap2_rhs(  # noqa: PLR0913
    p: float, a: float, c: float, F: float, f: float, beta: float  # noqa: N803
) -> float:
    """Return the Young-inequality bound of Delta_w for the parameter beta.

    The value is (1 + 1/beta) * ((beta + 1)**(p-1) * A - B) / (p - 1) with
    A = (p-1)**p * a**p * F and B = (p-1) * c * f**p.

    Raises
    ------
        DyadicBellmanDomainError: beta is not positive.

    """
    if not beta > 0:
        msg = "beta must be positive."
        raise DyadicBellmanDomainError(msg, {"beta": beta})
    big_a, big_b = _ap2_terms(p, a, c, F, f)
    growth = math.expm1((p - 1) * math.log1p(beta))
    return (1 + 1 / beta) * (big_a * growth + (big_a - big_b)) / (p - 1)


def minimize_ap2(
    p: float, a: float, c: float, F: float, f: float  # noqa: N803
) -> tuple[float, float]:
    """Minimize ap2_rhs over beta in (1e-9, 1e9).

    A 64-point scan in log(beta) brackets the minimum, golden-section search
    refines it. Minima on the edge of the scan use a bounded search. The
    result is checked against bellman_star.

    Args:
    ----
        p: Exponent greater than 1.
        a: The constant a of the weight.
        c: The constant c of the weight.
        F: Integral of the p-th power of the function against the weight.
        f: Integral of the function.

    Returns:
    -------
        The minimizing beta and the minimum value.

    Raises:
    ------
        DyadicBellmanDomainError: B > A, no beta yields a valid bound.
        DyadicBellmanConvergenceError: The minimum misses bellman_star.

    """
    big_a, big_b = _ap2_terms(p, a, c, F, f)
    if big_b > big_a * (1 + _ARGUMENT_SLACK):
        msg = "The data lie outside the domain of the weighted bound."
        raise DyadicBellmanDomainError(msg, {"A": big_a, "B": big_b})

    def objective(log_beta: float) -> float:
        return ap2_rhs(p, a, c, F, f, math.exp(log_beta))

    grid = np.linspace(math.log(BETA_LOWER), math.log(BETA_UPPER), BETA_SCAN_POINTS)
    values = np.array([objective(x) for x in grid])
    best = int(np.argmin(values))
    steps = np.sign(np.diff(values))
    if np.any(np.diff(steps[steps != 0]) < 0):
        _LOGGER.warning(
            "ap2_rhs is not unimodal on the beta scan; refining near %s", best
        )

    low = grid[max(best - 1, 0)]
    high = grid[min(best + 1, grid.shape[0] - 1)]
    result = None
    if 0 < best < grid.shape[0] - 1:
        # A flat neighbour is not a valid bracket; fall through to bounded.
        with contextlib.suppress(ValueError):
            result = optimize.minimize_scalar(
                objective, bracket=(low, grid[best], high), method="golden"
            )
    if result is None:
        result = optimize.minimize_scalar(
            objective, bounds=(low, high), method="bounded", options={"xatol": 1e-12}
        )
    log_beta, value = float(result.x), float(result.fun)
    if values[best] < value:
        log_beta, value = float(grid[best]), float(values[best])

    expected = bellman_star(WeightedBellmanPoint.build(p, F, f, a, c))
    if abs(value - expected) > AP2_RELATIVE_TOLERANCE * expected:
        msg = "The minimized bound disagrees with the closed form."
        raise DyadicBellmanConvergenceError(
            msg, {"estimate": value, "expected": expected}
        )
    return math.exp(log_beta), value


def bellman_dual_composite(p: float, x: float, y: float) -> float:
    """Return x * omega_{p'}(y**p' / x)**p', with p' the dual exponent of p.

    The composite increases in x and decreases in y.

    Raises
    ------
        DyadicBellmanDomainError: x is not positive or y**p' exceeds x.

    """
    _require_p(p)
    if not (x > 0 and y >= 0):
        msg = "x must be positive and y nonnegative."
        raise DyadicBellmanDomainError(msg, {"x": x, "y": y})
    dual = p / (p - 1)
    argument = _unit_argument(y**dual / x, "dual")
    return x * omega_p(dual, argument) ** dual


def _sigma_bellman(
    p: float, F: float, f: float, sigma_total: float  # noqa: N803
) -> float:
    """Return F * omega_p(f**p / (sigma(X)**(p-1) * F))**p."""
    _require_p(p)
    if not (F > 0 and f >= 0 and sigma_total > 0):
        msg = "F and sigma(X) must be positive and f nonnegative."
        raise DyadicBellmanDomainError(msg, {"F": F, "f": f, "sigma": sigma_total})
    argument = _unit_argument(f**p / (sigma_total ** (p - 1) * F), "sigma")
    return F * omega_p(p, argument) ** p


def thm3_w1_bound(  # noqa: PLR0913
    p: float,
    F: float,  # noqa: N803
    f: float,
    m: float,
    w_total: float,
    sigma_total: float,
    ap: float,
) -> float:
    """Return the first weighted bound on the integral of (M phi)**p * w.

    Args:
    ----
        p: Exponent greater than 1.
        F: Integral of phi**p * w.
        f: Integral of phi.
        m: Integral of phi**(p-1) * w.
        w_total: w(X).
        sigma_total: sigma(X) for sigma = w**(-1/(p-1)).
        ap: The A_p constant of w.

    Returns:
    -------
        ap**(1/(p-1)) * x * omega_{p'}(y**p'/x)**p' where x is
        F * omega_p(f**p/(sigma(X)**(p-1) * F))**p and y = m * w(X)**(-1/p).

    Raises:
    ------
        DyadicBellmanDomainError: An omega argument lies outside [0, 1].

    """
    if not (m >= 0 and w_total > 0 and ap > 0):
        msg = "m must be nonnegative, w(X) and [w]_p positive."
        raise DyadicBellmanDomainError(msg, {"m": m, "w": w_total, "ap": ap})
    inner = _sigma_bellman(p, F, f, sigma_total)
    composite = bellman_dual_composite(p, inner, m * w_total ** (-1 / p))
    return ap ** (1 / (p - 1)) * composite


def thm3_w2_bound(
    p: float, F: float, f: float, sigma_total: float, ap: float  # noqa: N803
) -> float:
    """Return p**p' * ap**(1/(p-1)) * F * omega_p(f**p/(sigma(X)**(p-1) * F))**p."""
    if not ap > 0:
        msg = "[w]_p must be positive."
        raise DyadicBellmanDomainError(msg, {"ap": ap})
    inner = _sigma_bellman(p, F, f, sigma_total)
    return p ** (p / (p - 1)) * ap ** (1 / (p - 1)) * inner
