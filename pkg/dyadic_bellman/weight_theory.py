"""Weights: tree A_p constants and A_p* constants of rearranged weights."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable

import numpy as np
from scipy import optimize

from .const import (
    APSTAR_SAMPLES,
    AUDIT_GRID_FLOOR,
    AUDIT_GRID_SIZE,
)
from .exceptions import (
    DyadicBellmanDegenerateConstantsError,
    DyadicBellmanDomainError,
    DyadicBellmanNotApStarError,
    DyadicBellmanTailConditionError,
)
from .measure_tree import node_integrals
from .models import (
    ApStarConstants,
    LeafFunction,
    PiecewisePower,
    PowerWeightSpec,
    Term,
    TreeSpace,
)
from .models.piecewise import evaluate_terms
from .step_functions import decreasing_rearrangement, integrate

_LOGGER = logging.getLogger(__name__)

# Relative size below which a + 1/E counts as zero.
_CANCELLATION = 1e-12


def sigma_weight(w: LeafFunction, p: float) -> LeafFunction:
    """Return the dual weight sigma = w**(-1/(p-1)).

    Raises
    ------
        DyadicBellmanDomainError: w vanishes on some leaf or p <= 1.

    """
    if not p > 1:
        msg = "p must be greater than 1."
        raise DyadicBellmanDomainError(msg, {"p": p})
    if np.any(w.values == 0):
        msg = "The weight must be positive on every leaf."
        raise DyadicBellmanDomainError(msg)
    return w.power(-1 / (p - 1))


def ap_constant_tree(
    tree: TreeSpace,
    w: LeafFunction,
    p: float,
    sigma: LeafFunction | None = None,
) -> float:
    """Return [w]_p = max over nodes I of w(I) * sigma(I)**(p-1) / mu(I)**p.

    Args:
    ----
        tree: The tree.
        w: A positive weight.
        p: Exponent greater than 1.
        sigma: The dual weight; w**(-1/(p-1)) leafwise when omitted.

    Returns:
    -------
        The A_p constant of w with respect to the tree.

    """
    dual = sigma_weight(w, p) if sigma is None else sigma
    ones = LeafFunction.constant(tree, 1.0)
    w_mass = node_integrals(tree, w, ones)
    sigma_mass = node_integrals(tree, dual, ones)
    ratios = w_mass * sigma_mass ** (p - 1) / tree.measure**p
    return float(ratios.max())


def power_weight_constants(spec: PowerWeightSpec) -> ApStarConstants:
    """Return (a, c) = (1/(p-1-b), k/(p-1-b)) for w** = k*t**b."""
    gap = spec.p - 1 - spec.b
    return ApStarConstants(a=1 / gap, c=spec.k / gap)


def rearranged_weight(tree: TreeSpace, w: LeafFunction) -> PiecewisePower:
    """Return the decreasing rearrangement of a tree weight as a w** candidate."""
    return decreasing_rearrangement(tree, w).function


class _ApStarProblem:
    """u0(t) = integral of wss(s)/s**p over (t, 1] and r(t) = wss(t)/t**(p-1)."""

    def __init__(self, wss: PiecewisePower, p: float) -> None:
        if not p > 1:
            msg = "p must be greater than 1."
            raise DyadicBellmanDomainError(msg, {"p": p})
        self.wss = wss
        self.p = p
        self.shifted = PiecewisePower(
            wss.breakpoints,
            tuple(tuple((c, e - p) for c, e in piece) for piece in wss.terms),
        )

    def u0(self, t: float) -> float:
        return 0.0 if t >= 1 else integrate(self.shifted, t, 1.0)

    def r(self, terms: tuple[Term, ...], t: float) -> float:
        return float(evaluate_terms(terms, np.asarray(t))) / t ** (self.p - 1)

    def ratio(self, terms: tuple[Term, ...], t: float) -> float:
        return self.u0(t) / self.r(terms, t)

    def gap(self, a: float, terms: tuple[Term, ...], t: float) -> float:
        return a * self.r(terms, t) - self.u0(t)

    def check_tail(self) -> None:
        """Check integrability of u0 and the vanishing of t**p * u0(t) at 0."""
        first = self.wss.terms[0]
        if not first:
            return
        exponent = min(e for _, e in first)
        if exponent <= -1:
            msg = "t**p * u0(t) does not vanish at 0."
            raise DyadicBellmanTailConditionError(msg, {"exponent": exponent})


def _sampled_extreme(
    function: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    maximize: bool,
) -> float:
    """Sample a piece densely and polish the best sample with a bounded search."""
    if lo == 0:
        grid = np.geomspace(hi * AUDIT_GRID_FLOOR, hi, APSTAR_SAMPLES)
    else:
        grid = np.linspace(lo, hi, APSTAR_SAMPLES)
    sign = -1.0 if maximize else 1.0
    values = np.array([sign * function(float(t)) for t in grid])
    best = int(np.argmin(values))
    left = grid[max(best - 1, 0)]
    right = grid[min(best + 1, grid.shape[0] - 1)]
    if left < right:
        result = optimize.minimize_scalar(
            lambda t: sign * function(float(t)), bounds=(left, right), method="bounded"
        )
        if result.fun < values[best]:
            return float(sign * result.fun)
    return float(sign * values[best])


def apstar_constants(wss: PiecewisePower, p: float) -> ApStarConstants:
    """Return the best pair (a, c) of a rearranged weight.

    a is the supremum of u0/r and c the infimum of a*r - u0 over (0, 1].
    On single-term pieces both are monotone, so the endpoints and the limit
    at 0 decide; other pieces are sampled at 2**12 points and polished.

    Args:
    ----
        wss: The rearranged weight w** on (0, 1].
        p: Exponent greater than 1.

    Returns:
    -------
        The constants as ApStarConstants.

    Raises:
    ------
        DyadicBellmanTailConditionError: t**p * u0(t) does not vanish at 0.
        DyadicBellmanNotApStarError: u0/r is unbounded.
        DyadicBellmanDegenerateConstantsError: The best c is not positive.

    """
    problem = _ApStarProblem(wss, p)
    problem.check_tail()

    ratios: list[float] = []
    limits: list[tuple[float, float, float]] = []
    for index, (lo, hi, terms) in enumerate(wss.pieces()):
        if not terms:
            msg = "The weight vanishes on a piece."
            raise DyadicBellmanNotApStarError(msg, {"lo": lo, "hi": hi})
        if index == 0:
            coefficient, exponent = min(terms, key=lambda term: term[1])
            shifted = exponent - p + 1
            if shifted >= 0:
                msg = "u0/r is unbounded near 0."
                raise DyadicBellmanNotApStarError(msg, {"exponent": exponent})
            ratios.append(-1 / shifted)
            limits.append((coefficient, shifted, hi))
        if len(terms) == 1:
            ratios.append(problem.ratio(terms, hi))
            if lo > 0:
                ratios.append(problem.ratio(terms, lo))
        else:
            _LOGGER.warning(
                "Multi-term piece (%s, %s]: sampling for the A_p* constants", lo, hi
            )
            ratios.append(
                _sampled_extreme(
                    lambda t, terms=terms: problem.ratio(terms, t),
                    lo,
                    hi,
                    maximize=True,
                )
            )
    a = max(ratios)
    if not math.isfinite(a):
        msg = "u0/r is unbounded."
        raise DyadicBellmanNotApStarError(msg, {"a": a})

    gaps: list[float] = []
    for lo, hi, terms in wss.pieces():
        if len(terms) == 1:
            gaps.append(problem.gap(a, terms, hi))
            if lo > 0:
                gaps.append(problem.gap(a, terms, lo))
        else:
            gaps.append(
                _sampled_extreme(
                    lambda t, terms=terms: problem.gap(a, terms, t),
                    lo,
                    hi,
                    maximize=False,
                )
            )
    for coefficient, shifted, hi in limits:
        gaps.append(_gap_at_zero(problem, a, coefficient, shifted, hi))
    c = min(gaps)
    if not c > 0:
        msg = "The best constant c is not positive."
        raise DyadicBellmanDegenerateConstantsError(msg, {"a": a, "c": c})
    _LOGGER.debug("A_p* constants for p=%s: a=%s c=%s", p, a, c)
    return ApStarConstants(a=a, c=c)


def _gap_at_zero(
    problem: _ApStarProblem, a: float, coefficient: float, shifted: float, hi: float
) -> float:
    """Return the limit of a*r - u0 at 0 for the leading term of the first piece."""
    drift = a + 1 / shifted
    if drift > _CANCELLATION * a:
        return math.inf
    if drift < -_CANCELLATION * a:
        return -math.inf
    return -(problem.u0(hi) + coefficient * hi**shifted / shifted)


def apstar_audit(
    wss: PiecewisePower,
    p: float,
    constants: ApStarConstants,
    *,
    grid_size: int = AUDIT_GRID_SIZE,
    floor: float = AUDIT_GRID_FLOOR,
) -> float:
    """Return the worst slack of u0(t) + c <= a*r(t) on a geometric grid.

    Args:
    ----
        wss: The rearranged weight.
        p: Exponent greater than 1.
        constants: The pair (a, c) to audit.
        grid_size: Number of grid points.
        floor: Smallest grid point.

    Returns:
    -------
        The minimum of (a*r(t) - u0(t) - c) / (a*r(t)) over the grid;
        negative values are violations.

    """
    problem = _ApStarProblem(wss, p)
    grid = np.geomspace(floor, 1.0, grid_size)
    index = wss.piece_index(grid)
    slacks = []
    for t, piece in zip(grid, index, strict=True):
        terms = wss.terms[int(piece)]
        scale = constants.a * problem.r(terms, float(t))
        gap = problem.gap(constants.a, terms, float(t)) - constants.c
        slacks.append(gap / scale if scale > 0 else gap)
    return min(slacks)
