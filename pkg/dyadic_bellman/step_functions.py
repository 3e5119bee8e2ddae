"""Calculus on (0, 1] for piecewise power-sum functions."""

from __future__ import annotations

import logging
import math

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import integrate as scipy_integrate

from .const import (
    GEOMETRIC_FLOOR,
    GEOMETRIC_RATIO,
    QUADRATURE_MAX_EVALUATIONS,
    QUADRATURE_RELATIVE_TOLERANCE,
    QUADRATURE_SUBINTERVALS,
)
from .exceptions import (
    DyadicBellmanConvergenceError,
    DyadicBellmanDomainError,
    DyadicBellmanIntegrabilityError,
)
from .models import (
    LeafFunction,
    PiecewisePower,
    RearrangementResult,
    Term,
    TreeSpace,
)

_LOGGER = logging.getLogger(__name__)


def decreasing_rearrangement(tree: TreeSpace, phi: LeafFunction) -> RearrangementResult:
    """Return the nonincreasing step function equimeasurable with phi.

    Leaf values are sorted in nonincreasing order with piece lengths equal to
    the leaf measures. Adjacent pieces with exactly equal values are merged.

    Args:
    ----
        tree: The tree phi lives on.
        phi: A nonnegative leaf function.

    Returns:
    -------
        A RearrangementResult with phi as its source.

    """
    phi.require_tree(tree)
    if np.any(phi.values < 0):
        msg = "Only nonnegative functions can be rearranged."
        raise DyadicBellmanDomainError(msg)
    order = np.argsort(-phi.values, kind="stable")
    values = phi.values[order]
    masses = tree.leaf_measures[order]

    starts = np.concatenate(([True], values[1:] != values[:-1]))
    group = np.cumsum(starts) - 1
    merged_values = values[starts]
    merged_masses = np.zeros(merged_values.shape[0])
    np.add.at(merged_masses, group, masses)

    breakpoints = np.concatenate(([0.0], np.cumsum(merged_masses)))
    breakpoints[-1] = 1.0
    return RearrangementResult(PiecewisePower.step(breakpoints, merged_values), phi)


def hardy_average(g: PiecewisePower) -> PiecewisePower:
    """Return the Hardy average t -> (1/t) * integral of g over (0, t].

    Each term c*t**e becomes c*t**e/(e + 1). Pieces after the first also
    carry K/t, K collecting the integral of g up to the piece start.

    Raises
    ------
        DyadicBellmanIntegrabilityError: g is not integrable near 0.
        DyadicBellmanDomainError: A term c/t sits on a piece away from 0,
            whose average involves a logarithm.

    """
    _require_integrable_at_zero(g.terms[0])
    accumulated = 0.0
    pieces: list[tuple[Term, ...]] = []
    for lo, hi, terms in g.pieces():
        if lo > 0 and any(exponent == -1 for _, exponent in terms):
            msg = "The average of c/t away from 0 leaves the power-sum class."
            raise DyadicBellmanDomainError(msg, {"lo": lo})
        averaged = [(c / (e + 1), e) for c, e in terms]
        if lo > 0:
            offset = accumulated - sum(c * lo ** (e + 1) / (e + 1) for c, e in terms)
            averaged.append((offset, -1.0))
        pieces.append(tuple(averaged))
        accumulated += _integrate_terms(terms, lo, hi)
    return PiecewisePower(
        g.breakpoints,
        tuple(pieces),
        nonneg=g.nonneg,
        nonincreasing=g.nonneg and g.nonincreasing,
    )


def integrate(f: PiecewisePower, lo: float = 0.0, hi: float = 1.0) -> float:
    """Integrate f over (lo, hi] in closed form.

    Args:
    ----
        f: The function.
        lo: Lower limit, 0 <= lo < hi.
        hi: Upper limit, hi <= 1.

    Returns:
    -------
        The value of the integral.

    Raises:
    ------
        DyadicBellmanIntegrabilityError: A term c*t**e with e <= -1 reaches 0.

    """
    _require_interval(lo, hi)
    total = 0.0
    for start, end, terms in f.pieces():
        a, b = max(lo, start), min(hi, end)
        if a < b:
            total += _integrate_terms(terms, a, b)
    return total


def integrate_power_composite(  # noqa: PLR0913
    base: PiecewisePower,
    q: float,
    weight: PiecewisePower,
    lo: float = 0.0,
    hi: float = 1.0,
    *,
    rtol: float = QUADRATURE_RELATIVE_TOLERANCE,
) -> float:
    """Integrate base(t)**q * weight(t) over (lo, hi].

    Sub-intervals where base and weight are single power terms are done in
    closed form. The others use adaptive Gauss-Kronrod quadrature; a
    sub-interval touching 0 is split geometrically toward 0 and closed off
    by the leading power of the integrand.

    Args:
    ----
        base: A nonnegative function.
        q: Positive exponent.
        weight: The weight function.
        lo: Lower limit.
        hi: Upper limit.
        rtol: Relative tolerance of the quadrature.

    Returns:
    -------
        The value of the integral.

    Raises:
    ------
        DyadicBellmanIntegrabilityError: The integrand behaves like t**E with
            E <= -1 at 0.
        DyadicBellmanConvergenceError: More than 10**6 integrand evaluations
            were needed.

    """
    if not q > 0:
        msg = "q must be positive."
        raise DyadicBellmanDomainError(msg, {"q": q})
    _require_interval(lo, hi)
    points = sorted(
        {lo, hi}
        | {
            point
            for point in (*base.breakpoints, *weight.breakpoints)
            if lo < point < hi
        }
    )
    composite = _Composite(q, rtol)
    for a, b in zip(points, points[1:], strict=False):
        middle = 0.5 * (a + b)
        base_terms = base.terms[int(base.piece_index(middle)[0])]
        weight_terms = weight.terms[int(weight.piece_index(middle)[0])]
        composite.add(base_terms, weight_terms, a, b)
    _LOGGER.debug(
        "Composite integral %s after %s evaluations", composite.total, composite.neval
    )
    return composite.total


def delta_w(g: PiecewisePower, wss: PiecewisePower, p: float) -> float:
    """Return the integral of (Hardy average of g)**p * wss over (0, 1].

    Raises
    ------
        DyadicBellmanDomainError: p <= 1 or g is not flagged nonnegative and
            nonincreasing.

    """
    if not p > 1:
        msg = "p must be greater than 1."
        raise DyadicBellmanDomainError(msg, {"p": p})
    if not (g.nonneg and g.nonincreasing):
        msg = "g must be flagged nonnegative and nonincreasing."
        raise DyadicBellmanDomainError(msg)
    return integrate_power_composite(hardy_average(g), p, wss)


def cell_averages(f: PiecewisePower, breakpoints: ArrayLike) -> NDArray[np.float64]:
    """Return the average of f over every cell of a partition of (0, 1]."""
    points = np.asarray(breakpoints, dtype=np.float64)
    return np.array(
        [integrate(f, a, b) / (b - a) for a, b in zip(points, points[1:], strict=False)]
    )


def _require_interval(lo: float, hi: float) -> None:
    if not 0 <= lo < hi <= 1:
        msg = "The interval must satisfy 0 <= lo < hi <= 1."
        raise DyadicBellmanDomainError(msg, {"lo": lo, "hi": hi})


def _require_integrable_at_zero(terms: tuple[Term, ...]) -> None:
    exponent = min((e for _, e in terms), default=0.0)
    if exponent <= -1:
        msg = "The function is not integrable near 0."
        raise DyadicBellmanIntegrabilityError(msg, {"exponent": exponent})


def _integrate_terms(terms: tuple[Term, ...], a: float, b: float) -> float:
    total = 0.0
    for coefficient, exponent in terms:
        if exponent <= -1 and a == 0:
            msg = "The function is not integrable near 0."
            raise DyadicBellmanIntegrabilityError(msg, {"exponent": exponent})
        if exponent == -1:
            total += coefficient * (math.log(b) - math.log(a))
        else:
            total += coefficient * (b ** (exponent + 1) - a ** (exponent + 1)) / (
                exponent + 1
            )
    return total


def _leading_term(terms: tuple[Term, ...]) -> Term:
    """Return the term dominating as t -> 0."""
    return min(terms, key=lambda term: term[1])


class _Composite:
    """Accumulator for integrals of base**q * weight with evaluation counting."""

    def __init__(self, q: float, rtol: float) -> None:
        self.q = q
        self.rtol = rtol
        self.total = 0.0
        self.neval = 0

    def add(
        self,
        base_terms: tuple[Term, ...],
        weight_terms: tuple[Term, ...],
        a: float,
        b: float,
    ) -> None:
        if not base_terms or not weight_terms:
            return
        if len(base_terms) == 1 and len(weight_terms) == 1:
            self.total += self._closed_form(base_terms[0], weight_terms[0], a, b)
        elif a > 0:
            self.total += self._quadrature(base_terms, weight_terms, a, b)
        else:
            self.total += self._toward_zero(base_terms, weight_terms, b)

    def _closed_form(self, base: Term, weight: Term, a: float, b: float) -> float:
        (c_base, e_base), (c_weight, e_weight) = base, weight
        if c_base < 0:
            msg = "The base function must be nonnegative."
            raise DyadicBellmanDomainError(msg, {"coefficient": c_base})
        exponent = self.q * e_base + e_weight
        coefficient = c_base**self.q * c_weight
        return _integrate_terms(((coefficient, exponent),), a, b)

    def _quadrature(
        self,
        base_terms: tuple[Term, ...],
        weight_terms: tuple[Term, ...],
        a: float,
        b: float,
    ) -> float:
        def integrand(t: float) -> float:
            base = max(sum(c * t**e for c, e in base_terms), 0.0)
            return base**self.q * sum(c * t**e for c, e in weight_terms)

        result = scipy_integrate.quad(
            integrand,
            a,
            b,
            epsabs=0.0,
            epsrel=self.rtol,
            limit=QUADRATURE_SUBINTERVALS,
            full_output=1,
        )
        value, error, info = float(result[0]), float(result[1]), result[2]
        self.neval += int(info["neval"])
        if self.neval > QUADRATURE_MAX_EVALUATIONS:
            msg = "Quadrature exceeded its evaluation budget."
            raise DyadicBellmanConvergenceError(
                msg, {"estimate": self.total + value, "evaluations": self.neval}
            )
        if len(result) > 3 and error > 1e3 * self.rtol * abs(value):
            msg = "Quadrature did not reach its tolerance."
            raise DyadicBellmanConvergenceError(
                msg, {"estimate": self.total + value, "error": error}
            )
        return value

    def _toward_zero(
        self,
        base_terms: tuple[Term, ...],
        weight_terms: tuple[Term, ...],
        b: float,
    ) -> float:
        c_base, e_base = _leading_term(base_terms)
        c_weight, e_weight = _leading_term(weight_terms)
        exponent = self.q * e_base + e_weight
        if exponent <= -1:
            msg = "The integrand is not integrable near 0."
            raise DyadicBellmanIntegrabilityError(msg, {"exponent": exponent})
        coefficient = max(c_base, 0.0) ** self.q * c_weight

        value = 0.0
        upper = b
        while upper > b * GEOMETRIC_FLOOR:
            lower = upper * GEOMETRIC_RATIO
            value += self._quadrature(base_terms, weight_terms, lower, upper)
            upper = lower
            tail = coefficient * upper ** (exponent + 1) / (exponent + 1)
            if abs(tail) <= self.rtol * abs(value) * 1e-2:
                return value
        return value + coefficient * upper ** (exponent + 1) / (exponent + 1)
