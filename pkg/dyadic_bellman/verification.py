"""Randomized and oracle-based checks of the maximal inequalities."""

from __future__ import annotations

import dataclasses
import functools
import logging
import math
from collections.abc import Iterator, Sequence
from typing import Any, Protocol

import numpy as np
from numpy.typing import NDArray
from scipy import optimize
from scipy.special import logsumexp

from .bellman_core import (
    bellman_star,
    bellman_unweighted,
    doob_constant,
    doob_refined_l2,
    thm3_w1_bound,
    thm3_w2_bound,
)
from .const import (
    BRUTE_FORCE_CANDIDATES,
    BRUTE_FORCE_FLOOR,
    BRUTE_FORCE_MIN_BUDGET,
    BRUTE_FORCE_MIN_PIECES,
    EXACT_TOLERANCE,
    FIT_TOLERANCE,
    GAUSS_LEGENDRE_NODES,
    IDENTITY_TOLERANCE,
    MEASURE_TOLERANCE,
    ORACLE_GAP,
    P_CYCLE,
    POINTWISE_TOLERANCE,
    REDRAW_LIMIT,
    SUITES,
    UPPER_BOUND_TOLERANCE,
)
from .exceptions import (
    DyadicBellmanDomainError,
    DyadicBellmanFitError,
    DyadicBellmanStructureError,
)
from .extremal_lab import (
    extremal_g,
    prop2_instance,
    prop2_limit_rhs,
    solve_ap5,
)
from .measure_tree import (
    build_random_tree,
    build_uniform_tree,
    integrate_leaves,
    maximal_function,
)
from .models import (
    BellmanPoint,
    LeafFunction,
    PiecewisePower,
    PowerWeightSpec,
    Prop2Config,
    RearrangementResult,
    SuiteParameters,
    SymmetrizationProblem,
    TreeSpace,
    TrialRecord,
    VerificationReport,
    WeightedBellmanPoint,
)
from .step_functions import (
    cell_averages,
    decreasing_rearrangement,
    delta_w,
    hardy_average,
    integrate,
    integrate_power_composite,
)
from .weight_theory import (
    ap_constant_tree,
    power_weight_constants,
    rearranged_weight,
    sigma_weight,
)

_LOGGER = logging.getLogger(__name__)


def _rng(seed: int, trial: int) -> np.random.Generator:
    """Return the generator of one trial, independent of execution order."""
    return np.random.default_rng([seed, trial])


def _single(
    name: str,
    record: TrialRecord,
    seed: int = 0,
    instance: dict[str, Any] | None = None,
) -> VerificationReport:
    return VerificationReport(
        name=name, seed=seed, records=[record], instance=instance or {}
    )


def random_instance(
    seed: int | Sequence[int],
    max_depth: int = 6,
    value_range: tuple[float, float] = (0.0, 10.0),
    weight_range: tuple[float, float] = (0.125, 8.0),
) -> tuple[TreeSpace, LeafFunction, LeafFunction]:
    """Draw a reproducible random tree with a function and a weight on it.

    The tree is complete to max_depth with arities 2 or 3 and Dirichlet
    measure splits. Leaf values and weights are uniform in their ranges.

    Args:
    ----
        seed: Seed, or seed sequence such as (seed, trial).
        max_depth: Depth of the leaves.
        value_range: Range of the function values.
        weight_range: Range of the weight values, bounded away from 0.

    Returns:
    -------
        The tree, the function phi and the weight w.

    """
    low, high = value_range
    w_low, w_high = weight_range
    if not (0 <= low <= high < math.inf and 0 < w_low <= w_high < math.inf):
        msg = "Ranges must be finite and weights bounded away from 0."
        raise DyadicBellmanDomainError(
            msg, {"value_range": value_range, "weight_range": weight_range}
        )
    rng = np.random.default_rng(seed)
    tree = build_random_tree(rng, max_depth)
    phi = LeafFunction(tree, rng.uniform(low, high, size=tree.leaf_count))
    w = LeafFunction(tree, rng.uniform(w_low, w_high, size=tree.leaf_count))
    return tree, phi, w


def _leaf_layout(tree: TreeSpace, g: RearrangementResult) -> NDArray[np.float64]:
    """Lay the steps of g onto the leaves in index order.

    Raises
    ------
        DyadicBellmanStructureError: A leaf straddles a step of g.

    """
    masses = tree.leaf_measures
    ends = np.cumsum(masses)
    ends[-1] = 1.0
    starts = np.maximum(ends - masses, 0.0)
    breakpoints = np.asarray(g.function.breakpoints)
    piece = g.function.piece_index(np.clip(0.5 * (starts + ends), 1e-300, 1.0))
    straddles = (starts < breakpoints[piece] - MEASURE_TOLERANCE) | (
        ends > breakpoints[piece + 1] + MEASURE_TOLERANCE
    )
    if np.any(straddles):
        msg = "The steps of g do not match the leaf measures of the tree."
        raise DyadicBellmanStructureError(
            msg, {"leaf": int(np.flatnonzero(straddles)[0])}
        )
    return g.values[piece]


def _measure_classes(tree: TreeSpace) -> list[NDArray[np.int64]]:
    """Group leaf positions by exactly equal measure."""
    _, inverse = np.unique(tree.leaf_measures, return_inverse=True)
    return [np.flatnonzero(inverse == label) for label in np.unique(inverse)]


def _direct_symmetrized(
    tree: TreeSpace, maximal: LeafFunction, prob: SymmetrizationProblem
) -> float:
    """Integrate ((M phi)*)**q * h leaf by leaf, without merging steps."""
    order = np.argsort(-maximal.values, kind="stable")
    masses = tree.leaf_measures[order]
    ends = np.cumsum(masses)
    ends[-1] = 1.0
    starts = np.maximum(ends - masses, 0.0)
    total = 0.0
    for value, start, end in zip(maximal.values[order], starts, ends, strict=True):
        stop = min(end, prob.k)
        if start >= stop:
            break
        total += value**prob.q * integrate(prob.h, start, stop)
    return total


def verify_symmetrization(
    tree: TreeSpace,
    g: RearrangementResult,
    prob: SymmetrizationProblem,
    trials: int = 200,
    seed: int = 0,
) -> VerificationReport:
    """Check the symmetrization inequality over random layouts of g.

    Every trial lays the values of g onto leaves of equal measure in a random
    order, so phi* = g, and compares the integral of G((M phi)*) h over
    (0, k] with the integral of G(Hardy average of g) h. Trial 0 keeps the
    sorted layout and also evaluates its left-hand side leaf by leaf.

    Args:
    ----
        tree: The tree.
        g: A step function whose steps are sums of leaf measures.
        prob: The power G(x) = x**q, the weight h and the truncation k.
        trials: Number of layouts.
        seed: Seed of the layouts.

    Returns:
    -------
        A VerificationReport with one record per layout.

    """
    layout = _leaf_layout(tree, g)
    classes = _measure_classes(tree)
    target = integrate_power_composite(
        hardy_average(g.function), prob.q, prob.h, 0.0, prob.k
    )
    tolerance = POINTWISE_TOLERANCE * max(1.0, target)

    records: list[TrialRecord] = []
    failures: list[str] = []
    for trial in range(trials):
        values = layout.copy()
        if trial:
            rng = _rng(seed, trial)
            for members in classes:
                values[members] = values[rng.permutation(members)]
        phi = LeafFunction(tree, values)
        maximal = maximal_function(tree, phi)
        lhs = integrate_power_composite(
            decreasing_rearrangement(tree, maximal).function,
            prob.q,
            prob.h,
            0.0,
            prob.k,
        )
        if trial == 0:
            direct = _direct_symmetrized(tree, maximal, prob)
            if abs(direct - lhs) > POINTWISE_TOLERANCE * max(1.0, lhs):
                failures.append(
                    f"identity layout: two evaluations differ ({lhs!r} vs {direct!r})"
                )
        passed = lhs <= target + tolerance
        records.append(
            TrialRecord(
                trial,
                lhs,
                target,
                passed,
                instance={"trial": trial, "leaf_values": values.tolist()},
            )
        )
    return VerificationReport(
        name="thm1",
        seed=seed,
        records=records,
        instance={**prob.describe(), "leaves": tree.leaf_count},
        failures=failures,
        notes={
            "G": "restricted to powers x^q",
            "max_ratio": max(record.lhs / target for record in records)
            if target > 0
            else None,
        },
    )


def _random_decreasing(rng: np.random.Generator, p: float, b: float) -> PiecewisePower:
    """Draw decreasing steps, optionally with a power head on the first step."""
    count = int(rng.integers(1, 7))
    breakpoints = np.concatenate(([0.0], np.sort(rng.uniform(size=count - 1)), [1.0]))
    values = np.sort(rng.uniform(0.1, 5.0, size=count))[::-1]
    terms = [((float(value), 0.0),) for value in values]
    if rng.random() < 0.5:
        exponent = float(rng.uniform(0.0, 0.95 * (1 + b) / p))
        terms[0] = ((float(values[0]) * breakpoints[1] ** exponent, -exponent),)
    return PiecewisePower(
        tuple(breakpoints.tolist()), tuple(terms), nonneg=True, nonincreasing=True
    )


def verify_thm2_upper(
    p: float, k: float, b: float, trials: int = 500, seed: int = 0
) -> VerificationReport:
    """Check Delta_w(g) <= B*(F, f) for random decreasing g and w** = k*t**b.

    Draws outside the domain of B* are redrawn and counted.
    """
    spec = PowerWeightSpec(k=k, b=b, p=p)
    constants = power_weight_constants(spec)
    wss = spec.weight()
    records: list[TrialRecord] = []
    redraws = 0
    for trial in range(trials):
        rng = _rng(seed, trial)
        for _ in range(REDRAW_LIMIT):
            g = _random_decreasing(rng, p, b)
            F = integrate_power_composite(g, p, wss)  # noqa: N806
            f = integrate(g)
            try:
                bound = bellman_star(
                    WeightedBellmanPoint.build(p, F, f, constants.a, constants.c)
                )
            except DyadicBellmanDomainError:
                redraws += 1
                continue
            lhs = delta_w(g, wss, p)
            records.append(
                TrialRecord(
                    trial,
                    lhs,
                    bound,
                    lhs <= bound * (1 + UPPER_BOUND_TOLERANCE),
                    instance={"trial": trial, "g": g.to_json()},
                )
            )
            break
        else:
            records.append(
                TrialRecord(
                    trial,
                    math.nan,
                    math.nan,
                    passed=False,
                    reason="no draw inside the domain of B*",
                )
            )
    return VerificationReport(
        name="thm2",
        seed=seed,
        records=records,
        instance={**spec.to_json(), **constants.to_json()},
        notes={"redraws": redraws},
    )


def sharpness_witness(p: float, k: float, b: float) -> VerificationReport:
    """Check that the extremal g of the power weight attains B*.

    The data (F, f = 1) are those of the extremal with exponent halfway
    through its admissible range.
    """
    spec = PowerWeightSpec(k=k, b=b, p=p)
    constants = power_weight_constants(spec)
    lowest = max(0.0, b / (p - 1))
    exponent = 0.5 * (lowest + (1 + b) / p)
    F = k * (1 - exponent) ** p / (1 + b - p * exponent)  # noqa: N806
    alpha_g = solve_ap5(p, k, b, F, 1.0)
    lhs = delta_w(extremal_g(1.0, alpha_g), spec.weight(), p)
    bound = bellman_star(
        WeightedBellmanPoint.build(p, F, 1.0, constants.a, constants.c)
    )
    passed = abs(lhs - bound) <= IDENTITY_TOLERANCE * bound
    return _single(
        "thm2-sharpness",
        TrialRecord(0, lhs, bound, passed, reason=None if passed else "not attained"),
        instance={**spec.to_json(), "F": F, "f": 1.0, "alpha_g": alpha_g},
    )


class _StepSearch:
    """Delta_w and the constraint fit for step functions on a geometric grid.

    The first cell is (0, t_1] with t_1 = 1e-16; the others are geometric.
    """

    def __init__(
        self, spec: PowerWeightSpec, F: float, f: float, pieces: int  # noqa: N803
    ) -> None:
        self.p = spec.p
        self.log_f = math.log(f)
        self.log_big_f = math.log(F)
        edges = np.concatenate(([0.0], np.geomspace(BRUTE_FORCE_FLOOR, 1.0, pieces)))
        self.edges = edges
        self.lo, self.hi = edges[:-1], edges[1:]
        self.masses = self.hi - self.lo
        self.log_masses = np.log(self.masses)
        self.wmasses = (
            spec.k * (self.hi ** (spec.b + 1) - self.lo ** (spec.b + 1)) / (spec.b + 1)
        )
        self.log_wmasses = np.log(self.wmasses)
        nodes, weights = np.polynomial.legendre.leggauss(GAUSS_LEGENDRE_NODES)
        middle = 0.5 * (self.lo[1:] + self.hi[1:])
        half = 0.5 * (self.hi[1:] - self.lo[1:])
        self.nodes = middle[:, None] + half[:, None] * nodes[None, :]
        self.weighted = half[:, None] * weights[None, :] * spec.k * self.nodes**spec.b
        self.grid = np.concatenate(([0.0], np.geomspace(1e-2, 1e2, 25)))
        self.fit_failures = 0

    def delta(self, values: NDArray[np.float64]) -> float:
        """Return Delta_w of the step function taking values on the cells.

        On the first cell the Hardy average is the value itself; on the others
        it is v + K/t, integrated by Gauss-Legendre.
        """
        before = np.concatenate(([0.0], np.cumsum(values * self.masses)[:-1]))
        offsets = before[1:] - values[1:] * self.lo[1:]
        averages = values[1:, None] + offsets[:, None] / self.nodes
        head = values[0] ** self.p * self.wmasses[0]
        return float(head + np.sum(averages**self.p * self.weighted))

    def _mismatch(
        self, eta: float | NDArray[np.float64], log_values: NDArray[np.float64]
    ) -> Any:
        """Return log(int g**p w) - p*log(int g) - log(F/f**p) for g**eta.

        Vectorized over an array of eta.
        """
        exponents = np.multiply.outer(eta, log_values)
        log_int = logsumexp(exponents + self.log_masses, axis=-1)
        log_int_p = logsumexp(self.p * exponents + self.log_wmasses, axis=-1)
        return log_int_p - self.p * log_int + self.p * self.log_f - self.log_big_f

    def fit(self, log_values: NDArray[np.float64]) -> NDArray[np.float64]:
        """Return log(lam * g**eta) meeting both integral constraints.

        lam is eliminated through the first constraint, leaving one equation
        in eta >= 0 whose root nearest 1 is taken.

        Raises
        ------
            DyadicBellmanFitError: The equation has no root.

        """
        grid = self.grid
        mismatch = self._mismatch(grid, log_values)
        if abs(mismatch[0]) <= FIT_TOLERANCE:
            eta = 0.0
        else:
            changes = np.flatnonzero(np.sign(mismatch[:-1]) != np.sign(mismatch[1:]))
            if changes.size == 0:
                self.fit_failures += 1
                msg = "The constraint fit has no solution."
                raise DyadicBellmanFitError(msg, {"mismatch_at_0": float(mismatch[0])})
            centers = 0.5 * (grid[changes] + grid[changes + 1])
            index = int(changes[np.argmin(np.abs(centers - 1.0))])
            eta = optimize.brentq(
                lambda x: float(self._mismatch(x, log_values)),
                grid[index],
                grid[index + 1],
                xtol=1e-14,
            )
        log_lam = self.log_f - logsumexp(eta * log_values + self.log_masses)
        return log_lam + eta * log_values

    def candidates(self, upper: float) -> Iterator[NDArray[np.float64]]:
        """Yield log cell averages of t**-s for s in [0, upper]."""
        for s in np.linspace(0.0, upper, BRUTE_FORCE_CANDIDATES):
            power = PiecewisePower.power(1.0, -float(s))
            yield np.log(cell_averages(power, self.edges))


def bruteforce_thm2_sup(  # noqa: PLR0913
    p: float,
    k: float,
    b: float,
    F: float,  # noqa: N803
    f: float,
    pieces: int = 64,
    budget: int = 20_000,
    seed: int = 0,
) -> float:
    """Search nonincreasing step functions for the largest Delta_w.

    Candidates live on a geometric partition of (0, 1] into `pieces` cells.
    Every proposal is sorted, then mapped to lam * g**eta so that the
    integral of g is f and that of g**p * k*t**b is F. Cell averages of
    t**-s seed a hill climb with adaptive step size.

    Args:
    ----
        p: Exponent greater than 1.
        k: Coefficient of the weight.
        b: Exponent of the weight.
        F: Target integral of g**p * w**.
        f: Target integral of g.
        pieces: Number of cells.
        budget: Number of evaluated proposals.
        seed: Seed of the search.

    Returns:
    -------
        The largest Delta_w found.

    """
    spec = PowerWeightSpec(k=k, b=b, p=p)
    constants = power_weight_constants(spec)
    WeightedBellmanPoint.build(p, F, f, constants.a, constants.c)
    search = _StepSearch(spec, F, f, pieces)
    rng = np.random.default_rng(seed)

    best_value = -math.inf
    best_log: NDArray[np.float64] | None = None
    spent = 0
    for candidate in search.candidates(0.98 * (1 + b) / p):
        spent += 1
        try:
            fitted = search.fit(candidate)
        except DyadicBellmanFitError:
            continue
        value = search.delta(np.exp(fitted))
        if value > best_value:
            best_value, best_log = value, fitted
    if best_log is None:
        msg = "No starting candidate satisfies the constraints."
        raise DyadicBellmanFitError(msg, {"F": F, "f": f})

    step = 0.1
    while spent < budget:
        spent += 1
        proposal = np.sort(best_log + step * rng.standard_normal(pieces))[::-1]
        try:
            fitted = search.fit(proposal)
        except DyadicBellmanFitError:
            step = max(step * 0.9, 1e-4)
            continue
        value = search.delta(np.exp(fitted))
        if value > best_value:
            best_value, best_log = value, fitted
            step = min(step * 1.2, 1.0)
        else:
            step = max(step * 0.95, 1e-4)
    _LOGGER.info(
        "Step search: best %s after %s proposals, %s fit failures",
        best_value,
        spent,
        search.fit_failures,
    )
    return best_value


def oracle_report(  # noqa: PLR0913
    p: float,
    k: float,
    b: float,
    F: float,  # noqa: N803
    f: float,
    pieces: int = 64,
    budget: int = 20_000,
    seed: int = 0,
) -> VerificationReport:
    """Bracket B* between the brute-force optimum and its upper bound."""
    constants = power_weight_constants(PowerWeightSpec(k=k, b=b, p=p))
    bound = bellman_star(WeightedBellmanPoint.build(p, F, f, constants.a, constants.c))
    best = bruteforce_thm2_sup(p, k, b, F, f, pieces, budget, seed)
    passed = best <= bound * (1 + UPPER_BOUND_TOLERANCE)
    if pieces >= BRUTE_FORCE_MIN_PIECES and budget >= BRUTE_FORCE_MIN_BUDGET:
        passed = passed and best >= bound * (1 - ORACLE_GAP)
    return _single(
        "thm2-oracle",
        TrialRecord(
            0, best, bound, passed, reason=None if passed else "outside bracket"
        ),
        seed=seed,
        instance={
            "p": p,
            "k": k,
            "b": b,
            "F": F,
            "f": f,
            "pieces": pieces,
            "budget": budget,
        },
    )


def _leafwise_record(
    trial: int, lhs: NDArray[np.float64], rhs: NDArray[np.float64]
) -> TrialRecord:
    """Return the record of the leaf with the largest relative excess."""
    excess = lhs - rhs * (1 + POINTWISE_TOLERANCE)
    relative = excess / np.maximum(rhs, np.finfo(float).tiny)
    worst = int(np.argmax(relative))
    return TrialRecord(
        trial, float(lhs[worst]), float(rhs[worst]), bool(np.all(excess <= 0))
    )


def verify_lerner(
    tree: TreeSpace,
    w: LeafFunction,
    phi: LeafFunction,
    p: float,
    *,
    trial: int = 0,
) -> VerificationReport:
    """Check (M phi)**(p-1) <= [w]_p * M_w[(M_sigma(phi/sigma))**(p-1) / w] leafwise."""
    ap = ap_constant_tree(tree, w, p)
    sigma = sigma_weight(w, p)
    lhs = maximal_function(tree, phi).power(p - 1)
    inner = maximal_function(tree, phi.divide(sigma), sigma).power(p - 1).divide(w)
    rhs = maximal_function(tree, inner, w).scale(ap)
    record = _leafwise_record(trial, lhs.values, rhs.values)
    return _single("prop1", record, instance={"p": p, "ap": ap})


def verify_thm3(
    tree: TreeSpace,
    w: LeafFunction,
    phi: LeafFunction,
    p: float,
    *,
    trial: int = 0,
) -> VerificationReport:
    """Check the integral of (M phi)**p * w <= W1 <= W2.

    Instances outside the domain of the bounds are recorded as skipped.
    """
    F = integrate_leaves(tree, phi.power(p), w)  # noqa: N806
    f = integrate_leaves(tree, phi)
    m = integrate_leaves(tree, phi.power(p - 1), w)
    w_total = integrate_leaves(tree, w)
    sigma_total = integrate_leaves(tree, sigma_weight(w, p))
    ap = ap_constant_tree(tree, w, p)
    lhs = integrate_leaves(tree, maximal_function(tree, phi).power(p), w)
    try:
        first = thm3_w1_bound(p, F, f, m, w_total, sigma_total, ap)
        second = thm3_w2_bound(p, F, f, sigma_total, ap)
    except DyadicBellmanDomainError as exception:
        _LOGGER.warning("Trial %s skipped: %s", trial, exception.args[0])
        record = TrialRecord(
            trial, lhs, math.nan, passed=True, skipped=True,
            reason=f"outside bound domain: {exception.args[0]}",
        )
        return _single("thm3", record, instance={"p": p})
    chain = first <= second * (1 + POINTWISE_TOLERANCE)
    passed = lhs <= first * (1 + POINTWISE_TOLERANCE) and chain
    record = TrialRecord(
        trial, lhs, first, passed, reason=None if chain else "W1 exceeds W2"
    )
    return _single(
        "thm3", record, instance={"p": p, "W1": first, "W2": second, "ap": ap}
    )


def verify_doob(
    tree: TreeSpace, phi: LeafFunction, p: float, *, trial: int = 0
) -> VerificationReport:
    """Check the integral of (M phi)**p <= B_p(F, f) <= (p/(p-1))**p * F."""
    F = integrate_leaves(tree, phi.power(p))  # noqa: N806
    f = integrate_leaves(tree, phi)
    lhs = integrate_leaves(tree, maximal_function(tree, phi).power(p))
    if F == 0:
        record = TrialRecord(
            trial, lhs, 0.0, passed=True, skipped=True, reason="phi vanishes"
        )
        return _single("doob", record, instance={"p": p})
    bellman = bellman_unweighted(BellmanPoint(p, F, f))
    envelope = doob_constant(p) * F
    passed = (
        lhs <= bellman * (1 + POINTWISE_TOLERANCE)
        and bellman <= envelope * (1 + POINTWISE_TOLERANCE)
    )
    reason = None
    if p == 2:
        refined = doob_refined_l2(F, f)
        if abs(refined - bellman) > IDENTITY_TOLERANCE * bellman:
            passed, reason = False, "refined L2 bound differs from B_2"
    return _single(
        "doob",
        TrialRecord(trial, lhs, bellman, passed, reason=reason),
        instance={"p": p, "envelope": envelope},
    )


def verify_hardy_littlewood(
    tree: TreeSpace,
    phi: LeafFunction,
    w: LeafFunction,
    p: float,
    *,
    trial: int = 0,
) -> VerificationReport:
    """Check that pairing with the decreasing rearrangement of w only increases.

    Both the integral of (M phi)**p * w and that of phi**p * w are compared
    with the integrals of the decreasing rearrangements against w*.
    """
    wstar = rearranged_weight(tree, w)
    maximal = maximal_function(tree, phi)
    pairs = [
        (
            integrate_leaves(tree, function.power(p), w),
            integrate_power_composite(
                decreasing_rearrangement(tree, function).function, p, wstar
            ),
        )
        for function in (maximal, phi)
    ]
    lhs, rhs = min(
        pairs, key=lambda pair: (pair[1] - pair[0]) / max(pair[1], EXACT_TOLERANCE)
    )
    passed = all(low <= high * (1 + POINTWISE_TOLERANCE) for low, high in pairs)
    return _single("hl", TrialRecord(trial, lhs, rhs, passed), instance={"p": p})


def verify_prop2(cfg: Prop2Config, alphas: Sequence[float]) -> VerificationReport:
    """Tabulate the lower-bound sequence along decreasing alpha.

    Every member must reproduce the integrals f and z exactly. Along the
    sequence the errors of [w]_p against h, of the integral of phi**p * w
    against F and of the maximal integral against its limit must decrease.
    """
    limit = prop2_limit_rhs(cfg)
    records: list[TrialRecord] = []
    table: list[dict[str, float]] = []
    for trial, alpha in enumerate(sorted(alphas, reverse=True)):
        member = prop2_instance(cfg, alpha)
        error = max(abs(member.int_phi - cfg.f), abs(member.int_w - cfg.z))
        tolerance = EXACT_TOLERANCE * max(1.0, cfg.f, cfg.z)
        records.append(
            TrialRecord(
                trial, error, tolerance, error <= tolerance, instance=member.to_json()
            )
        )
        table.append(
            {
                **member.to_json(),
                "limit": limit,
                "ratio": member.int_maximal_p_w / limit,
            }
        )

    failures: list[str] = []
    errors = {
        "ap_const": [abs(row["ap_const"] - cfg.h) for row in table],
        "int_phi_p_w": [abs(row["int_phi_p_w"] - cfg.F) for row in table],
        "ratio": [abs(row["ratio"] - 1) for row in table],
    }
    for name, sequence in errors.items():
        if any(
            later > earlier + EXACT_TOLERANCE
            for earlier, later in zip(sequence, sequence[1:], strict=False)
        ):
            failures.append(f"{name} error does not decrease along alpha")
    return VerificationReport(
        name="prop2",
        seed=0,
        records=records,
        instance=cfg.to_json(),
        failures=failures,
        notes={"table": table},
    )


class VerificationSuite(Protocol):
    """A named group of checks runnable from parameters and a seed."""

    name: str
    """The name of the suite on the command line."""

    def run(self, params: SuiteParameters, seed: int) -> list[VerificationReport]:
        """Run the checks of the suite.

        Args:
        ----
            params: Parameters; unset values fall back to suite defaults.
            seed: Seed of the random draws.

        """


def _instances(
    params: SuiteParameters, seed: int
) -> Iterator[tuple[int, float, TreeSpace, LeafFunction, LeafFunction]]:
    """Yield (trial, p, tree, phi, w), from the given tree or random draws."""
    if params.tree is not None:
        if params.phi is None:
            msg = "A tree instance needs a 'phi' leaf function."
            raise DyadicBellmanStructureError(msg)
        weight = params.weight or LeafFunction.constant(params.tree, 1.0)
        yield 0, params.p or 2.0, params.tree, params.phi, weight
        return
    for trial in range(params.trials):
        tree, phi, w = random_instance([seed, trial], params.depth)
        yield trial, params.p or P_CYCLE[trial % len(P_CYCLE)], tree, phi, w


def _failing_instance(
    seed: int, trial: int, p: float, tree: TreeSpace, functions: dict[str, LeafFunction]
) -> dict[str, Any]:
    return {"seed": seed, "trial": trial, "p": p, **tree.to_json(functions)}


class _InstanceSuite:
    """Suite running one leafwise check over a stream of instances."""

    name = ""

    def check(
        self, tree: TreeSpace, phi: LeafFunction, w: LeafFunction, p: float, trial: int
    ) -> VerificationReport:
        raise NotImplementedError

    def run(self, params: SuiteParameters, seed: int) -> list[VerificationReport]:
        reports = [VerificationReport(name=self.name, seed=seed, records=[])]
        for trial, p, tree, phi, w in _instances(params, seed):
            report = self.check(tree, phi, w, p, trial)
            record = report.records[0]
            instance = {**report.instance, "seed": seed, "trial": trial, "p": p}
            if not record.passed:
                instance = {
                    **instance,
                    **_failing_instance(seed, trial, p, tree, {"phi": phi, "w": w}),
                }
            report.records[0] = dataclasses.replace(record, instance=instance)
            reports.append(report)
        merged = functools.reduce(VerificationReport.merge, reports)
        merged.seed = seed
        merged.instance = {
            "generator": "given tree" if params.tree is not None else "random_instance",
            "depth": params.depth,
            "p": params.p if params.p is not None else list(P_CYCLE),
        }
        if merged.trials:
            merged.notes = {"skip_rate": merged.skipped / merged.trials}
        _LOGGER.info(
            "%s: %s trials, %s skipped, pass=%s",
            self.name,
            merged.trials,
            merged.skipped,
            merged.passed,
        )
        return [merged]


class LernerSuite(_InstanceSuite):
    """Pointwise double-maximal estimate on random instances."""

    name = "prop1"

    def check(
        self, tree: TreeSpace, phi: LeafFunction, w: LeafFunction, p: float, trial: int
    ) -> VerificationReport:
        return verify_lerner(tree, w, phi, p, trial=trial)


class WeightedBoundSuite(_InstanceSuite):
    """The two weighted bounds on random instances."""

    name = "thm3"

    def check(
        self, tree: TreeSpace, phi: LeafFunction, w: LeafFunction, p: float, trial: int
    ) -> VerificationReport:
        return verify_thm3(tree, w, phi, p, trial=trial)


class DoobSuite(_InstanceSuite):
    """Doob, Bellman and refined L2 bounds on random instances."""

    name = "doob"

    def check(
        self,
        tree: TreeSpace,
        phi: LeafFunction,
        w: LeafFunction,  # noqa: ARG002
        p: float,
        trial: int,
    ) -> VerificationReport:
        return verify_doob(tree, phi, p, trial=trial)


class HardyLittlewoodSuite(_InstanceSuite):
    """Rearrangement inequality against decreasing weights."""

    name = "hl"

    def check(
        self, tree: TreeSpace, phi: LeafFunction, w: LeafFunction, p: float, trial: int
    ) -> VerificationReport:
        return verify_hardy_littlewood(tree, phi, w, p, trial=trial)


class SymmetrizationSuite:
    """Symmetrization inequality for t**(-1/4) on a uniform binary tree."""

    name = "thm1"

    def run(self, params: SuiteParameters, seed: int) -> list[VerificationReport]:
        tree = params.tree or build_uniform_tree(params.depth, 2)
        if params.phi is not None:
            phi = params.phi
        else:
            edges = np.concatenate(([0.0], np.cumsum(tree.leaf_measures)))
            edges[-1] = 1.0
            head = PiecewisePower.power(1.0, -0.25)
            phi = LeafFunction(tree, cell_averages(head, edges))
        g = decreasing_rearrangement(tree, phi)
        exponents = (params.p,) if params.p is not None else (1.5, 2.0)
        truncations = (
            (params.truncation,) if params.truncation is not None else (0.5, 1.0)
        )
        weights = (PiecewisePower.constant(1.0), PiecewisePower.power(1.0, 0.5))
        return [
            verify_symmetrization(
                tree, g, SymmetrizationProblem(q, h, k), params.trials, seed
            )
            for q in exponents
            for h in weights
            for k in truncations
        ]


class UpperBoundSuite:
    """Random upper-bound checks, the sharpness witness and the step oracle."""

    name = "thm2"

    def run(self, params: SuiteParameters, seed: int) -> list[VerificationReport]:
        if params.p is not None:
            settings = [(params.p, params.k or 1.0, params.b or 0.0)]
        else:
            settings = [(2.0, 1.0, 0.0), (2.0, 1.0, -0.5), (3.0, 2.0, 0.5)]
        reports: list[VerificationReport] = []
        for p, k, b in settings:
            reports.append(verify_thm2_upper(p, k, b, params.trials, seed))
            reports.append(sharpness_witness(p, k, b))
            if params.F is not None and params.f is not None:
                reports.append(
                    oracle_report(
                        p, k, b, params.F, params.f, params.pieces, params.budget, seed
                    )
                )
        return reports


class LowerBoundSuite:
    """Limits of the lower-bound sequence on S-alpha trees."""

    name = "prop2"

    def run(self, params: SuiteParameters, seed: int) -> list[VerificationReport]:
        cfg = Prop2Config(
            p=params.p or 2.0,
            F=params.F or 2.0,
            f=params.f if params.f is not None else 1.0,
            h=params.h or 4 / 3,
            z=params.z or 1.0,
        )
        report = verify_prop2(cfg, params.alphas)
        report.seed = seed
        return [report]


SUITE_REGISTRY: dict[str, VerificationSuite] = {
    suite.name: suite
    for suite in (
        SymmetrizationSuite(),
        UpperBoundSuite(),
        LernerSuite(),
        WeightedBoundSuite(),
        LowerBoundSuite(),
        DoobSuite(),
        HardyLittlewoodSuite(),
    )
}


def run_suite(
    name: str, params: SuiteParameters, seed: int = 0
) -> list[VerificationReport]:
    """Run one suite by name, or every suite for "all".

    Raises
    ------
        DyadicBellmanDomainError: Unknown suite name.

    """
    if name == "all":
        return [report for suite in SUITES for report in run_suite(suite, params, seed)]
    if name not in SUITE_REGISTRY:
        msg = "Unknown verification suite."
        raise DyadicBellmanDomainError(msg, {"suite": name, "known": list(SUITES)})
    return SUITE_REGISTRY[name].run(params, seed)
