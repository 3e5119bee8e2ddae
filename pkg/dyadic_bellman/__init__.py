"""Bellman functions of dyadic-like maximal operators, with numerical checks."""

from .bellman_core import (
    bellman_star,
    bellman_unweighted,
    minimize_ap2,
    omega_p,
    thm3_w1_bound,
    thm3_w2_bound,
)
from .exceptions import (
    DyadicBellmanConvergenceError,
    DyadicBellmanDomainError,
    DyadicBellmanError,
    DyadicBellmanIntegrabilityError,
    DyadicBellmanStructureError,
)
from .measure_tree import build_salpha, build_uniform_tree, maximal_function
from .models import (
    BellmanPoint,
    LeafFunction,
    PiecewisePower,
    PowerWeightSpec,
    TreeSpace,
    VerificationReport,
    WeightedBellmanPoint,
)
from .step_functions import decreasing_rearrangement, delta_w, hardy_average
from .verification import run_suite
from .weight_theory import apstar_constants, power_weight_constants

__all__ = [
    "BellmanPoint",
    "DyadicBellmanConvergenceError",
    "DyadicBellmanDomainError",
    "DyadicBellmanError",
    "DyadicBellmanIntegrabilityError",
    "DyadicBellmanStructureError",
    "LeafFunction",
    "PiecewisePower",
    "PowerWeightSpec",
    "TreeSpace",
    "VerificationReport",
    "WeightedBellmanPoint",
    "apstar_constants",
    "bellman_star",
    "bellman_unweighted",
    "build_salpha",
    "build_uniform_tree",
    "decreasing_rearrangement",
    "delta_w",
    "hardy_average",
    "maximal_function",
    "minimize_ap2",
    "omega_p",
    "power_weight_constants",
    "run_suite",
    "thm3_w1_bound",
    "thm3_w2_bound",
]
