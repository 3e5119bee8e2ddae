"""Models for the dyadic Bellman toolkit."""

from .bellman import BellmanPoint, WeightedBellmanPoint
from .piecewise import PiecewisePower, RearrangementResult, Term
from .profile import GeometricProfile, Prop2Config, Prop2Instance
from .report import (
    SuiteParameters,
    SymmetrizationProblem,
    TrialRecord,
    VerificationReport,
)
from .tree import LeafFunction, SAlphaTree, TreeSpace
from .weights import ApStarConstants, PowerWeightSpec

__all__ = [
    "ApStarConstants",
    "BellmanPoint",
    "GeometricProfile",
    "LeafFunction",
    "PiecewisePower",
    "PowerWeightSpec",
    "Prop2Config",
    "Prop2Instance",
    "RearrangementResult",
    "SAlphaTree",
    "SuiteParameters",
    "SymmetrizationProblem",
    "Term",
    "TreeSpace",
    "TrialRecord",
    "VerificationReport",
    "WeightedBellmanPoint",
]
