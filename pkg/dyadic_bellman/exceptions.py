"""Exceptions raised by the dyadic Bellman toolkit."""


class DyadicBellmanError(Exception):
    """Generic library exception."""


class DyadicBellmanDomainError(DyadicBellmanError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class DyadicBellmanStructureError(DyadicBellmanError):
    """Objects do not belong together (mismatched trees, unknown nodes)."""


class DyadicBellmanMeasureError(DyadicBellmanError):
    """A node carries zero mass under the requested measure."""


class DyadicBellmanInstanceTooLargeError(DyadicBellmanError):
    """The requested tree exceeds the leaf budget."""


class DyadicBellmanIntegrabilityError(DyadicBellmanError):
    """An integral diverges at 0."""


class DyadicBellmanConvergenceError(DyadicBellmanError):
    """A numerical method did not reach its tolerance."""


class DyadicBellmanDivergenceError(DyadicBellmanError):
    """A geometric series has ratio greater than or equal to one."""


class DyadicBellmanNotApStarError(DyadicBellmanError):
    """The weight does not satisfy the A_p* inequality for any finite a."""


class DyadicBellmanDegenerateConstantsError(DyadicBellmanError):
    """The best A_p* constant c is not positive."""


class DyadicBellmanTailConditionError(DyadicBellmanError):
    """The vanishing tail condition of an A_p* weight fails."""


class DyadicBellmanFitError(DyadicBellmanError):
    """The two-constraint fit of a proposal did not converge."""
