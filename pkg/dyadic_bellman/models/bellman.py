"""Points of the Bellman function domains."""

from __future__ import annotations

from dataclasses import dataclass

from dyadic_bellman.exceptions import DyadicBellmanDomainError

# Relative slack when comparing f**p with F on the domain boundary.
_BOUNDARY_SLACK = 1e-12


@dataclass(frozen=True)
class BellmanPoint:
    """Exponent p and integral data (F, f) with f**p <= F."""

    p: float
    F: float  # noqa: N815
    f: float

    def __post_init__(self) -> None:
        """Validate the domain of the unweighted Bellman function."""
        if not self.p > 1:
            msg = "p must be greater than 1."
            raise DyadicBellmanDomainError(msg, {"p": self.p})
        if not self.F > 0:
            msg = "F must be positive."
            raise DyadicBellmanDomainError(msg, {"F": self.F})
        if not self.f >= 0:
            msg = "f must be nonnegative."
            raise DyadicBellmanDomainError(msg, {"f": self.f})
        if self.f**self.p > self.F * (1 + _BOUNDARY_SLACK):
            msg = "f**p must not exceed F."
            raise DyadicBellmanDomainError(msg, {"value": self.f**self.p / self.F})

    @property
    def p_prime(self) -> float:
        """Return the dual exponent p/(p-1)."""
        return self.p / (self.p - 1)


@dataclass(frozen=True)
class WeightedBellmanPoint:
    """Integral data (F, f) and the constants (a, c) of an A_p* weight.

    The weighted domain only asks c*f**p <= (p-1)**(p-1) * a**p * F, so
    f**p may exceed F here.
    """

    p: float
    F: float  # noqa: N815
    f: float
    a: float
    c: float

    def __post_init__(self) -> None:
        """Validate c*f**p <= (p-1)**(p-1) * a**p * F."""
        if not self.p > 1:
            msg = "p must be greater than 1."
            raise DyadicBellmanDomainError(msg, {"p": self.p})
        if not self.F > 0:
            msg = "F must be positive."
            raise DyadicBellmanDomainError(msg, {"F": self.F})
        if not self.f >= 0:
            msg = "f must be nonnegative."
            raise DyadicBellmanDomainError(msg, {"f": self.f})
        if not (self.a > 0 and self.c > 0):
            msg = "The constants a and c must be positive."
            raise DyadicBellmanDomainError(msg, {"a": self.a, "c": self.c})
        if self.argument > 1 + _BOUNDARY_SLACK:
            msg = "c*f**p must not exceed (p-1)**(p-1) * a**p * F."
            raise DyadicBellmanDomainError(msg, {"value": self.argument})

    @classmethod
    def build(
        cls, p: float, F: float, f: float, a: float, c: float  # noqa: N803
    ) -> WeightedBellmanPoint:
        """Return a new instance from plain numbers."""
        return cls(p, F, f, a, c)

    @property
    def argument(self) -> float:
        """Return c*f**p / ((p-1)**(p-1) * a**p * F), the argument of omega_p."""
        p = self.p
        return self.c * self.f**p / ((p - 1) ** (p - 1) * self.a**p * self.F)
