"""Weight models: A_p* constants and power weights."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

from dyadic_bellman.exceptions import DyadicBellmanDomainError

from .piecewise import PiecewisePower


@dataclass(frozen=True)
class ApStarConstants:
    """The best pair (a, c) of an A_p* weight."""

    a: float
    c: float

    def __post_init__(self) -> None:
        """Validate that both constants are finite and positive."""
        for name, value in (("a", self.a), ("c", self.c)):
            if not (math.isfinite(value) and value > 0):
                msg = f"The constant {name} must be finite and positive."
                raise DyadicBellmanDomainError(msg, {name: value})

    def to_json(self) -> dict[str, float]:
        """Serialize the pair."""
        return {"a": self.a, "c": self.c}


@dataclass(frozen=True)
class PowerWeightSpec:
    """Rearranged weight w**(t) = k * t**b with -1 < b < p - 1."""

    k: float
    b: float
    p: float

    def __post_init__(self) -> None:
        """Validate the A_p* range of the exponent."""
        if not self.p > 1:
            msg = "p must be greater than 1."
            raise DyadicBellmanDomainError(msg, {"p": self.p})
        if not self.k > 0:
            msg = "k must be positive."
            raise DyadicBellmanDomainError(msg, {"k": self.k})
        if not -1 < self.b < self.p - 1:
            msg = "b must lie in (-1, p-1)."
            raise DyadicBellmanDomainError(msg, {"b": self.b, "p": self.p})

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> PowerWeightSpec:
        """Return a new PowerWeightSpec instance based on the given JSON.

        Args:
        ----
            data: Object with the numbers "k", "b" and "p".

        Returns:
        -------
            A PowerWeightSpec object.

        """
        try:
            return cls(k=float(data["k"]), b=float(data["b"]), p=float(data["p"]))
        except (KeyError, TypeError, ValueError) as exception:
            msg = "Power weight JSON needs numbers 'k', 'b' and 'p'."
            raise DyadicBellmanDomainError(msg) from exception

    def to_json(self) -> dict[str, float]:
        """Serialize to the documented JSON schema."""
        return {"k": self.k, "b": self.b, "p": self.p}

    def weight(self) -> PiecewisePower:
        """Return w** as a single power term on (0, 1]."""
        return PiecewisePower((0.0, 1.0), (((self.k, self.b),),), nonneg=True)
