"""Geometric profiles on S-alpha trees and the lower-bound experiment."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

from dyadic_bellman.exceptions import DyadicBellmanDomainError


@dataclass(frozen=True)
class GeometricProfile:
    """Function equal to lam * gamma**m on the rank-m annuli of S-alpha.

    `exponent` is the power s it discretizes, with gamma = (1 - alpha)**s.
    """

    lam: float
    gamma: float
    exponent: float
    alpha: float

    def __post_init__(self) -> None:
        """Validate positivity and the range of alpha."""
        if not (self.lam > 0 and self.gamma > 0):
            msg = "lam and gamma must be positive."
            raise DyadicBellmanDomainError(msg, {"lam": self.lam, "gamma": self.gamma})
        if not 0 < self.alpha < 1:
            msg = "alpha must lie in (0, 1)."
            raise DyadicBellmanDomainError(msg, {"alpha": self.alpha})

    def value(self, rank: int) -> float:
        """Return the value on annuli of the given rank."""
        return self.lam * self.gamma**rank

    def log_ratio(self) -> float:
        """Return log(gamma * (1 - alpha)), the log of the series ratio."""
        return math.log(self.gamma) + math.log1p(-self.alpha)


@dataclass(frozen=True)
class Prop2Config:
    """Targets of the lower-bound construction: data (F, f), [w]_p -> h, int w -> z."""

    p: float
    F: float  # noqa: N815
    f: float
    h: float
    z: float

    def __post_init__(self) -> None:
        """Validate the scalar ranges and z*f**p <= h*F."""
        if not self.p > 1:
            msg = "p must be greater than 1."
            raise DyadicBellmanDomainError(msg, {"p": self.p})
        if not (self.F > 0 and self.z > 0):
            msg = "F and z must be positive."
            raise DyadicBellmanDomainError(msg, {"F": self.F, "z": self.z})
        if not self.f >= 0:
            msg = "f must be nonnegative."
            raise DyadicBellmanDomainError(msg, {"f": self.f})
        if not (math.isfinite(self.h) and self.h >= 1):
            msg = "h must be a finite number of at least 1."
            raise DyadicBellmanDomainError(msg, {"h": self.h})
        if self.z * self.f**self.p > self.h * self.F * (1 + 1e-12):
            msg = "z*f**p must not exceed h*F."
            raise DyadicBellmanDomainError(
                msg, {"value": self.z * self.f**self.p / (self.h * self.F)}
            )

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> Prop2Config:
        """Return a new Prop2Config instance based on the given JSON.

        Args:
        ----
            data: Object with the numbers "p", "F", "f", "h" and "z".

        Returns:
        -------
            A Prop2Config object.

        """
        try:
            return cls(**{key: float(data[key]) for key in ("p", "F", "f", "h", "z")})
        except (KeyError, TypeError, ValueError) as exception:
            msg = "Prop2 JSON needs numbers 'p', 'F', 'f', 'h' and 'z'."
            raise DyadicBellmanDomainError(msg) from exception

    def to_json(self) -> dict[str, float]:
        """Serialize to the documented JSON schema."""
        return {"p": self.p, "F": self.F, "f": self.f, "h": self.h, "z": self.z}


@dataclass(frozen=True)
class Prop2Instance:
    """Closed-form integrals of one member of the lower-bound sequence."""

    alpha: float
    alpha_g: float
    int_phi: float
    int_phi_p_w: float
    int_w: float
    ap_const: float
    int_maximal_p_w: float

    def to_json(self) -> dict[str, float]:
        """Serialize the record."""
        return {
            "alpha": self.alpha,
            "alpha_g": self.alpha_g,
            "int_phi": self.int_phi,
            "int_phi_p_w": self.int_phi_p_w,
            "int_w": self.int_w,
            "ap_const": self.ap_const,
            "int_maximal_p_w": self.int_maximal_p_w,
        }
