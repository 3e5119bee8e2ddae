"""Piecewise power-sum functions on (0, 1]."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

import numpy as np
from numpy.typing import ArrayLike, NDArray

from dyadic_bellman.const import NONNEGATIVE_SAMPLES, NONNEGATIVE_TOLERANCE
from dyadic_bellman.exceptions import DyadicBellmanDomainError

if TYPE_CHECKING:
    from .tree import LeafFunction

Term = tuple[float, float]


def _merge_terms(terms: list[Term] | tuple[Term, ...]) -> tuple[Term, ...]:
    """Add coefficients of equal exponents and drop zero terms."""
    merged: dict[float, float] = {}
    for coefficient, exponent in terms:
        merged[exponent] = merged.get(exponent, 0.0) + coefficient
    return tuple(
        (coefficient, exponent)
        for exponent, coefficient in sorted(merged.items())
        if coefficient != 0.0
    )


def evaluate_terms(
    terms: tuple[Term, ...], t: NDArray[np.float64]
) -> NDArray[np.float64]:
    """Evaluate a sum of power terms at points t > 0."""
    result = np.zeros_like(t, dtype=np.float64)
    for coefficient, exponent in terms:
        result += coefficient * np.power(t, exponent)
    return result


@dataclass(frozen=True)
class PiecewisePower:
    """Function on (0, 1] given on each piece (t_{i-1}, t_i] by power terms.

    The value on piece i is the sum of c * t**e over its terms. The flags
    record properties the producer guarantees; `nonneg` is validated.
    """

    breakpoints: tuple[float, ...]
    terms: tuple[tuple[Term, ...], ...]
    nonneg: bool = False
    nonincreasing: bool = False

    def __post_init__(self) -> None:
        """Validate breakpoints, terms and the nonnegativity flag."""
        breakpoints = tuple(float(point) for point in self.breakpoints)
        terms = tuple(
            _merge_terms([(float(c), float(e)) for c, e in piece])
            for piece in self.terms
        )
        object.__setattr__(self, "breakpoints", breakpoints)
        object.__setattr__(self, "terms", terms)

        if len(breakpoints) < 2 or breakpoints[0] != 0.0 or breakpoints[-1] != 1.0:
            msg = "Breakpoints must start at 0 and end at 1."
            raise DyadicBellmanDomainError(msg, {"breakpoints": breakpoints})
        if any(lo >= hi for lo, hi in zip(breakpoints, breakpoints[1:], strict=False)):
            msg = "Breakpoints must be strictly increasing."
            raise DyadicBellmanDomainError(msg, {"breakpoints": breakpoints})
        if len(terms) != len(breakpoints) - 1:
            msg = "One list of terms per piece is required."
            raise DyadicBellmanDomainError(msg)
        for piece in terms:
            for coefficient, exponent in piece:
                if not (np.isfinite(coefficient) and np.isfinite(exponent)):
                    msg = "Terms must have finite coefficients and exponents."
                    raise DyadicBellmanDomainError(
                        msg, {"term": (coefficient, exponent)}
                    )
        if self.nonneg and not self.is_nonnegative():
            msg = "Function flagged nonnegative takes negative values."
            raise DyadicBellmanDomainError(msg)

    @classmethod
    def constant(cls, value: float) -> PiecewisePower:
        """Return the constant function."""
        return cls((0.0, 1.0), (((value, 0.0),),), value >= 0, nonincreasing=True)

    @classmethod
    def power(cls, coefficient: float, exponent: float) -> PiecewisePower:
        """Return the single-piece function c * t**e."""
        return cls(
            (0.0, 1.0),
            (((coefficient, exponent),),),
            nonneg=coefficient >= 0,
            nonincreasing=coefficient * exponent <= 0,
        )

    @classmethod
    def step(cls, breakpoints: ArrayLike, values: ArrayLike) -> PiecewisePower:
        """Return the step function taking values[i] on piece i."""
        levels = np.asarray(values, dtype=np.float64)
        return cls(
            tuple(np.asarray(breakpoints, dtype=np.float64).tolist()),
            tuple(((float(value), 0.0),) for value in levels),
            nonneg=bool(np.all(levels >= 0)),
            nonincreasing=bool(np.all(np.diff(levels) <= 0)),
        )

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> PiecewisePower:
        """Return a new PiecewisePower instance based on the given JSON.

        Args:
        ----
            data: Object with "pieces" and optional "nonneg"/"nonincreasing".

        Returns:
        -------
            A PiecewisePower object.

        """
        try:
            pieces = data["pieces"]
            breakpoints = [float(pieces[0]["lo"])] + [float(p["hi"]) for p in pieces]
            terms = tuple(
                tuple((float(term["c"]), float(term["e"])) for term in piece["terms"])
                for piece in pieces
            )
        except (KeyError, IndexError, TypeError, ValueError) as exception:
            msg = "Malformed piecewise power JSON."
            raise DyadicBellmanDomainError(msg) from exception
        for previous, piece in zip(pieces, pieces[1:], strict=False):
            if float(previous["hi"]) != float(piece["lo"]):
                msg = "Pieces must be contiguous."
                raise DyadicBellmanDomainError(msg)
        return cls(
            tuple(breakpoints),
            terms,
            nonneg=bool(data.get("nonneg", False)),
            nonincreasing=bool(data.get("nonincreasing", False)),
        )

    def to_json(self) -> dict[str, Any]:
        """Serialize to the documented JSON schema."""
        return {
            "pieces": [
                {
                    "lo": lo,
                    "hi": hi,
                    "terms": [{"c": c, "e": e} for c, e in piece],
                }
                for lo, hi, piece in self.pieces()
            ],
            "nonneg": self.nonneg,
            "nonincreasing": self.nonincreasing,
        }

    def pieces(self) -> list[tuple[float, float, tuple[Term, ...]]]:
        """Return (lo, hi, terms) for every piece."""
        return [
            (self.breakpoints[index], self.breakpoints[index + 1], piece)
            for index, piece in enumerate(self.terms)
        ]

    def piece_index(self, t: ArrayLike) -> NDArray[np.int64]:
        """Return the index of the piece (t_{i-1}, t_i] containing each t."""
        points = np.atleast_1d(np.asarray(t, dtype=np.float64))
        if np.any(points <= 0) or np.any(points > 1):
            msg = "Points must lie in (0, 1]."
            raise DyadicBellmanDomainError(msg)
        index = np.searchsorted(np.asarray(self.breakpoints), points, side="left") - 1
        return index.astype(np.int64)

    def evaluate(self, t: ArrayLike) -> NDArray[np.float64]:
        """Evaluate the function at points of (0, 1]."""
        points = np.atleast_1d(np.asarray(t, dtype=np.float64))
        index = self.piece_index(points)
        result = np.zeros_like(points)
        for piece, terms in enumerate(self.terms):
            mask = index == piece
            if np.any(mask):
                result[mask] = evaluate_terms(terms, points[mask])
        return result

    def is_nonnegative(self) -> bool:
        """Check nonnegativity piece by piece.

        Single-term pieces are monotone, so their endpoint values decide.
        Other pieces are sampled densely.
        """
        for lo, hi, terms in self.pieces():
            if not terms:
                continue
            if len(terms) == 1:
                coefficient, exponent = terms[0]
                ends = [coefficient * hi**exponent]
                if lo > 0:
                    ends.append(coefficient * lo**exponent)
                elif exponent < 0:
                    ends.append(np.sign(coefficient) * np.inf)
                if min(ends) < -NONNEGATIVE_TOLERANCE:
                    return False
                continue
            if lo == 0:
                grid = np.geomspace(hi * 1e-12, hi, NONNEGATIVE_SAMPLES)
            else:
                grid = np.linspace(lo, hi, NONNEGATIVE_SAMPLES)
            values = evaluate_terms(terms, grid)
            scale = max(1.0, float(np.max(np.abs(values))))
            if values.min() < -NONNEGATIVE_TOLERANCE * scale:
                return False
        return True


@dataclass(frozen=True)
class RearrangementResult:
    """Nonincreasing step function equimeasurable with a leaf function."""

    function: PiecewisePower
    source: LeafFunction | None = None

    @property
    def values(self) -> NDArray[np.float64]:
        """Return the step values, nonincreasing."""
        return np.asarray(
            [piece[0][0] if piece else 0.0 for piece in self.function.terms]
        )

    @property
    def masses(self) -> NDArray[np.float64]:
        """Return the length of every step."""
        return np.diff(np.asarray(self.function.breakpoints))
