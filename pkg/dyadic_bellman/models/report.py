"""Verification problems, per-trial records and reports."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

from dyadic_bellman.exceptions import DyadicBellmanDomainError

from .piecewise import PiecewisePower

if TYPE_CHECKING:
    from .tree import LeafFunction, TreeSpace

CSV_COLUMNS = ("name", "trial", "lhs", "rhs", "margin", "pass")


@dataclass(frozen=True)
class SymmetrizationProblem:
    """G(x) = x**q integrated against h on (0, k]."""

    q: float
    h: PiecewisePower
    k: float = 1.0

    def __post_init__(self) -> None:
        """Validate q, h and the truncation point."""
        if not self.q > 0:
            msg = "q must be positive."
            raise DyadicBellmanDomainError(msg, {"q": self.q})
        if not self.h.nonneg:
            msg = "h must be flagged nonnegative."
            raise DyadicBellmanDomainError(msg)
        if not 0 < self.k <= 1:
            msg = "k must lie in (0, 1]."
            raise DyadicBellmanDomainError(msg, {"k": self.k})

    def describe(self) -> dict[str, Any]:
        """Return a JSON-compatible descriptor."""
        return {"G": f"x^{self.q:g}", "h": self.h.to_json(), "k": self.k}


@dataclass(frozen=True)
class TrialRecord:
    """Outcome of one trial of a check."""

    trial: int
    lhs: float
    rhs: float
    passed: bool
    skipped: bool = False
    reason: str | None = None
    instance: dict[str, Any] | None = field(default=None, repr=False, compare=False)

    @property
    def margin(self) -> float:
        """Return rhs - lhs."""
        return self.rhs - self.lhs

    @property
    def slack(self) -> float:
        """Return the margin relative to the size of the right-hand side."""
        scale = abs(self.rhs) if self.rhs and math.isfinite(self.rhs) else 1.0
        return self.margin / scale

    def csv_row(self, name: str) -> list[str]:
        """Return the CSV cells of this record."""
        return [
            name,
            str(self.trial),
            _number(self.lhs),
            _number(self.rhs),
            _number(self.margin),
            "skip" if self.skipped else str(self.passed).lower(),
        ]


@dataclass
class VerificationReport:
    """Summary of a check over one or many trials.

    The report passes when every non-skipped trial passes and no report-level
    failure was recorded. lhs, rhs and margin are those of the worst trial.
    """

    name: str
    seed: int
    records: list[TrialRecord]
    instance: dict[str, Any] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)
    notes: dict[str, Any] = field(default_factory=dict)

    @property
    def trials(self) -> int:
        """Return the number of trials."""
        return len(self.records)

    @property
    def skipped(self) -> int:
        """Return the number of skipped trials."""
        return sum(record.skipped for record in self.records)

    @property
    def checked(self) -> list[TrialRecord]:
        """Return the non-skipped records."""
        return [record for record in self.records if not record.skipped]

    @property
    def worst(self) -> TrialRecord | None:
        """Return the checked record with the smallest relative slack."""
        checked = self.checked
        if not checked:
            return None
        failed = [record for record in checked if not record.passed]
        return min(failed or checked, key=lambda record: record.slack)

    @property
    def passed(self) -> bool:
        """Return True if every checked trial passed."""
        return not self.failures and all(record.passed for record in self.checked)

    @property
    def lhs(self) -> float:
        """Return the left-hand side of the worst trial."""
        worst = self.worst
        return worst.lhs if worst else math.nan

    @property
    def rhs(self) -> float:
        """Return the right-hand side of the worst trial."""
        worst = self.worst
        return worst.rhs if worst else math.nan

    @property
    def margin(self) -> float:
        """Return the margin of the worst trial."""
        worst = self.worst
        return worst.margin if worst else math.nan

    def merge(self, other: VerificationReport) -> VerificationReport:
        """Return the report over the trials of both reports."""
        return VerificationReport(
            name=self.name,
            seed=self.seed,
            records=[*self.records, *other.records],
            instance={**other.instance, **self.instance},
            failures=[*self.failures, *other.failures],
            notes={**other.notes, **self.notes},
        )

    def to_json(self) -> dict[str, Any]:
        """Serialize to the documented JSON schema."""
        worst = self.worst
        return {
            "name": self.name,
            "seed": self.seed,
            "trials": self.trials,
            "skipped": self.skipped,
            "lhs": _json_number(self.lhs),
            "rhs": _json_number(self.rhs),
            "margin": _json_number(self.margin),
            "pass": self.passed,
            "instance": self.instance,
            "failures": self.failures,
            "notes": self.notes,
            "worst_instance": (worst.instance or {"trial": worst.trial})
            if worst
            else {},
        }

    def csv_rows(self) -> list[list[str]]:
        """Return one CSV row per trial."""
        return [record.csv_row(self.name) for record in self.records]


@dataclass(frozen=True)
class SuiteParameters:
    """Parameters shared by the verification suites.

    Unset values fall back to the defaults of each suite.
    """

    p: float | None = None
    k: float | None = None
    b: float | None = None
    F: float | None = None  # noqa: N815
    f: float | None = None
    h: float | None = None
    z: float | None = None
    truncation: float | None = None
    alphas: tuple[float, ...] = (0.1, 0.01, 0.001)
    depth: int = 6
    trials: int = 100
    pieces: int = 64
    budget: int = 20_000
    tree: TreeSpace | None = None
    phi: LeafFunction | None = None
    weight: LeafFunction | None = None


def _number(value: float) -> str:
    return f"{value:.15g}"


def _json_number(value: float) -> float | None:
    return value if math.isfinite(value) else None
