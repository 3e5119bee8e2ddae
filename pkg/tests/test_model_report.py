"""Test the verification report models."""

import math

import pytest

from dyadic_bellman.exceptions import DyadicBellmanDomainError
from dyadic_bellman.models import (
    PiecewisePower,
    SymmetrizationProblem,
    TrialRecord,
    VerificationReport,
)


def _report() -> VerificationReport:
    return VerificationReport(
        name="doob",
        seed=7,
        records=[
            TrialRecord(0, 1.0, 2.0, passed=True),
            TrialRecord(1, 1.9, 2.0, passed=True, instance={"trial": 1}),
            TrialRecord(2, 0.0, math.nan, passed=True, skipped=True, reason="vanishes"),
        ],
        instance={"p": 2.0},
    )


def test_report_summary() -> None:
    """The worst trial is the checked one with the smallest relative slack."""
    report = _report()
    assert report.trials == 3
    assert report.skipped == 1
    assert report.passed
    assert report.lhs == 1.9
    assert report.margin == pytest.approx(0.1)

    data = report.to_json()
    assert data["name"] == "doob"
    assert data["seed"] == 7
    assert data["pass"] is True
    assert data["worst_instance"] == {"trial": 1}
    assert data["failures"] == []


def test_report_failure_wins() -> None:
    """A failed trial is reported as the worst even with a larger slack."""
    report = _report().merge(
        VerificationReport(
            name="doob",
            seed=7,
            records=[TrialRecord(3, 2.5, 100.0, passed=False)],
        )
    )
    assert report.trials == 4
    assert not report.passed
    assert report.worst is not None
    assert report.worst.trial == 3
    assert report.to_json()["worst_instance"] == {"trial": 3}
    assert report.instance == {"p": 2.0}


def test_report_level_failures() -> None:
    """A failure message fails the report even when all trials pass."""
    report = _report()
    report.failures.append("identity layout differs")
    assert not report.passed


def test_report_without_checked_trials() -> None:
    """Only skipped trials leave the summary numbers empty."""
    report = VerificationReport(
        name="thm3",
        seed=0,
        records=[TrialRecord(0, 1.0, math.nan, passed=True, skipped=True)],
    )
    assert report.passed
    assert report.worst is None
    data = report.to_json()
    assert data["lhs"] is None
    assert data["worst_instance"] == {}


def test_csv_rows() -> None:
    """Rows carry 15 significant digits and the pass column."""
    rows = _report().csv_rows()
    assert rows[0] == ["doob", "0", "1", "2", "1", "true"]
    assert rows[1][4] == "0.1"
    assert rows[2][5] == "skip"


def test_symmetrization_problem() -> None:
    """q, h and the truncation point are validated."""
    problem = SymmetrizationProblem(2.0, PiecewisePower.power(1.0, 0.5), 0.5)
    assert problem.describe()["G"] == "x^2"
    with pytest.raises(DyadicBellmanDomainError):
        SymmetrizationProblem(0.0, PiecewisePower.constant(1.0))
    with pytest.raises(DyadicBellmanDomainError):
        SymmetrizationProblem(2.0, PiecewisePower.constant(1.0), 1.5)
    with pytest.raises(DyadicBellmanDomainError):
        SymmetrizationProblem(2.0, PiecewisePower.constant(-1.0))
