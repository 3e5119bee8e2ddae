"""Command-line front end of the dyadic Bellman toolkit."""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import logging
import sys
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .bellman_core import bellman_star, bellman_unweighted, omega_p
from .const import SIGNIFICANT_DIGITS, SUITES
from .exceptions import DyadicBellmanDomainError, DyadicBellmanError
from .extremal_lab import prop2_limit_rhs
from .measure_tree import (
    build_salpha,
    build_uniform_tree,
    dump_instance,
    load_instance,
)
from .models import (
    BellmanPoint,
    PowerWeightSpec,
    Prop2Config,
    SuiteParameters,
    VerificationReport,
    WeightedBellmanPoint,
)
from .models.report import CSV_COLUMNS
from .verification import random_instance, run_suite
from .weight_theory import power_weight_constants

_LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2

_VERBOSITY = (logging.WARNING, logging.INFO, logging.DEBUG)

TABLE_PARAMETERS: dict[str, tuple[str, ...]] = {
    "bellman": ("p", "F", "f"),
    "bellman_star": ("p", "F", "f", "a", "c"),
    "prop2_rhs": ("p", "F", "f", "h", "z"),
}


@dataclass
class RunConfig:
    """Parsed flags of one invocation, echoed into every report."""

    command: str
    params: dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    output_format: str = "json"
    out: str | None = None

    @classmethod
    def from_namespace(cls, args: argparse.Namespace) -> RunConfig:
        """Return the configuration of the parsed arguments."""
        skip = {"command", "seed", "output_format", "out", "verbose", "handler"}
        params = {
            key: value
            for key, value in vars(args).items()
            if key not in skip and value is not None
        }
        return cls(
            command=args.command,
            params=params,
            seed=args.seed,
            output_format=args.output_format,
            out=args.out,
        )

    def to_json(self) -> dict[str, Any]:
        """Serialize the configuration."""
        return {
            "command": self.command,
            "params": self.params,
            "seed": self.seed,
            "format": self.output_format,
        }


def number(value: float) -> str:
    """Format a number with 15 significant digits."""
    return f"{value:.{SIGNIFICANT_DIGITS}g}"


def parse_grid(text: str) -> list[float]:
    """Return the values of a grid "lo:hi:n" or of a single number.

    Raises
    ------
        DyadicBellmanDomainError: The text is neither.

    """
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return [float(text)]
        if len(parts) == 3:
            lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
            if count >= 1:
                return [float(value) for value in np.linspace(lo, hi, count)]
    except ValueError as exception:
        msg = "Malformed grid, expected lo:hi:n."
        raise DyadicBellmanDomainError(msg, {"grid": text}) from exception
    msg = "Malformed grid, expected lo:hi:n."
    raise DyadicBellmanDomainError(msg, {"grid": text})


def parse_alphas(text: str) -> tuple[float, ...]:
    """Return the comma-separated alpha values."""
    try:
        return tuple(float(value) for value in text.split(",") if value.strip())
    except ValueError as exception:
        msg = "Alphas must be comma-separated numbers."
        raise DyadicBellmanDomainError(msg, {"alphas": text}) from exception


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _emit_scalars(config: RunConfig, values: dict[str, float]) -> None:
    if config.output_format == "json":
        _write(json.dumps(values) + "\n", config.out)
    else:
        text = " ".join(f"{key}={number(value)}" for key, value in values.items())
        _write(text + "\n", config.out)


def cmd_omega(args: argparse.Namespace, config: RunConfig) -> int:
    """Print omega_p(y)."""
    value = omega_p(args.p, args.y)
    if config.output_format == "json":
        _write(json.dumps({"omega": value}) + "\n", config.out)
    else:
        _write(number(value) + "\n", config.out)
    return EXIT_OK


def cmd_bellman(args: argparse.Namespace, config: RunConfig) -> int:
    """Print B_p(F, f), or B* when both constants are given."""
    if (args.a is None) != (args.c is None):
        msg = "Give both --a and --c or neither."
        raise DyadicBellmanDomainError(msg)
    if args.a is None:
        value = bellman_unweighted(BellmanPoint(args.p, args.F, args.f))
    else:
        value = bellman_star(
            WeightedBellmanPoint.build(args.p, args.F, args.f, args.a, args.c)
        )
    if config.output_format == "json":
        _write(json.dumps({"bellman": value}) + "\n", config.out)
    else:
        _write(number(value) + "\n", config.out)
    return EXIT_OK


def cmd_constants(args: argparse.Namespace, config: RunConfig) -> int:
    """Print the A_p* constants of the power weight k*t**b."""
    constants = power_weight_constants(PowerWeightSpec(k=args.k, b=args.b, p=args.p))
    _emit_scalars(config, constants.to_json())
    return EXIT_OK


def _suite_parameters(args: argparse.Namespace) -> SuiteParameters:
    p, k, b = args.p, args.k, args.b
    if args.weight is not None:
        try:
            data = json.loads(Path(args.weight).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exception:
            msg = "Unable to read the weight file."
            raise DyadicBellmanDomainError(msg, {"path": args.weight}) from exception
        spec = PowerWeightSpec.from_json(data)
        p = spec.p if p is None else p
        k = spec.k if k is None else k
        b = spec.b if b is None else b

    tree = phi = weight = None
    if args.tree is not None:
        tree, functions = load_instance(args.tree)
        phi, weight = functions.get("phi"), functions.get("w")

    return SuiteParameters(
        p=p,
        k=k,
        b=b,
        F=args.F,
        f=args.f,
        h=args.h,
        z=args.z,
        truncation=args.truncation,
        alphas=args.alphas,
        depth=args.depth,
        trials=args.trials,
        pieces=args.pieces,
        budget=args.budget,
        tree=tree,
        phi=phi,
        weight=weight,
    )


def cmd_verify(args: argparse.Namespace, config: RunConfig) -> int:
    """Run a verification suite and report its outcome."""
    reports = run_suite(args.suite, _suite_parameters(args), config.seed)
    for report in reports:
        report.notes = {**report.notes, "config": config.to_json()}

    if config.output_format == "json":
        text = json.dumps([report.to_json() for report in reports], indent=2) + "\n"
    else:
        rows = [row for report in reports for row in report.csv_rows()]
        text = _csv_text(CSV_COLUMNS, rows)
    _write(text, config.out)

    failed = [report for report in reports if not report.passed]
    for report in failed:
        _log_failure(report)
    return EXIT_VIOLATION if failed else EXIT_OK


def _log_failure(report: VerificationReport) -> None:
    worst = report.to_json()["worst_instance"]
    _LOGGER.error(
        "%s failed: %s; worst instance %s",
        report.name,
        "; ".join(report.failures) or "inequality violated",
        json.dumps(worst),
    )


def _table_expression(expr: str) -> Callable[..., float]:
    if expr == "bellman":
        return lambda p, F, f: bellman_unweighted(BellmanPoint(p, F, f))
    if expr == "bellman_star":
        return lambda p, F, f, a, c: bellman_star(
            WeightedBellmanPoint.build(p, F, f, a, c)
        )
    return lambda p, F, f, h, z: prop2_limit_rhs(Prop2Config(p=p, F=F, f=f, h=h, z=z))


def cmd_table(args: argparse.Namespace, config: RunConfig) -> int:
    """Evaluate a formula over the Cartesian product of parameter grids."""
    names = TABLE_PARAMETERS[args.expr]
    grids: list[list[float]] = []
    for name in names:
        text = getattr(args, name)
        if text is None:
            msg = f"--{name} is required for --expr {args.expr}."
            raise DyadicBellmanDomainError(msg)
        grids.append(parse_grid(text))

    expression = _table_expression(args.expr)
    rows: list[dict[str, Any]] = []
    for values in itertools.product(*grids):
        row: dict[str, Any] = dict(zip(names, values, strict=True))
        try:
            row["value"] = expression(*values)
            row["note"] = ""
        except DyadicBellmanError as exception:
            row["value"] = None
            row["note"] = str(exception.args[0])
        rows.append(row)
    _LOGGER.info("Table %s: %s rows", args.expr, len(rows))

    if config.output_format == "json":
        _write(json.dumps(rows, indent=2) + "\n", config.out)
    else:
        cells = [
            [
                *(number(row[name]) for name in names),
                "NA" if row["value"] is None else number(row["value"]),
                row["note"],
            ]
            for row in rows
        ]
        _write(_csv_text([*names, "value", "note"], cells), config.out)
    return EXIT_OK


def cmd_instance(args: argparse.Namespace, config: RunConfig) -> int:
    """Write a tree instance in the tree JSON schema."""
    if args.kind == "uniform":
        text = dump_instance(build_uniform_tree(args.depth, args.arity))
    elif args.kind == "salpha":
        text = dump_instance(build_salpha(args.alpha, args.rank_cutoff).tree)
    else:
        tree, phi, w = random_instance(config.seed, args.depth)
        text = dump_instance(tree, {"phi": phi, "w": w})
    _write(text + "\n", config.out)
    return EXIT_OK


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format",
        dest="output_format",
        choices=("json", "csv"),
        default="csv",
        help="Output format (default: csv).",
    )
    common.add_argument("--out", help="Output file (default: standard output).")
    common.add_argument("--seed", type=int, default=0, help="Seed (default: 0).")
    common.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="Log more; repeat for debug output.",
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    """Return the argument parser with one subcommand per operation."""
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="dyadic-bellman",
        description="Bellman functions of dyadic-like maximal operators.",
        allow_abbrev=False,
    )
    commands = parser.add_subparsers(dest="command", required=True)

    def command(
        name: str, handler: Callable[[argparse.Namespace, RunConfig], int], text: str
    ) -> argparse.ArgumentParser:
        sub = commands.add_parser(
            name, parents=[common], help=text, description=text, allow_abbrev=False
        )
        sub.set_defaults(handler=handler)
        return sub

    omega = command("omega", cmd_omega, "Inverse of H_p on [1, p/(p-1)].")
    omega.add_argument("--p", type=float, required=True)
    omega.add_argument("--y", type=float, required=True)

    bellman = command("bellman", cmd_bellman, "Unweighted or A_p* Bellman function.")
    bellman.add_argument("--p", type=float, required=True)
    bellman.add_argument("--F", dest="F", type=float, required=True)
    bellman.add_argument("--f", dest="f", type=float, required=True)
    bellman.add_argument("--a", type=float)
    bellman.add_argument("--c", type=float)

    constants = command("constants", cmd_constants, "A_p* constants of k*t**b.")
    constants.add_argument("--k", type=float, required=True)
    constants.add_argument("--b", type=float, required=True)
    constants.add_argument("--p", type=float, required=True)

    verify = command("verify", cmd_verify, "Run a verification suite.")
    verify.add_argument("--suite", choices=(*SUITES, "all"), required=True)
    verify.add_argument("--p", type=float)
    verify.add_argument("--k", type=float, help="Coefficient of the weight k*t**b.")
    verify.add_argument("--b", type=float)
    verify.add_argument("--F", dest="F", type=float)
    verify.add_argument("--f", dest="f", type=float)
    verify.add_argument("--h", type=float)
    verify.add_argument("--z", type=float)
    verify.add_argument(
        "--truncation",
        type=float,
        help="Upper limit in (0, 1] of the thm1 integrals.",
    )
    verify.add_argument("--alphas", type=parse_alphas, default=(0.1, 0.01, 0.001))
    verify.add_argument("--depth", type=int, default=6)
    verify.add_argument("--trials", type=int, default=100)
    verify.add_argument("--pieces", type=int, default=64)
    verify.add_argument("--budget", type=int, default=20_000)
    verify.add_argument("--tree", help="Tree JSON with leaf_values 'phi' and 'w'.")
    verify.add_argument("--weight", help="Power weight JSON with k, b and p.")

    table = command("table", cmd_table, "Tabulate a formula over parameter grids.")
    table.add_argument("--expr", choices=tuple(TABLE_PARAMETERS), required=True)
    for name in ("p", "F", "f", "a", "c", "h", "z"):
        table.add_argument(f"--{name}", dest=name, help="A number or lo:hi:n.")

    instance = command("instance", cmd_instance, "Write a tree instance as JSON.")
    instance.add_argument(
        "--kind", choices=("uniform", "salpha", "random"), default="uniform"
    )
    instance.add_argument("--depth", type=int, default=6)
    instance.add_argument("--arity", type=int, default=2)
    instance.add_argument("--alpha", type=float, default=0.1)
    instance.add_argument("--rank-cutoff", dest="rank_cutoff", type=int, default=12)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Run the command line and return its exit code.

    Exit codes: 0 success, 1 verification failure, 2 usage or domain error.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exception:
        return int(exception.code or 0)

    logging.basicConfig(
        level=_VERBOSITY[min(args.verbose, len(_VERBOSITY) - 1)],
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    config = RunConfig.from_namespace(args)
    try:
        return int(args.handler(args, config))
    except DyadicBellmanError as exception:
        sys.stderr.write(f"error: {exception.args[0]}\n")
        _LOGGER.debug("Details: %s", exception.args[1:])
        return EXIT_USAGE
