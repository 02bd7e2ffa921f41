"""Batch command-line interface: one subcommand per workbench operation.

Angles are degrees at this boundary (and radians everywhere inside the
library).  Exit codes: 0 success, 1 usage error, 2 numerical failure or
report-write failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from . import reports
from .analysis import (
    audit_zheng_argument,
    optimize_settings,
    scan_theta,
    violation_threshold,
)
from .bell import evaluate_quantum, lhv_bound, mermin_closed_form, mermin_expression, nlwi_certificate
from .hilbert import AngleTheta, NumericalError, ghz_state
from .observables import zheng_settings
from .reports import ThresholdSolution

__all__ = ["RunConfig", "main", "run"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2

COMMANDS = ("scan", "threshold", "lhv-bound", "paradox", "audit", "optimize")
CSV_COMMANDS = ("scan", "threshold", "lhv-bound", "optimize")
PLOT_COMMANDS = ("scan", "audit")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration for one CLI invocation."""

    command: str
    theta_degrees: float | None = None
    theta_min_degrees: float = 0.0
    theta_max_degrees: float = 45.0
    steps: int = 101
    restarts: int = 64
    seed: int = 0
    tol: float = 1e-12
    output_format: str = "json"
    output_path: Path | None = None
    plot_path: Path | None = None

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.output_format not in ("csv", "json"):
            raise UsageError(f"format must be csv or json, got {self.output_format!r}")
        if self.output_format == "csv" and self.command not in CSV_COMMANDS:
            raise UsageError(
                f"command {self.command!r} emits a nested report; use --format json"
            )
        if self.tol <= 0:
            raise UsageError(f"--tol must be positive, got {self.tol}")
        if self.command == "scan":
            if self.steps < 2:
                raise UsageError(f"--steps must be at least 2, got {self.steps}")
            if not self.theta_min_degrees < self.theta_max_degrees:
                raise UsageError("--theta-min must be strictly below --theta-max")
            for value in (self.theta_min_degrees, self.theta_max_degrees):
                _check_degrees(value)
        if self.command in ("paradox", "audit", "optimize"):
            if self.theta_degrees is None:
                raise UsageError(f"command {self.command!r} requires --theta-degrees")
            _check_degrees(self.theta_degrees)
        if self.command == "optimize" and self.restarts < 1:
            raise UsageError(f"--restarts must be at least 1, got {self.restarts}")
        if self.plot_path is not None and self.command not in PLOT_COMMANDS:
            raise UsageError(f"--plot is only available for {', '.join(PLOT_COMMANDS)}")


def _check_degrees(value: float) -> None:
    if not 0.0 <= value <= 90.0:
        raise UsageError(f"angles must lie in [0, 90] degrees, got {value}")


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; the contract reserves 2
    # for numerical failures, so usage problems are rethrown instead.
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="merminlab",
        description=(
            "Workbench for the three-qubit Mermin inequality on generalized "
            "GHZ states: scans, thresholds, LHV bounds, paradox certificates."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, default_format: str) -> None:
        p.add_argument("--format", choices=("csv", "json"), default=default_format)
        p.add_argument("--out", type=Path, default=None, help="output path (default: stdout)")

    p_scan = sub.add_parser("scan", help="Mermin value over a theta grid")
    p_scan.add_argument("--theta-min", type=float, default=0.0, help="degrees")
    p_scan.add_argument("--theta-max", type=float, default=45.0, help="degrees")
    p_scan.add_argument("--steps", type=int, default=101)
    p_scan.add_argument("--plot", type=Path, default=None, help="also render a .png figure")
    add_common(p_scan, "csv")

    p_threshold = sub.add_parser("threshold", help="violation-threshold angle")
    p_threshold.add_argument("--tol", type=float, default=1e-12)
    add_common(p_threshold, "json")

    p_lhv = sub.add_parser("lhv-bound", help="exact deterministic-strategy bound")
    add_common(p_lhv, "json")

    p_paradox = sub.add_parser("paradox", help="nonlocality-without-inequalities certificate")
    p_paradox.add_argument("--theta-degrees", type=float, required=True)
    p_paradox.add_argument("--tol", type=float, default=1e-10)
    add_common(p_paradox, "json")

    p_audit = sub.add_parser("audit", help="conditional-probability audit at one angle")
    p_audit.add_argument("--theta-degrees", type=float, required=True)
    p_audit.add_argument("--plot", type=Path, default=None, help="also render a .png figure")
    add_common(p_audit, "json")

    p_opt = sub.add_parser("optimize", help="maximize the Mermin value over settings")
    p_opt.add_argument("--theta-degrees", type=float, required=True)
    p_opt.add_argument("--restarts", type=int, default=64)
    p_opt.add_argument("--seed", type=int, default=0)
    add_common(p_opt, "json")

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        theta_degrees=getattr(args, "theta_degrees", None),
        theta_min_degrees=getattr(args, "theta_min", 0.0),
        theta_max_degrees=getattr(args, "theta_max", 45.0),
        steps=getattr(args, "steps", 101),
        restarts=getattr(args, "restarts", 64),
        seed=getattr(args, "seed", 0),
        tol=getattr(args, "tol", 1e-12),
        output_format=args.format,
        output_path=args.out,
        plot_path=getattr(args, "plot", None),
    )


def run(config: RunConfig) -> int:
    """Execute one validated configuration and write its report."""
    try:
        text = _execute(config)
    except NumericalError as exc:
        print(f"merminlab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"merminlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        _write(config.output_path, text)
    except OSError as exc:
        print(f"merminlab: cannot write report: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def _write(path: Path | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_bytes(text.encode("utf-8"))


def _theta_config(theta: AngleTheta) -> dict[str, Any]:
    return {
        "theta_degrees": theta.degrees,
        "outside_canonical_domain": theta.outside_canonical_domain,
    }


def _execute(config: RunConfig) -> str:
    if config.command == "scan":
        return _run_scan(config)
    if config.command == "threshold":
        return _run_threshold(config)
    if config.command == "lhv-bound":
        return _run_lhv(config)
    if config.command == "paradox":
        return _run_paradox(config)
    if config.command == "audit":
        return _run_audit(config)
    return _run_optimize(config)


def _run_scan(config: RunConfig) -> str:
    lo = AngleTheta.from_degrees(config.theta_min_degrees)
    hi = AngleTheta.from_degrees(config.theta_max_degrees)
    rows = scan_theta(lo.radians, hi.radians, config.steps)
    if config.plot_path is not None:
        from .figures import render_scan_figure

        threshold = violation_threshold(1e-12)
        if not lo.radians <= threshold <= hi.radians:
            threshold = None
        render_scan_figure(rows, config.plot_path, threshold=threshold)
    if config.output_format == "csv":
        return reports.emit_scan_csv(rows)
    cfg = {
        "theta_min_degrees": lo.degrees,
        "theta_max_degrees": hi.degrees,
        "steps": config.steps,
        "outside_canonical_domain": lo.outside_canonical_domain or hi.outside_canonical_domain,
    }
    return reports.render_report_json("scan", cfg, reports.scan_payload(rows))


def _run_threshold(config: RunConfig) -> str:
    theta_star = violation_threshold(config.tol)
    solution = ThresholdSolution(
        theta_star=theta_star,
        tol=config.tol,
        closed_form_value=mermin_closed_form(theta_star),
        statevector_value=evaluate_quantum(
            mermin_expression(), ghz_state(theta_star, 3), zheng_settings(theta_star)
        ),
    )
    if config.output_format == "csv":
        return reports.emit_threshold_csv(solution)
    cfg = {"tol": config.tol}
    return reports.render_report_json("threshold", cfg, reports.threshold_payload(solution))


def _run_lhv(config: RunConfig) -> str:
    result = lhv_bound(mermin_expression())
    if config.output_format == "csv":
        return reports.emit_lhv_csv(result)
    return reports.render_report_json("lhv-bound", {}, reports.lhv_payload(result))


def _run_paradox(config: RunConfig) -> str:
    theta = AngleTheta.from_degrees(config.theta_degrees)
    certificate = nlwi_certificate(
        ghz_state(theta, 3), zheng_settings(theta), tol=config.tol
    )
    cfg = {**_theta_config(theta), "tol": config.tol}
    return reports.render_report_json(
        "paradox", cfg, reports.certificate_payload(certificate)
    )


def _run_audit(config: RunConfig) -> str:
    theta = AngleTheta.from_degrees(config.theta_degrees)
    report = audit_zheng_argument(theta)
    if config.plot_path is not None:
        from .figures import render_audit_figure

        render_audit_figure(report, config.plot_path)
    return reports.render_report_json(
        "audit", _theta_config(theta), reports.audit_payload(report)
    )


def _run_optimize(config: RunConfig) -> str:
    theta = AngleTheta.from_degrees(config.theta_degrees)
    result = optimize_settings(theta, restarts=config.restarts, seed=config.seed)
    if config.output_format == "csv":
        return reports.emit_optimize_csv(result, config.seed)
    cfg = {**_theta_config(theta), "restarts": config.restarts, "seed": config.seed}
    return reports.render_report_json(
        "optimize", cfg, reports.optimization_payload(result)
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = config_from_args(args)
        return run(config)
    except UsageError as exc:
        print(f"merminlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
