"""Report serialization: plot-ready CSV and versioned JSON with round-trip parsing.

CSV numbers are printed with 17 significant digits so regression files are
stable across platforms; JSON uses Python's shortest-round-trip float
repr, so parsing a report recovers the original values exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Sequence

from .analysis import (
    AuditReport,
    AuditVerdict,
    ConditionalMarginal,
    OptimizationResult,
    ScanRow,
)
from .bell import DeterministicStrategy, LhvBound, ParadoxCertificate
from .correlations import CertaintyRow
from .observables import BlochVector, SettingsTable, bloch_observable

__all__ = [
    "SCHEMA_VERSION",
    "ThresholdSolution",
    "emit_certainty_csv",
    "emit_lhv_csv",
    "emit_optimize_csv",
    "emit_scan_csv",
    "emit_threshold_csv",
    "format_float",
    "parse_report_json",
    "parse_scan_csv",
    "render_report_json",
]

SCHEMA_VERSION = 1


def format_float(value: float) -> str:
    """Decimal form with 17 significant digits (round-trips float64)."""
    return format(float(value), ".17g")


def _deg(radians: float) -> float:
    return math.degrees(radians)


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

SCAN_CSV_HEADER = "theta_rad,theta_deg,m_closed,m_statevector,violated,residual"


def emit_scan_csv(rows: Sequence[ScanRow]) -> str:
    lines = [SCAN_CSV_HEADER]
    for row in rows:
        lines.append(
            ",".join(
                (
                    format_float(row.theta),
                    format_float(_deg(row.theta)),
                    format_float(row.closed_form_value),
                    format_float(row.statevector_value),
                    "1" if row.violated else "0",
                    format_float(row.residual),
                )
            )
        )
    return "\n".join(lines) + "\n"


def parse_scan_csv(text: str) -> list[ScanRow]:
    lines = [line for line in text.split("\n") if line]
    if not lines or lines[0] != SCAN_CSV_HEADER:
        raise ValueError("not a scan CSV: bad or missing header")
    rows = []
    for line in lines[1:]:
        theta, _deg_, closed, statevector, violated, residual = line.split(",")
        rows.append(
            ScanRow(
                theta=float(theta),
                closed_form_value=float(closed),
                statevector_value=float(statevector),
                violated=violated == "1",
                residual=float(residual),
            )
        )
    return rows


def emit_certainty_csv(rows: Sequence[CertaintyRow]) -> str:
    lines = ["theta_rad,theta_deg,constraint,residual,applicable"]
    for row in rows:
        lines.append(
            ",".join(
                (
                    format_float(row.theta),
                    format_float(_deg(row.theta)),
                    row.constraint,
                    format_float(row.residual),
                    "1" if row.applicable else "0",
                )
            )
        )
    return "\n".join(lines) + "\n"


def emit_threshold_csv(solution: "ThresholdSolution") -> str:
    header = "theta_star_rad,theta_star_deg,closed_form_value,statevector_value,tol"
    row = ",".join(
        format_float(v)
        for v in (
            solution.theta_star,
            _deg(solution.theta_star),
            solution.closed_form_value,
            solution.statevector_value,
            solution.tol,
        )
    )
    return f"{header}\n{row}\n"


def emit_lhv_csv(result: LhvBound) -> str:
    return f"bound,maximizer_count\n{format_float(result.bound)},{len(result.maximizers)}\n"


def emit_optimize_csv(result: OptimizationResult, seed: int) -> str:
    header = "theta_rad,theta_deg,best_value,restarts,seed,converged"
    row = ",".join(
        (
            format_float(result.theta),
            format_float(_deg(result.theta)),
            format_float(result.best_value),
            str(result.restarts_used),
            str(seed),
            "1" if result.converged else "0",
        )
    )
    return f"{header}\n{row}\n"


# ---------------------------------------------------------------------------
# JSON payloads (to_payload / from_payload pairs)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThresholdSolution:
    """Violation-threshold angle with both evaluation pathways at the root."""

    theta_star: float
    tol: float
    closed_form_value: float
    statevector_value: float


def scan_payload(rows: Sequence[ScanRow]) -> list[dict[str, Any]]:
    return [
        {
            "theta_rad": row.theta,
            "theta_deg": _deg(row.theta),
            "m_closed": row.closed_form_value,
            "m_statevector": row.statevector_value,
            "violated": row.violated,
            "residual": row.residual,
        }
        for row in rows
    ]


def scan_from_payload(payload: list[dict[str, Any]]) -> list[ScanRow]:
    return [
        ScanRow(
            theta=entry["theta_rad"],
            closed_form_value=entry["m_closed"],
            statevector_value=entry["m_statevector"],
            violated=entry["violated"],
            residual=entry["residual"],
        )
        for entry in payload
    ]


def threshold_payload(solution: ThresholdSolution) -> dict[str, Any]:
    return {
        "theta_star_rad": solution.theta_star,
        "theta_star_degrees": _deg(solution.theta_star),
        "tol": solution.tol,
        "closed_form_value": solution.closed_form_value,
        "statevector_value": solution.statevector_value,
    }


def threshold_from_payload(payload: dict[str, Any]) -> ThresholdSolution:
    return ThresholdSolution(
        theta_star=payload["theta_star_rad"],
        tol=payload["tol"],
        closed_form_value=payload["closed_form_value"],
        statevector_value=payload["statevector_value"],
    )


def lhv_payload(result: LhvBound) -> dict[str, Any]:
    return {
        "bound": result.bound,
        "maximizer_count": len(result.maximizers),
        "maximizers": [
            {"e": list(s.e), "u": list(s.u)} for s in result.maximizers
        ],
    }


def lhv_from_payload(payload: dict[str, Any]) -> LhvBound:
    maximizers = tuple(
        DeterministicStrategy(e=tuple(entry["e"]), u=tuple(entry["u"]))
        for entry in payload["maximizers"]
    )
    return LhvBound(payload["bound"], maximizers)


def certificate_payload(certificate: ParadoxCertificate | None) -> dict[str, Any] | None:
    if certificate is None:
        return None
    return {
        "correlators": list(certificate.correlators),
        "choices": list(certificate.choices),
        "signs": list(certificate.signs),
        "product_values": list(certificate.product_values),
        "lhv_reproducible": certificate.lhv_reproducible,
        "valid": certificate.valid,
        "tol": certificate.tol,
        "transcript": list(certificate.transcript),
    }


def certificate_from_payload(payload: dict[str, Any] | None) -> ParadoxCertificate | None:
    if payload is None:
        return None
    return ParadoxCertificate(
        correlators=tuple(payload["correlators"]),
        choices=tuple(payload["choices"]),
        signs=tuple(payload["signs"]),
        product_values=tuple(payload["product_values"]),
        lhv_reproducible=payload["lhv_reproducible"],
        valid=payload["valid"],
        tol=payload["tol"],
        transcript=tuple(payload["transcript"]),
    )


def audit_payload(report: AuditReport) -> dict[str, Any]:
    return {
        "theta_rad": report.theta,
        "theta_deg": _deg(report.theta),
        "joint_event_probability": report.joint_event_probability,
        "certainty": [
            {
                "theta_rad": row.theta,
                "constraint": row.constraint,
                "residual": row.residual,
                "applicable": row.applicable,
            }
            for row in report.certainty
        ],
        "marginals": [
            {
                "condition_party": m.condition_party,
                "target_party": m.target_party,
                "probability": m.probability,
                "applicable": m.applicable,
            }
            for m in report.marginals
        ],
        "verdict": report.verdict.value,
    }


def audit_from_payload(payload: dict[str, Any]) -> AuditReport:
    return AuditReport(
        theta=payload["theta_rad"],
        joint_event_probability=payload["joint_event_probability"],
        certainty=tuple(
            CertaintyRow(
                theta=row["theta_rad"],
                constraint=row["constraint"],
                residual=row["residual"],
                applicable=row["applicable"],
            )
            for row in payload["certainty"]
        ),
        marginals=tuple(
            ConditionalMarginal(
                condition_party=m["condition_party"],
                target_party=m["target_party"],
                probability=m["probability"],
                applicable=m["applicable"],
            )
            for m in payload["marginals"]
        ),
        verdict=AuditVerdict(payload["verdict"]),
    )


def optimization_payload(result: OptimizationResult) -> dict[str, Any]:
    table = [
        {
            "party": party,
            "E": _bloch_triple(result.best_table.e(party).bloch),
            "U": _bloch_triple(result.best_table.u(party).bloch),
        }
        for party in (1, 2, 3)
    ]
    return {
        "theta_rad": result.theta,
        "theta_deg": _deg(result.theta),
        "best_value": result.best_value,
        "best_table": table,
        "restarts_used": result.restarts_used,
        "converged": result.converged,
    }


def optimization_from_payload(payload: dict[str, Any]) -> OptimizationResult:
    parties = []
    for entry in payload["best_table"]:
        e = bloch_observable(BlochVector(*entry["E"]))
        u = bloch_observable(BlochVector(*entry["U"]))
        parties.append((e, u))
    return OptimizationResult(
        theta=payload["theta_rad"],
        best_value=payload["best_value"],
        best_table=SettingsTable(tuple(parties)),
        restarts_used=payload["restarts_used"],
        converged=payload["converged"],
    )


def _bloch_triple(v: BlochVector) -> list[float]:
    return [v.nx, v.ny, v.nz]


# ---------------------------------------------------------------------------
# JSON envelope
# ---------------------------------------------------------------------------

_RESULT_PARSERS = {
    "scan": scan_from_payload,
    "threshold": threshold_from_payload,
    "lhv-bound": lhv_from_payload,
    "paradox": certificate_from_payload,
    "audit": audit_from_payload,
    "optimize": optimization_from_payload,
}


def render_report_json(command: str, config: dict[str, Any], result: Any) -> str:
    envelope = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": config,
        "result": result,
    }
    return json.dumps(envelope, indent=2, sort_keys=True) + "\n"


def parse_report_json(text: str) -> tuple[str, dict[str, Any], Any]:
    """Parse a report back into (command, config, domain object)."""
    envelope = json.loads(text)
    version = envelope.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {version!r}")
    command = envelope["command"]
    parser = _RESULT_PARSERS.get(command)
    if parser is None:
        raise ValueError(f"unknown report command {command!r}")
    return command, envelope["config"], parser(envelope["result"])
