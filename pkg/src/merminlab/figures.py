"""Matplotlib figure rendering for the CLI report path.

Figures are written next to the delimited output when the user asks for
them.  Only PNG is supported: the PNG writer embeds no timestamps, so a
rerun with identical inputs produces a byte-identical file (the
determinism contract covers plots too).
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

from .analysis import AuditReport, ScanRow

__all__ = ["render_audit_figure", "render_scan_figure"]

_DPI = 150


def _pyplot(path: Path):
    if path.suffix.lower() != ".png":
        raise ValueError(f"figure output must be a .png path, got {path.name!r}")
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _save(plt, fig, path: Path) -> None:
    fig.savefig(path, dpi=_DPI, metadata={"Software": None})
    plt.close(fig)


def render_scan_figure(
    rows: Sequence[ScanRow], path: Path, threshold: float | None = None
) -> Path:
    """Mermin value against the entanglement angle, with the LHV bound marked."""
    plt = _pyplot(path)
    degrees = [math.degrees(r.theta) for r in rows]
    closed = [r.closed_form_value for r in rows]
    statevector = [r.statevector_value for r in rows]

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(degrees, closed, color="tab:blue", lw=1.6, label="closed form")
    ax.plot(
        degrees,
        statevector,
        color="tab:orange",
        ls="none",
        marker=".",
        ms=4,
        markevery=max(1, len(rows) // 40),
        label="statevector",
    )
    ax.axhline(2.0, color="tab:red", lw=1.0, ls="--", label="LHV bound")
    if threshold is not None:
        ax.axvline(
            math.degrees(threshold),
            color="tab:gray",
            lw=1.0,
            ls=":",
            label=f"threshold {math.degrees(threshold):.2f}°",
        )
    ax.set_xlabel(r"$\theta$ (degrees)")
    ax.set_ylabel("Mermin value")
    ax.legend(loc="best", fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    _save(plt, fig, path)
    return path


def render_audit_figure(report: AuditReport, path: Path) -> Path:
    """Certainty residuals and conditional marginals at one angle."""
    plt = _pyplot(path)
    fig, (ax_res, ax_marg) = plt.subplots(1, 2, figsize=(8.0, 3.6))

    labels = [row.constraint for row in report.certainty]
    residuals = [max(row.residual, 1e-18) for row in report.certainty]
    ax_res.bar(range(len(labels)), residuals, color="tab:blue")
    ax_res.set_yscale("log")
    ax_res.set_xticks(range(len(labels)))
    ax_res.set_xticklabels(labels, rotation=20, fontsize=7)
    ax_res.set_ylabel("|1 - P| residual")
    ax_res.set_title("conditional certainties", fontsize=9)

    pair_labels = [f"P(U{m.target_party}=+1|E{m.condition_party}=+1)" for m in report.marginals]
    values = [m.probability for m in report.marginals]
    ax_marg.bar(range(len(values)), values, color="tab:orange")
    ax_marg.axhline(0.5, color="tab:red", lw=1.0, ls="--")
    ax_marg.set_ylim(0.0, 1.0)
    ax_marg.set_xticks(range(len(pair_labels)))
    ax_marg.set_xticklabels(pair_labels, rotation=40, fontsize=6)
    ax_marg.set_title("conditional marginals (maximal uncertainty at 0.5)", fontsize=9)

    fig.suptitle(
        f"audit at theta = {math.degrees(report.theta):.3f}°: {report.verdict.value}",
        fontsize=10,
    )
    fig.tight_layout()
    _save(plt, fig, path)
    return path
