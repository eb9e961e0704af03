"""Figure rendering for the report-producing commands.

Figures are a side output: the delimited text remains the primary
artifact, the PNGs just make the same numbers easy to eyeball.
"""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .analytics import CaseStudyRow
from .model import PortfolioPoint


def save_sweep_figure(points: Sequence[PortfolioPoint], path: str) -> None:
    """Portfolio success rate against administration ratio."""
    ars = [p.ar for p in points]
    values = [p.port_sr for p in points]
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(ars, values, color="tab:blue", lw=1.5)
    if points:
        best = max(points, key=lambda p: p.port_sr)
        ax.plot([best.ar], [best.port_sr], "o", color="tab:red", ms=5)
        ax.annotate(
            f"peak at ar={best.ar:.3f}",
            xy=(best.ar, best.port_sr),
            xytext=(5, -12),
            textcoords="offset points",
            fontsize=9,
        )
    ax.set_xlabel("administration ratio")
    ax.set_ylabel("portfolio success rate")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_case_study_figure(rows: Sequence[CaseStudyRow], path: str) -> None:
    """Indexed case-study measures over the reporting years."""
    years = [row.year for row in rows]
    series = (
        ("funding per project", [row.funding_per_project_index for row in rows]),
        ("administration ratio", [row.admin_ratio_index for row in rows]),
        ("composite output", [row.composite_index for row in rows]),
        ("roi", [row.roi_index for row in rows]),
    )
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for label, values in series:
        ax.plot(years, values, marker="o", ms=3, lw=1.2, label=label)
    ax.axhline(1.0, color="grey", lw=0.8, ls=":")
    ax.set_xlabel("year")
    ax.set_ylabel("index (base year = 1)")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
