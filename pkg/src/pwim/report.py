"""Render an evaluation report to files: JSON, CSV, and figures.

Everything lands in one directory:

    report.json        exact machine-readable report
    report.csv         per-case rows, delimited
    similarities.png   expected-action similarity per intent phrase
    ranks.png          rank of the expected action per intent phrase
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .evaluation import EvalReport

HIT_COLOR = "#2a6f4e"
MISS_COLOR = "#b8860b"
INVALID_COLOR = "#999999"


def write_csv(report: EvalReport, path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["intent", "expected_summary", "rank", "similarity", "invalid_reason"])
        for r in report.results:
            writer.writerow([
                r.case.intent,
                r.case.expected_summary,
                "" if r.rank is None else r.rank,
                "" if r.similarity is None else f"{r.similarity:.6f}",
                r.invalid_reason or "",
            ])


def _case_colors(report: EvalReport) -> list[str]:
    colors = []
    for r in report.results:
        if not r.valid:
            colors.append(INVALID_COLOR)
        elif r.rank == 1:
            colors.append(HIT_COLOR)
        else:
            colors.append(MISS_COLOR)
    return colors


def plot_similarities(report: EvalReport, path: Path) -> None:
    labels = [r.case.intent for r in report.results]
    values = [r.similarity if r.similarity is not None else 0.0 for r in report.results]
    fig, ax = plt.subplots(figsize=(8, 0.5 * len(labels) + 1.5))
    ypos = range(len(labels))
    ax.barh(ypos, values, color=_case_colors(report))
    ax.set_yticks(list(ypos))
    ax.set_yticklabels(labels)
    ax.invert_yaxis()
    ax.set_xlabel("similarity of expected action")
    ax.set_title("intent phrase vs expected action")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_ranks(report: EvalReport, path: Path) -> None:
    labels = [r.case.intent for r in report.results]
    ranks = [r.rank if r.rank is not None else 0 for r in report.results]
    fig, ax = plt.subplots(figsize=(8, 0.5 * len(labels) + 1.5))
    ypos = range(len(labels))
    ax.barh(ypos, ranks, color=_case_colors(report))
    ax.axvline(report.k + 0.5, color="#444444", linestyle="--", linewidth=1,
               label=f"top-{report.k} cutoff")
    ax.set_yticks(list(ypos))
    ax.set_yticklabels(labels)
    ax.invert_yaxis()
    ax.set_xlabel("rank of expected action (0 = invalid case)")
    ax.set_title("expected-action rank per intent phrase")
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_report_files(report: EvalReport, out_dir: str | Path) -> list[Path]:
    """Write all report artifacts; returns the paths written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "json": out / "report.json",
        "csv": out / "report.csv",
        "similarities": out / "similarities.png",
        "ranks": out / "ranks.png",
    }
    paths["json"].write_text(report.to_json(), encoding="utf-8")
    write_csv(report, paths["csv"])
    plot_similarities(report, paths["similarities"])
    plot_ranks(report, paths["ranks"])
    return list(paths.values())
