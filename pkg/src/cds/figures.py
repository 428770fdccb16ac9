"""Matplotlib figure output for the report path.

Renders the per-perspective score summary (the bar view that replaced the
retired radial summary) and the diff deltas to image files next to a report.
"""
from __future__ import annotations

from pathlib import Path
from typing import Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .catalog import PERSPECTIVE_ORDER, PERSPECTIVE_SIZE, HeuristicCatalog
from .critique import CritiqueDiff, CritiqueSheet, compute_score
from .report import _check_inputs

_POS = "#2a7f3f"
_NEG = "#b03a2e"


def _bar_colors(values) -> list[str]:
    return [_POS if v >= 0 else _NEG for v in values]


def perspective_bar_chart(
    sheet: CritiqueSheet, catalog: HeuristicCatalog, path: Union[str, Path]
) -> Path:
    """Write a per-perspective subtotal bar chart; returns the file path."""
    _check_inputs(sheet, catalog)
    summary = compute_score(sheet, catalog)
    labels = [catalog.perspective(pid).display_name for pid in PERSPECTIVE_ORDER]
    values = [summary.perspective_subtotals[pid] for pid in PERSPECTIVE_ORDER]
    limit = 2 * PERSPECTIVE_SIZE

    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(labels, values, color=_bar_colors(values))
    ax.axhline(0, color="#444", linewidth=0.8)
    ax.set_ylim(-limit, limit)
    ax.set_ylabel("Subtotal")
    ax.set_title(
        f"{sheet.overview.design_name}: total {summary.total} / {2 * len(sheet.responses)}"
    )
    ax.tick_params(axis="x", rotation=20)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def diff_bar_chart(
    diff: CritiqueDiff, catalog: HeuristicCatalog, path: Union[str, Path]
) -> Path:
    """Write a per-perspective delta bar chart for a critique diff."""
    labels = [catalog.perspective(pid).display_name for pid in PERSPECTIVE_ORDER]
    values = [diff.per_perspective_delta[pid] for pid in PERSPECTIVE_ORDER]

    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(labels, values, color=_bar_colors(values))
    ax.axhline(0, color="#444", linewidth=0.8)
    ax.set_ylabel("Delta (later - earlier)")
    ax.set_title(f"Change by perspective: total {diff.total_delta:+d}")
    ax.tick_params(axis="x", rotation=20)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out
