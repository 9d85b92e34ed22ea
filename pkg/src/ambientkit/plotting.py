"""Optional vector-graphics output for series and shift results.

matplotlib is an extra dependency; everything here imports it lazily so
the measurement CLI works without it installed.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

from .sentiment import SentimentSeries
from .timebins import TimeBin
from .wordshift import POLARITY_ABOVE, ShiftReport, rank_shifts


def _pyplot():
    try:
        import matplotlib
    except ImportError as exc:
        raise RuntimeError(
            "plotting needs matplotlib; install the [plot] extra"
        ) from exc
    matplotlib.use("Agg")
    from matplotlib import pyplot

    return pyplot


_SERIES_COLORS = {
    "R": "#1b9e77",
    "NR": "#d95f02",
    "COMBINED": "#4d4d4d",
    "BACKGROUND": "#bbbbbb",
}


def plot_series(
    series_list: Iterable[SentimentSeries], binning: TimeBin, out_path: str | Path
):
    """Three stacked panels: scored-token volume, mean score, spread."""
    pyplot = _pyplot()
    figure, (ax_tokens, ax_phi, ax_sigma) = pyplot.subplots(
        3, 1, sharex=True, figsize=(9, 7), height_ratios=[1, 2, 1]
    )
    for series in series_list:
        if not series.bins:
            continue
        name = series.partition.value
        color = _SERIES_COLORS.get(name, "#333333")
        xs = [index for index, _ in series.bins]
        phi = [s.phi_avg for _, s in series.bins]
        err = [s.stderr for _, s in series.bins]
        ax_tokens.plot(
            xs, [s.n_scored_tokens for _, s in series.bins], color=color, label=name
        )
        ax_phi.plot(xs, phi, color=color, label=name)
        ax_phi.fill_between(
            xs,
            [p - e for p, e in zip(phi, err)],
            [p + e for p, e in zip(phi, err)],
            color=color,
            alpha=0.2,
            linewidth=0,
        )
        ax_sigma.plot(xs, [s.sigma for _, s in series.bins], color=color, label=name)

    ax_tokens.set_ylabel("scored tokens")
    ax_phi.set_ylabel("mean score")
    ax_sigma.set_ylabel("std dev")
    ax_sigma.set_xlabel(f"bin index (width {binning.width} s from {binning.start_iso(0)})")
    ax_phi.legend(loc="best", fontsize="small")
    figure.tight_layout()
    figure.savefig(out_path)
    pyplot.close(figure)


def plot_shift(report: ShiftReport, out_path: str | Path, top: int = 20):
    """Horizontal bars of the top word contributions, signed, largest on top."""
    pyplot = _pyplot()
    ranked = rank_shifts(report, top)
    words = [c.word for c in ranked][::-1]
    deltas = [c.delta for c in ranked][::-1]
    colors = [
        "#1b9e77" if c.polarity == POLARITY_ABOVE else "#d95f02" for c in ranked
    ][::-1]
    figure, ax = pyplot.subplots(figsize=(7, max(3, 0.35 * len(words) + 1)))
    ax.barh(range(len(words)), deltas, color=colors)
    ax.set_yticks(range(len(words)))
    ax.set_yticklabels(words)
    ax.axvline(0.0, color="#000000", linewidth=0.8)
    ax.set_xlabel("per-word contribution to the mean-score difference")
    ax.set_title(
        f"total shift {report.total_shift:+.4f} "
        f"(ref {report.phi_ref:.4f} to comp {report.phi_comp:.4f})"
    )
    figure.tight_layout()
    figure.savefig(out_path)
    pyplot.close(figure)
