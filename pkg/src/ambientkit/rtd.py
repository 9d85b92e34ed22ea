"""Rank-turbulence divergence between two corpora.

Ranks are descending-count fractional ranks: types with equal counts share
the average of the integer ranks they span. Types absent from one corpus
are all assigned the single tied rank just past that corpus's last present
type, i.e. (n + 1 + n + m) / 2 for n present types and m absent ones.

The divergence sums |r1^-alpha - r2^-alpha|^(1/(alpha+1)) over the union of
types and divides by the value the same sum would take if the two corpora
shared no types at all, which pins identical corpora at 0 and fully
disjoint ones at 1.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .sentiment import FrequencyDistribution

DEFAULT_ALPHA = 0.25


@dataclass(frozen=True)
class RankedDistribution:
    """Fractional ranks for present types plus the shared absent-type rank."""

    ranks: Mapping[str, float]
    n_types: int
    absent_rank: float

    def rank_of(self, ngram_type: str) -> float:
        return self.ranks.get(ngram_type, self.absent_rank)


@dataclass(frozen=True)
class RtdConfig:
    alpha: float = DEFAULT_ALPHA

    def __post_init__(self):
        if not math.isfinite(self.alpha) or self.alpha <= 0:
            raise ValueError("alpha must be finite and > 0")


@dataclass(frozen=True)
class RtdContribution:
    ngram_type: str
    contribution: float  # signed, pre-normalization; > 0 when higher-ranked in corpus 1
    rank_1: float
    rank_2: float


@dataclass(frozen=True)
class BalanceStats:
    """Share of tokens, types, and exclusive types held by corpus 1."""

    token_share_1: float
    type_share_1: float
    exclusive_share_1: float | None  # None when neither corpus has exclusives


@dataclass(frozen=True)
class RtdReport:
    divergence: float
    contributions: tuple[RtdContribution, ...]
    normalization: float
    alpha: float
    balance: BalanceStats


def tied_ranks(
    counts: FrequencyDistribution | Mapping[str, int], exclusive_count_other: int = 0
) -> RankedDistribution:
    """Descending-count fractional ranks with ties averaged.

    ``exclusive_count_other`` is how many types exist only in the other
    corpus; they share the absent-type tied rank here.
    """
    if isinstance(counts, FrequencyDistribution):
        counts = counts.counts
    if not counts:
        raise ValueError("counts must be nonempty")
    if exclusive_count_other < 0:
        raise ValueError("exclusive_count_other must be >= 0")

    ordered = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    ranks: dict[str, float] = {}
    position = 0
    group_start = 0
    while position < len(ordered):
        count = ordered[position][1]
        group_start = position
        while position < len(ordered) and ordered[position][1] == count:
            position += 1
        # Integer ranks group_start+1 .. position, averaged.
        shared = (group_start + 1 + position) / 2
        for ngram_type, _ in ordered[group_start:position]:
            ranks[ngram_type] = shared

    n = len(ordered)
    absent_rank = (n + 1 + n + exclusive_count_other) / 2
    return RankedDistribution(ranks=ranks, n_types=n, absent_rank=absent_rank)


def _disjoint_norm(r1: RankedDistribution, r2: RankedDistribution, alpha: float) -> float:
    """The divergence sum if every type were exclusive to its own corpus."""
    exponent = 1.0 / (alpha + 1.0)
    absent_in_2 = r2.n_types + (r1.n_types + 1) / 2
    absent_in_1 = r1.n_types + (r2.n_types + 1) / 2
    inv_absent_2 = absent_in_2 ** -alpha
    inv_absent_1 = absent_in_1 ** -alpha
    side_1 = math.fsum(
        abs(rank ** -alpha - inv_absent_2) ** exponent for rank in r1.ranks.values()
    )
    side_2 = math.fsum(
        abs(inv_absent_1 - rank ** -alpha) ** exponent for rank in r2.ranks.values()
    )
    return side_1 + side_2


def rtd(
    dist1: FrequencyDistribution,
    dist2: FrequencyDistribution,
    config: RtdConfig | None = None,
) -> RtdReport:
    """Rank-turbulence divergence of two nonempty distributions."""
    config = config or RtdConfig()
    alpha = config.alpha
    exponent = 1.0 / (alpha + 1.0)

    types1 = set(dist1.counts)
    types2 = set(dist2.counts)
    exclusive_1 = len(types1 - types2)
    exclusive_2 = len(types2 - types1)
    r1 = tied_ranks(dist1, exclusive_count_other=exclusive_2)
    r2 = tied_ranks(dist2, exclusive_count_other=exclusive_1)

    contributions = []
    magnitudes = []
    for ngram_type in sorted(types1 | types2):
        rank_1 = r1.rank_of(ngram_type)
        rank_2 = r2.rank_of(ngram_type)
        magnitude = abs(rank_1 ** -alpha - rank_2 ** -alpha) ** exponent
        magnitudes.append(magnitude)
        # Smaller rank = higher-ranked; positive sign goes to corpus 1.
        if rank_1 < rank_2:
            signed = magnitude
        elif rank_2 < rank_1:
            signed = -magnitude
        else:
            signed = 0.0
        contributions.append(
            RtdContribution(
                ngram_type=ngram_type, contribution=signed, rank_1=rank_1, rank_2=rank_2
            )
        )

    normalization = _disjoint_norm(r1, r2, alpha)
    divergence = math.fsum(magnitudes) / normalization
    if 1.0 < divergence <= 1.0 + 1e-12:
        # Fully disjoint pairs can land an ulp above 1: the numerator and
        # the normalization take different float paths to the same value.
        divergence = 1.0

    total_tokens = dist1.total + dist2.total
    total_exclusives = exclusive_1 + exclusive_2
    balance = BalanceStats(
        token_share_1=dist1.total / total_tokens,
        type_share_1=len(types1) / (len(types1) + len(types2)),
        exclusive_share_1=(
            exclusive_1 / total_exclusives if total_exclusives else None
        ),
    )
    return RtdReport(
        divergence=divergence,
        contributions=tuple(contributions),
        normalization=normalization,
        alpha=alpha,
        balance=balance,
    )


def rtd_contribution_list(report: RtdReport, k: int) -> list[RtdContribution]:
    """Top-k types by |contribution|, zero contributions dropped,
    deterministic lexicographic tie-break."""
    if k < 1:
        raise ValueError("k must be >= 1")
    nonzero = [c for c in report.contributions if c.contribution != 0.0]
    nonzero.sort(key=lambda c: (-abs(c.contribution), c.ngram_type))
    return nonzero[:k]


@dataclass(frozen=True)
class HistogramCell:
    count: int
    top_type: str
    top_abs_contribution: float


def rank_rank_histogram(
    report: RtdReport, cells_per_decade: int = 1
) -> dict[tuple[int, int], HistogramCell]:
    """Log-scale rank-rank cells with the strongest contributor per cell.

    Cell coordinates are (floor(log10(r1) * c), floor(log10(r2) * c)).
    """
    if cells_per_decade < 1:
        raise ValueError("cells_per_decade must be >= 1")
    cells: dict[tuple[int, int], list] = {}
    for c in report.contributions:
        key = (
            math.floor(math.log10(c.rank_1) * cells_per_decade),
            math.floor(math.log10(c.rank_2) * cells_per_decade),
        )
        entry = cells.get(key)
        if entry is None:
            cells[key] = [1, c.ngram_type, abs(c.contribution)]
        else:
            entry[0] += 1
            strength = abs(c.contribution)
            if strength > entry[2] or (strength == entry[2] and c.ngram_type < entry[1]):
                entry[1] = c.ngram_type
                entry[2] = strength
    return {
        key: HistogramCell(count=count, top_type=top, top_abs_contribution=strength)
        for key, (count, top, strength) in cells.items()
    }


def write_rtd_report(
    report: RtdReport,
    out_dir: str | Path,
    top: int = 40,
    cells_per_decade: int = 1,
    corpus_names: tuple[str, str] = ("corpus1", "corpus2"),
) -> dict[str, Path]:
    """Write the summary JSON, contribution table, and histogram cell table."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    name_1, name_2 = corpus_names

    summary_path = out_dir / "divergence.json"
    balance = report.balance
    summary = {
        "alpha": report.alpha,
        "divergence": report.divergence,
        "normalization": report.normalization,
        "n_types": len(report.contributions),
        "balance": {
            name_1: {
                "token_share": balance.token_share_1,
                "type_share": balance.type_share_1,
                "exclusive_type_share": balance.exclusive_share_1,
            },
            name_2: {
                "token_share": 1.0 - balance.token_share_1,
                "type_share": 1.0 - balance.type_share_1,
                "exclusive_type_share": (
                    None
                    if balance.exclusive_share_1 is None
                    else 1.0 - balance.exclusive_share_1
                ),
            },
        },
    }
    summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")

    contrib_path = out_dir / "contributions.csv"
    with open(contrib_path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["rank", "type", "contribution", "side", "rank_1", "rank_2"])
        for rank, c in enumerate(rtd_contribution_list(report, top), start=1):
            side = name_1 if c.contribution > 0 else name_2
            writer.writerow(
                [rank, c.ngram_type, repr(c.contribution), side, repr(c.rank_1), repr(c.rank_2)]
            )

    hist_path = out_dir / "histogram.csv"
    cells = rank_rank_histogram(report, cells_per_decade)
    with open(hist_path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["cell_1", "cell_2", "count", "top_type"])
        for key in sorted(cells):
            cell = cells[key]
            writer.writerow([key[0], key[1], cell.count, cell.top_type])

    return {"summary": summary_path, "contributions": contrib_path, "histogram": hist_path}
