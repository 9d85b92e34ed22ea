"""Per-word decomposition of an ambient sentiment difference.

For a reference and a comparison corpus, each word's contribution is

    delta_t = (score_t - phi_ref) * (p_t_comp - p_t_ref)

with probabilities taken over the scored types of each corpus (0 for a type
the corpus lacks). The contributions sum to phi_comp - phi_ref exactly, up
to floating-point residual. Words are ranked by |delta| with lexicographic
tie-breaks, so output order is deterministic.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import NoScoredTokens
from .lexicon import Lexicon
from .sentiment import FrequencyDistribution, ambient_sentiment

POLARITY_ABOVE = "above_ref_mean"
POLARITY_BELOW = "below_ref_mean"


@dataclass(frozen=True)
class ShiftContribution:
    word: str
    delta: float
    freq_change: float
    polarity: str
    rank: int
    phi_word: float
    p_ref: float
    p_comp: float


@dataclass(frozen=True)
class ShiftReport:
    phi_ref: float
    phi_comp: float
    contributions: tuple[ShiftContribution, ...]
    residual: float

    @property
    def total_shift(self) -> float:
        return self.phi_comp - self.phi_ref

    @property
    def abs_delta_total(self) -> float:
        return math.fsum(abs(c.delta) for c in self.contributions)


def shift_contributions(
    ref: FrequencyDistribution, comp: FrequencyDistribution, lexicon: Lexicon
) -> ShiftReport:
    """Decompose phi_comp - phi_ref into per-word contributions.

    Raises NoScoredTokens when either side shares nothing with the lexicon.
    """
    entries = lexicon.entries
    ref_scored = {t: c for t, c in ref.counts.items() if t in entries}
    comp_scored = {t: c for t, c in comp.counts.items() if t in entries}
    if not ref_scored:
        raise NoScoredTokens("reference corpus has no scored tokens")
    if not comp_scored:
        raise NoScoredTokens("comparison corpus has no scored tokens")

    ref_total = sum(ref_scored.values())
    comp_total = sum(comp_scored.values())
    phi_ref = ambient_sentiment(ref, lexicon, 0).phi_avg
    phi_comp = ambient_sentiment(comp, lexicon, 0).phi_avg

    rows = []
    for word in sorted(set(ref_scored) | set(comp_scored)):
        score = entries[word]
        p_ref = ref_scored.get(word, 0) / ref_total
        p_comp = comp_scored.get(word, 0) / comp_total
        delta = (score - phi_ref) * (p_comp - p_ref)
        polarity = POLARITY_ABOVE if score > phi_ref else POLARITY_BELOW
        rows.append((word, delta, p_comp - p_ref, polarity, score, p_ref, p_comp))

    rows.sort(key=lambda row: (-abs(row[1]), row[0]))
    contributions = tuple(
        ShiftContribution(
            word=word,
            delta=delta,
            freq_change=freq_change,
            polarity=polarity,
            rank=rank,
            phi_word=score,
            p_ref=p_ref,
            p_comp=p_comp,
        )
        for rank, (word, delta, freq_change, polarity, score, p_ref, p_comp) in enumerate(
            rows, start=1
        )
    )
    residual = (phi_comp - phi_ref) - math.fsum(c.delta for c in contributions)
    return ShiftReport(
        phi_ref=phi_ref, phi_comp=phi_comp, contributions=contributions, residual=residual
    )


def rank_shifts(report: ShiftReport, k: int) -> list[ShiftContribution]:
    """Top-k contributions by |delta|; k beyond the list returns everything."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return list(report.contributions[:k])


SHIFT_FIELDS = (
    "rank",
    "word",
    "delta",
    "delta_pct",
    "phi_word",
    "freq_ref",
    "freq_comp",
    "polarity",
)


def write_shift_report(
    report: ShiftReport, path: str | Path, top: int | None = None
) -> None:
    """CSV export: a header record with the corpus means, then ranked rows.

    ``delta_pct`` is the signed percentage of the total absolute
    contribution, for bar-length parity with plotting tools.
    """
    rows: Sequence[ShiftContribution] = (
        report.contributions if top is None else report.contributions[:top]
    )
    abs_total = report.abs_delta_total
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(
            ["# phi_ref", repr(report.phi_ref), "phi_comp", repr(report.phi_comp)]
        )
        writer.writerow(SHIFT_FIELDS)
        for c in rows:
            pct = 100.0 * c.delta / abs_total if abs_total > 0 else 0.0
            writer.writerow(
                [
                    c.rank,
                    c.word,
                    repr(c.delta),
                    repr(pct),
                    repr(c.phi_word),
                    repr(c.p_ref),
                    repr(c.p_comp),
                    c.polarity,
                ]
            )
