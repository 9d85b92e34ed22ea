"""Ambient sentiment: frequency-weighted lexicon averages per time bin.

The ambient sentiment of a corpus slice is the weighted average of lexicon
scores, with frequencies renormalized over the lexicon-covered types:

    phi_avg = sum_t score_t * p_t

Dispersion sigma is the population standard deviation of the same weighted
score distribution, and the standard error divides sigma by sqrt(N) with N
conservatively the number of documents, not tokens.
"""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping

from .documents import Document
from .errors import MissingLabel, NoScoredTokens
from .lexicon import Lexicon
from .ngrams import NgramBag, token_stream
from .timebins import TimeBin, assign_bin


@dataclass(frozen=True)
class FrequencyDistribution:
    """Type -> count map over a corpus slice; basis for all measurements."""

    counts: Mapping[str, int]
    total: int

    def __post_init__(self):
        if self.total != sum(self.counts.values()):
            raise ValueError("total must equal the sum of counts")
        for t, c in self.counts.items():
            if c < 1:
                raise ValueError(f"count for {t!r} must be >= 1")

    @classmethod
    def from_counts(cls, counts: Mapping[str, int]) -> "FrequencyDistribution":
        return cls(counts=dict(counts), total=sum(counts.values()))

    @classmethod
    def from_bag(cls, bag: NgramBag) -> "FrequencyDistribution":
        return cls.from_counts(bag.counts)

    def p(self, ngram_type: str) -> float:
        """Normalized frequency of one type over the full distribution."""
        return self.counts.get(ngram_type, 0) / self.total


class Partition(str, Enum):
    R = "R"
    NR = "NR"
    COMBINED = "COMBINED"
    BACKGROUND = "BACKGROUND"


@dataclass(frozen=True)
class SentimentSummary:
    phi_avg: float
    sigma: float
    stderr: float
    n_scored_tokens: int
    n_documents: int


@dataclass(frozen=True)
class SentimentSeries:
    """Per-bin summaries for one partition; gap bins are listed, not zero-filled."""

    bins: tuple[tuple[int, SentimentSummary], ...]
    partition: Partition
    gaps: tuple[int, ...] = ()


def ambient_sentiment(
    dist: FrequencyDistribution, lexicon: Lexicon, n_documents: int
) -> SentimentSummary:
    """Frequency-weighted average score over the lexicon-covered part of ``dist``.

    Frequencies are renormalized over scored types only. Raises
    NoScoredTokens when the distribution shares nothing with the lexicon,
    which callers report as a gap.
    """
    if n_documents < 0:
        raise ValueError("n_documents must be >= 0")
    entries = lexicon.entries
    scored = [(entries[t], c) for t, c in dist.counts.items() if t in entries]
    if not scored:
        raise NoScoredTokens("distribution shares no types with the lexicon")
    total = sum(c for _, c in scored)
    phi_avg = math.fsum(s * c for s, c in scored) / total
    variance = math.fsum(c * (s - phi_avg) ** 2 for s, c in scored) / total
    sigma = math.sqrt(max(variance, 0.0))
    stderr = sigma / math.sqrt(n_documents) if n_documents > 0 else 0.0
    return SentimentSummary(
        phi_avg=phi_avg,
        sigma=sigma,
        stderr=stderr,
        n_scored_tokens=total,
        n_documents=n_documents,
    )


def _partition_keep(partition: Partition, labels: Mapping[str, str] | None, doc_id: str) -> bool:
    if partition in (Partition.COMBINED, Partition.BACKGROUND):
        return True
    if labels is None or doc_id not in labels:
        raise MissingLabel(f"document {doc_id!r} has no label for partition {partition.value}")
    return labels[doc_id] == partition.value


def build_series(
    documents: Iterable[Document],
    binning: TimeBin,
    lexicon: Lexicon,
    partition: Partition,
    labels: Mapping[str, str] | None = None,
) -> SentimentSeries:
    """Assemble per-bin distributions for one partition and score them.

    ``labels`` maps document id to "R"/"NR" and must cover every document
    when the partition is R or NR; COMBINED and BACKGROUND ignore it. The
    bin universe spans every input document, so a bin where this partition
    has no documents, or no scored tokens, is an explicit gap.
    """
    all_bins: set[int] = set()
    per_bin_counts: dict[int, Counter] = {}
    per_bin_docs: dict[int, int] = {}
    for doc in documents:
        index = assign_bin(doc.timestamp, binning)
        all_bins.add(index)
        if not _partition_keep(partition, labels, doc.id):
            continue
        bucket = per_bin_counts.get(index)
        if bucket is None:
            bucket = per_bin_counts[index] = Counter()
            per_bin_docs[index] = 0
        bucket.update(token_stream(doc.text))
        per_bin_docs[index] += 1

    bins: list[tuple[int, SentimentSummary]] = []
    gaps: list[int] = []
    for index in sorted(all_bins):
        counts = per_bin_counts.get(index)
        if not counts:
            gaps.append(index)
            continue
        dist = FrequencyDistribution.from_counts(counts)
        try:
            summary = ambient_sentiment(dist, lexicon, per_bin_docs[index])
        except NoScoredTokens:
            gaps.append(index)
            continue
        bins.append((index, summary))
    return SentimentSeries(bins=tuple(bins), partition=partition, gaps=tuple(gaps))


SERIES_FIELDS = (
    "partition",
    "bin_index",
    "bin_start_iso",
    "phi_avg",
    "sigma",
    "stderr",
    "n_tokens",
    "n_documents",
)


def write_series(
    series_list: Iterable[SentimentSeries],
    binning: TimeBin,
    path: str | Path,
) -> None:
    """Write one CSV record per (partition, bin). Deterministic byte-for-byte."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(SERIES_FIELDS)
        for series in series_list:
            for index, s in series.bins:
                writer.writerow(
                    [
                        series.partition.value,
                        index,
                        binning.start_iso(index),
                        repr(s.phi_avg),
                        repr(s.sigma),
                        repr(s.stderr),
                        s.n_scored_tokens,
                        s.n_documents,
                    ]
                )
