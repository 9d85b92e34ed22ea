"""Sentiment lexicon loading and the neutral-score exclusion lens.

Lexicon file format: UTF-8 delimiter-separated (comma or tab, sniffed from
the header), header row required, columns ``word`` and ``score``. Extra
columns are ignored. Duplicate words keep the last row and bump a warning
counter on the loaded lexicon.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from .errors import LensTooWide, LoadError


@dataclass(frozen=True)
class Lexicon:
    """Word -> sentiment score table, scores expected on the 1-9 scale."""

    entries: Mapping[str, float]
    name: str = ""
    lens: tuple[float, float] | None = None
    duplicates: int = 0

    def __post_init__(self):
        if not self.entries:
            raise ValueError("lexicon must be nonempty")
        for word, score in self.entries.items():
            if not math.isfinite(score):
                raise ValueError(f"score for {word!r} is not finite")
        if self.lens is not None and self.lens[0] > self.lens[1]:
            raise ValueError("lens lower bound exceeds upper bound")

    def score(self, word: str) -> float | None:
        return self.entries.get(word)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, word: str) -> bool:
        return word in self.entries


def load_lexicon(path: str | Path, name: str | None = None) -> Lexicon:
    """Load a lexicon file; non-numeric scores raise LoadError with the row."""
    path = Path(path)
    try:
        handle = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise LoadError(f"cannot read lexicon {path}: {exc}") from None
    with handle:
        header_line = handle.readline()
        if not header_line.strip():
            raise LoadError("lexicon file is empty or missing its header row")
        delimiter = "\t" if "\t" in header_line else ","
        header = [col.strip().lower() for col in header_line.rstrip("\n").split(delimiter)]
        try:
            word_col = header.index("word")
            score_col = header.index("score")
        except ValueError:
            raise LoadError(f"header must name 'word' and 'score' columns, got {header}") from None

        entries: dict[str, float] = {}
        duplicates = 0
        reader = csv.reader(handle, delimiter=delimiter)
        # Data rows are numbered from 1, header excluded.
        for row_no, row in enumerate(reader, start=1):
            if not row or not "".join(row).strip():
                continue
            if len(row) <= max(word_col, score_col):
                raise LoadError(f"expected {len(header)} columns", row=row_no)
            word = row[word_col].strip()
            if not word:
                raise LoadError("empty word", row=row_no)
            try:
                score = float(row[score_col])
            except ValueError:
                raise LoadError(f"non-numeric score {row[score_col]!r}", row=row_no) from None
            if not math.isfinite(score):
                raise LoadError(f"score {score!r} is not finite", row=row_no)
            if word in entries:
                duplicates += 1
            entries[word] = score

    if not entries:
        raise LoadError("lexicon has a header but no entries")
    return Lexicon(
        entries=MappingProxyType(entries),
        name=name if name is not None else path.stem,
        duplicates=duplicates,
    )


def apply_lens(lexicon: Lexicon, lo: float, hi: float) -> Lexicon:
    """Drop entries with lo <= score <= hi (the near-neutral band).

    Raises LensTooWide when nothing survives.
    """
    if lo > hi:
        raise ValueError("lens requires lo <= hi")
    kept = {word: s for word, s in lexicon.entries.items() if not (lo <= s <= hi)}
    if not kept:
        raise LensTooWide(f"lens [{lo}, {hi}] removes every lexicon entry")
    return Lexicon(
        entries=MappingProxyType(kept),
        name=lexicon.name,
        lens=(lo, hi),
        duplicates=lexicon.duplicates,
    )
