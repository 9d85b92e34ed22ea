"""Tokenization into 1-gram and 2-gram bags.

Convention: lowercase, split on Unicode whitespace, strip leading/trailing
punctuation from each piece. ``#`` and ``@`` are never stripped (hashtags and
handles carry meaning on the platform) and apostrophes inside a word survive
untouched. Anything that looks like a URL collapses to the single token
"⟨url⟩". 2-grams join adjacent surviving 1-grams with a single space.
"""

from __future__ import annotations

import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

URL_TOKEN = "⟨url⟩"

_URL_RE = re.compile(r"^https?://", re.IGNORECASE)

# ASCII punctuation strippable from token edges; # and @ are deliberately absent.
_ASCII_STRIP = "".join(
    ch
    for ch in map(chr, range(128))
    if unicodedata.category(ch).startswith("P") and ch not in "#@"
)

# Lazily filled cache of "is this char strippable punctuation", for the
# non-ASCII slow path only.
_STRIP_CACHE: dict[str, bool] = {}


def _strippable(ch: str) -> bool:
    verdict = _STRIP_CACHE.get(ch)
    if verdict is None:
        verdict = ch not in "#@" and unicodedata.category(ch).startswith("P")
        _STRIP_CACHE[ch] = verdict
    return verdict


def _trim(token: str) -> str:
    # Fast path: C-level strip covers pure-ASCII edges, which is nearly every
    # token. Non-ASCII edges fall through to the category-checking loop, and
    # we iterate to a fixpoint because stripping a Unicode mark can expose
    # ASCII punctuation underneath (and vice versa).
    trimmed = token.strip(_ASCII_STRIP)
    while trimmed and (ord(trimmed[0]) > 127 or ord(trimmed[-1]) > 127):
        start, end = 0, len(trimmed)
        while start < end and _strippable(trimmed[start]):
            start += 1
        while end > start and _strippable(trimmed[end - 1]):
            end -= 1
        candidate = trimmed[start:end].strip(_ASCII_STRIP)
        if candidate == trimmed:
            break
        trimmed = candidate
    return trimmed


@dataclass(frozen=True)
class NgramBag:
    """Counts of 1-gram or 2-gram types over one corpus slice."""

    n: int
    counts: Mapping[str, int] = field(default_factory=Counter)

    def __post_init__(self):
        if self.n not in (1, 2):
            raise ValueError(f"n must be 1 or 2, got {self.n}")
        for ngram_type, count in self.counts.items():
            if count < 1:
                raise ValueError(f"count for {ngram_type!r} must be >= 1")
            if ngram_type != ngram_type.lower():
                raise ValueError(f"type {ngram_type!r} must be lowercase")
            if self.n == 1:
                if not ngram_type or ngram_type.split() != [ngram_type]:
                    raise ValueError(f"1-gram {ngram_type!r} must be whitespace-free")
            else:
                halves = ngram_type.split(" ")
                if len(halves) != 2 or not all(halves):
                    raise ValueError(
                        f"2-gram {ngram_type!r} must be two space-joined tokens"
                    )

    def merge(self, other: "NgramBag") -> "NgramBag":
        """Add counts from another bag of the same order. Order-independent."""
        if other.n != self.n:
            raise ValueError(f"cannot merge {other.n}-gram bag into {self.n}-gram bag")
        merged = Counter(self.counts)
        merged.update(other.counts)
        return NgramBag(self.n, merged)


def token_stream(text: str) -> list[str]:
    """Ordered surviving 1-gram tokens of a text."""
    tokens = []
    for piece in text.lower().split():
        if piece == URL_TOKEN:
            tokens.append(URL_TOKEN)
            continue
        trimmed = _trim(piece)
        if not trimmed:
            continue
        if _URL_RE.match(trimmed):
            tokens.append(URL_TOKEN)
        else:
            tokens.append(trimmed)
    return tokens


def tokenize(text: str, n: int = 1) -> NgramBag:
    """Tokenize a text into an n-gram bag. Empty text gives an empty bag."""
    if n not in (1, 2):
        raise ValueError(f"n must be 1 or 2, got {n}")
    tokens = token_stream(text)
    if n == 1:
        return NgramBag(1, Counter(tokens))
    pairs = [f"{a} {b}" for a, b in zip(tokens, tokens[1:])]
    return NgramBag(2, Counter(pairs))


def count_tokens(texts: Iterable[str], n: int = 1) -> Counter:
    """Aggregate n-gram counts over many texts (no cross-text 2-grams)."""
    if n not in (1, 2):
        raise ValueError(f"n must be 1 or 2, got {n}")
    totals: Counter = Counter()
    for text in texts:
        tokens = token_stream(text)
        if n == 1:
            totals.update(tokens)
        else:
            totals.update(f"{a} {b}" for a, b in zip(tokens, tokens[1:]))
    return totals


def merge_bags(bags: Sequence[NgramBag]) -> NgramBag:
    """Merge per-shard bags by count addition; result is order-independent."""
    if not bags:
        raise ValueError("need at least one bag to merge")
    order = bags[0].n
    merged: Counter = Counter()
    for bag in bags:
        if bag.n != order:
            raise ValueError("all bags must share the same n")
        merged.update(bag.counts)
    return NgramBag(order, merged)
