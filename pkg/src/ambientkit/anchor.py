"""Anchor keyword queries over document text."""

from __future__ import annotations

from dataclasses import dataclass

MATCH_MODES = ("substring", "word_boundary")


@dataclass(frozen=True, slots=True)
class AnchorQuery:
    """A single query keyword defining an ambient corpus.

    ``word_boundary`` is the default mode: the anchor must not be flanked by
    letters or digits, so ``solar`` does not match ``solarium``. Substring
    mode is plain case-insensitive containment.
    """

    anchor: str
    match_mode: str = "word_boundary"
    required_language: str | None = None

    def __post_init__(self):
        if not self.anchor:
            raise ValueError("anchor must be nonempty")
        if any(ch.isspace() for ch in self.anchor):
            raise ValueError("anchor must not contain whitespace")
        if self.anchor != self.anchor.lower():
            raise ValueError("anchor must be lowercase")
        if self.match_mode not in MATCH_MODES:
            raise ValueError(f"match_mode must be one of {MATCH_MODES}")


def match_keyword(text: str, query: AnchorQuery) -> bool:
    """Case-insensitive anchor containment; word-boundary mode additionally
    requires that no letter or digit flank the matched span.

    A word-boundary match always implies a substring match.
    """
    lowered = text.lower()
    anchor = query.anchor
    if query.match_mode == "substring":
        return anchor in lowered

    width = len(anchor)
    start = lowered.find(anchor)
    while start != -1:
        before_ok = start == 0 or not lowered[start - 1].isalnum()
        after = start + width
        after_ok = after >= len(lowered) or not lowered[after].isalnum()
        if before_ok and after_ok:
            return True
        start = lowered.find(anchor, start + 1)
    return False
