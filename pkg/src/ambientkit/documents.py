"""Corpus records and newline-delimited JSON corpus IO.

The corpus file format is one JSON object per line, UTF-8, with fields
``id`` (string), ``ts`` (integer seconds since epoch, UTC), ``text``
(string), and optional ``loc`` and ``lang`` (strings). Unknown fields are
ignored. A bad line never aborts a pipeline: readers skip it and record the
error with its line number.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from .errors import BadTimestamp, MalformedRecord, MissingField, RecordError

# Hard cap from the record contract; longer texts are rejected per record.
MAX_TEXT_BYTES = 10_000

_REQUIRED = ("id", "ts", "text")


@dataclass(frozen=True, slots=True)
class Document:
    """One social-media record.

    ``id`` is opaque and unique within a corpus, ``timestamp`` is UTC seconds
    since the epoch, ``language`` is a lowercase tag supplied upstream (we do
    no language identification ourselves).
    """

    id: str
    timestamp: int
    text: str
    location_raw: str | None = None
    language: str | None = None

    def __post_init__(self):
        if not self.id:
            raise ValueError("document id must be nonempty")
        if self.timestamp < 0:
            raise ValueError("document timestamp must be >= 0")
        if not self.text:
            raise ValueError("document text must be nonempty")


def parse_document(record_line: str, line_no: int | None = None) -> Document:
    """Parse one corpus line into a Document.

    Raises a RecordError subclass carrying ``line_no`` for anything wrong
    with this particular record.
    """
    try:
        raw = json.loads(record_line)
    except json.JSONDecodeError as exc:
        raise MalformedRecord(f"not valid JSON ({exc.msg})", line_no) from None
    if not isinstance(raw, dict):
        raise MalformedRecord("record is not a JSON object", line_no)

    for field in _REQUIRED:
        if field not in raw:
            raise MissingField(field, line_no)

    doc_id = raw["id"]
    if isinstance(doc_id, bool):
        raise MalformedRecord("id must be a string", line_no)
    if isinstance(doc_id, int):
        # Numeric platform ids are common; accept and stringify.
        doc_id = str(doc_id)
    if not isinstance(doc_id, str) or not doc_id:
        raise MalformedRecord("id must be a nonempty string", line_no)

    ts = raw["ts"]
    if isinstance(ts, bool) or not isinstance(ts, int) or ts < 0:
        raise BadTimestamp(f"ts must be a non-negative integer, got {ts!r}", line_no)

    text = raw["text"]
    if not isinstance(text, str) or not text:
        raise MalformedRecord("text must be a nonempty string", line_no)
    if len(text.encode("utf-8")) > MAX_TEXT_BYTES:
        raise MalformedRecord(f"text exceeds {MAX_TEXT_BYTES} bytes", line_no)

    loc = raw.get("loc")
    if loc is not None and not isinstance(loc, str):
        raise MalformedRecord("loc must be a string when present", line_no)
    lang = raw.get("lang")
    if lang is not None:
        if not isinstance(lang, str) or not lang:
            raise MalformedRecord("lang must be a nonempty string when present", line_no)
        lang = lang.lower()

    return Document(id=doc_id, timestamp=ts, text=text, location_raw=loc or None, language=lang)


def serialize_document(doc: Document) -> str:
    """Render a Document as one corpus-format JSON line (no trailing newline)."""
    record: dict = {"id": doc.id, "ts": doc.timestamp, "text": doc.text}
    if doc.location_raw is not None:
        record["loc"] = doc.location_raw
    if doc.language is not None:
        record["lang"] = doc.language
    return json.dumps(record, ensure_ascii=False, separators=(",", ":"))


def iter_corpus_lines(
    lines: Iterable[str],
    errors: list[RecordError] | None = None,
) -> Iterator[Document]:
    """Yield Documents from corpus lines, skipping and collecting bad records.

    Blank lines are ignored. When ``errors`` is given, each skipped record's
    error is appended to it; otherwise errors are silently counted away by
    the caller's absence of interest.
    """
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            yield parse_document(line, line_no)
        except RecordError as exc:
            if errors is not None:
                errors.append(exc)


def read_corpus(
    path: str | Path,
    errors: list[RecordError] | None = None,
) -> list[Document]:
    """Read a whole corpus file, skip-and-collect on bad records."""
    with open(path, "r", encoding="utf-8") as handle:
        return list(iter_corpus_lines(handle, errors))


def write_corpus(docs: Iterable[Document], path: str | Path) -> int:
    """Write documents as a corpus file; returns the number written."""
    count = 0
    with open(path, "w", encoding="utf-8") as handle:
        for doc in docs:
            handle.write(serialize_document(doc))
            handle.write("\n")
            count += 1
    return count
