"""Append-only relevance label store.

Each line is ``id,label,source,score,at`` (CSV-quoted, score may be empty).
The file is a log: replay is last-writer-wins per id, except that a model
record never displaces a human one. Appends are one ``os.write`` plus an
``fsync`` so a killed process leaves either the whole line or nothing.
"""

from __future__ import annotations

import csv
import io
import os
import threading
from dataclasses import dataclass
from pathlib import Path

from .errors import LoadError, StoreLockedError

LABEL_RELEVANT = "R"
LABEL_NOT_RELEVANT = "NR"
LABELS = (LABEL_RELEVANT, LABEL_NOT_RELEVANT)
SOURCE_HUMAN = "human"
SOURCE_MODEL = "model"
SOURCES = (SOURCE_HUMAN, SOURCE_MODEL)

# Deterministic stamp for machine-written label files; wall-clock stamps
# would make reruns differ byte for byte.
EPOCH_ISO = "1970-01-01T00:00:00Z"


@dataclass(frozen=True, slots=True)
class LabelRecord:
    doc_id: str
    label: str
    source: str
    score: float | None = None
    at: str = EPOCH_ISO

    def __post_init__(self):
        if not self.doc_id:
            raise ValueError("doc_id must be nonempty")
        if self.label not in LABELS:
            raise ValueError(f"label must be one of {LABELS}, got {self.label!r}")
        if self.source not in SOURCES:
            raise ValueError(f"source must be one of {SOURCES}, got {self.source!r}")
        if self.score is not None and not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score must be in [0, 1], got {self.score!r}")


def _format_line(record: LabelRecord) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    score = "" if record.score is None else repr(record.score)
    writer.writerow([record.doc_id, record.label, record.source, score, record.at])
    return buffer.getvalue()


def _parse_line(line: str, row: int) -> LabelRecord:
    fields = next(csv.reader([line]))
    if len(fields) != 5:
        raise LoadError(f"expected 5 fields, got {len(fields)}", row=row)
    doc_id, label, source, score_text, at = fields
    try:
        score = float(score_text) if score_text else None
        return LabelRecord(doc_id=doc_id, label=label, source=source, score=score, at=at)
    except ValueError as exc:
        raise LoadError(str(exc), row=row) from None


def _replay(entries: dict[str, LabelRecord], record: LabelRecord) -> bool:
    """Apply one log record; False when precedence keeps the old entry."""
    existing = entries.get(record.doc_id)
    if (
        existing is not None
        and existing.source == SOURCE_HUMAN
        and record.source == SOURCE_MODEL
    ):
        return False
    entries[record.doc_id] = record
    return True


def read_labels(path: str | Path) -> dict[str, LabelRecord]:
    """Replay a label log into its effective id → record map."""
    entries: dict[str, LabelRecord] = {}
    with open(path, encoding="utf-8") as handle:
        for row, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            _replay(entries, _parse_line(line, row))
    return entries


def write_labels(records, path: str | Path):
    """Write records as a fresh label file, sorted by id for stable output."""
    ordered = sorted(records, key=lambda r: r.doc_id)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        for record in ordered:
            handle.write(_format_line(record))


class LabelStore:
    """Durable append-only store, safe for concurrent appenders in-process."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._entries: dict[str, LabelRecord] = {}
        self._mutex = threading.Lock()
        if self.path.exists():
            self._entries = read_labels(self.path)
        self._fd = os.open(self.path, os.O_WRONLY | os.O_CREAT | os.O_APPEND, 0o644)

    def close(self):
        if self._fd is not None:
            os.close(self._fd)
            self._fd = None

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.close()

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._entries

    def get(self, doc_id: str) -> LabelRecord | None:
        return self._entries.get(doc_id)

    def entries(self) -> dict[str, LabelRecord]:
        with self._mutex:
            return dict(self._entries)

    def apply(self, record: LabelRecord) -> bool:
        """Append a record; returns whether the effective entry changed.

        No line is written when the record would not change anything: a
        model record losing to a human one, or an exact (id, label, source)
        repeat. Both count as acknowledged success for callers.
        """
        with self._mutex:
            existing = self._entries.get(record.doc_id)
            if (
                existing is not None
                and existing.source == SOURCE_HUMAN
                and record.source == SOURCE_MODEL
            ):
                return False
            if (
                existing is not None
                and existing.label == record.label
                and existing.source == record.source
            ):
                return False
            data = _format_line(record).encode("utf-8")
            written = os.write(self._fd, data)
            if written != len(data):
                raise OSError(f"short write to {self.path}: {written}/{len(data)}")
            os.fsync(self._fd)
            self._entries[record.doc_id] = record
            return True


class StoreLock:
    """Advisory lock file guarding a label store across processes.

    Holds ``<store>.lock`` containing the owner pid. A lock whose owner is
    gone is treated as stale and broken.
    """

    def __init__(self, store_path: str | Path):
        self.lock_path = Path(str(store_path) + ".lock")
        self._held = False

    @staticmethod
    def _alive(pid: int) -> bool:
        if pid <= 0:
            return False
        try:
            os.kill(pid, 0)
        except ProcessLookupError:
            return False
        except PermissionError:
            return True
        return True

    def holder(self) -> int | None:
        """Pid of a live holder, or None when free/stale."""
        try:
            text = self.lock_path.read_text().strip()
        except FileNotFoundError:
            return None
        try:
            pid = int(text)
        except ValueError:
            return None
        return pid if self._alive(pid) else None

    def acquire(self):
        for _ in range(2):
            try:
                fd = os.open(self.lock_path, os.O_WRONLY | os.O_CREAT | os.O_EXCL, 0o644)
            except FileExistsError:
                if self.holder() is None:
                    # Stale or garbage lock; remove and retry once.
                    self.lock_path.unlink(missing_ok=True)
                    continue
                raise StoreLockedError(
                    f"{self.lock_path} held by pid {self.holder()}"
                ) from None
            os.write(fd, str(os.getpid()).encode("ascii"))
            os.close(fd)
            self._held = True
            return self
        raise StoreLockedError(f"could not acquire {self.lock_path}")

    def release(self):
        if self._held:
            self.lock_path.unlink(missing_ok=True)
            self._held = False

    def __enter__(self):
        return self.acquire()

    def __exit__(self, *exc_info):
        self.release()
