"""Streaming corpus ingest: parse, filter, bin, and write the kept subset.

One pass over the input file; documents are written as they survive so
memory stays flat regardless of corpus size (only the id-dedup set grows).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .anchor import AnchorQuery, match_keyword
from .documents import parse_document, serialize_document
from .errors import RecordError
from .gazetteer import parse_location
from .timebins import TimeBin

CORPUS_FILENAME = "corpus.ndjson"
MANIFEST_FILENAME = "manifest.json"


@dataclass
class IngestStats:
    read: int = 0
    parse_errors: int = 0
    duplicate_ids: int = 0
    language_filtered: int = 0
    keyword_unmatched: int = 0
    location_unmatched: int = 0
    before_epoch: int = 0
    kept: int = 0
    bin_documents: dict[int, int] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "read": self.read,
            "parse_errors": self.parse_errors,
            "duplicate_ids": self.duplicate_ids,
            "language_filtered": self.language_filtered,
            "keyword_unmatched": self.keyword_unmatched,
            "location_unmatched": self.location_unmatched,
            "before_epoch": self.before_epoch,
            "kept": self.kept,
        }


def run_ingest(
    corpus_path: str | Path,
    query: AnchorQuery,
    out_dir: str | Path,
    gazetteer: frozenset | None = None,
    binning: TimeBin | None = None,
) -> IngestStats:
    """Filter a corpus file into ``out_dir`` and write its manifest.

    Filters apply in order: parse, duplicate id, language, keyword,
    location (only when a gazetteer is supplied), epoch cutoff (only when
    binning is supplied). Bad records are skipped and counted, never fatal.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stats = IngestStats()
    seen_ids: set[str] = set()

    out_path = out_dir / CORPUS_FILENAME
    with open(corpus_path, encoding="utf-8") as source, open(
        out_path, "w", encoding="utf-8"
    ) as sink:
        for line_no, line in enumerate(source, start=1):
            if not line.strip():
                continue
            stats.read += 1
            try:
                doc = parse_document(line, line_no=line_no)
            except RecordError:
                stats.parse_errors += 1
                continue
            if doc.id in seen_ids:
                stats.duplicate_ids += 1
                continue
            if query.required_language is not None and doc.language != query.required_language:
                stats.language_filtered += 1
                continue
            if not match_keyword(doc.text, query):
                stats.keyword_unmatched += 1
                continue
            if gazetteer is not None:
                if doc.location_raw is None or parse_location(doc.location_raw, gazetteer) is None:
                    stats.location_unmatched += 1
                    continue
            if binning is not None:
                if doc.timestamp < binning.epoch_start:
                    stats.before_epoch += 1
                    continue
                index = (doc.timestamp - binning.epoch_start) // binning.width
                stats.bin_documents[index] = stats.bin_documents.get(index, 0) + 1
            seen_ids.add(doc.id)
            stats.kept += 1
            sink.write(serialize_document(doc) + "\n")

    _write_manifest(out_dir, query, gazetteer is not None, binning, stats)
    return stats


def _write_manifest(
    out_dir: Path,
    query: AnchorQuery,
    location_filtered: bool,
    binning: TimeBin | None,
    stats: IngestStats,
):
    manifest = {
        "anchor": query.anchor,
        "match_mode": query.match_mode,
        "required_language": query.required_language,
        "location_filtered": location_filtered,
        "binning": None
        if binning is None
        else {
            "epoch_start": binning.epoch_start,
            "epoch_iso": binning.start_iso(0),
            "width_seconds": binning.width,
        },
        "counts": stats.as_dict(),
        "bins": {
            str(index): {
                "start_iso": binning.start_iso(index),
                "n_documents": stats.bin_documents[index],
            }
            for index in sorted(stats.bin_documents)
        }
        if binning is not None
        else {},
        "corpus_file": CORPUS_FILENAME,
    }
    path = out_dir / MANIFEST_FILENAME
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def read_manifest(corpus_dir: str | Path) -> dict:
    return json.loads((Path(corpus_dir) / MANIFEST_FILENAME).read_text())


def binning_from_manifest(manifest: dict) -> TimeBin | None:
    spec = manifest.get("binning")
    if spec is None:
        return None
    return TimeBin(epoch_start=spec["epoch_start"], width=spec["width_seconds"])
