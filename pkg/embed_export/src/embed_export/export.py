"""Corpus to embedding-file export.

Reads a newline-delimited JSON corpus, encodes document text in batches,
and writes the measurement toolkit's binary matrix format: magic ``EMB1``,
little-endian u32 version (=1), u64 row count, u32 dim, then count*dim
float32 values row-major, ids in a ``.ids`` sidecar one per line in row
order. The bytes are produced here, not by the toolkit's writer, so the
reader on the other side is checking an independent implementation.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from ambientkit.documents import Document, read_corpus

from .encoders import DEFAULT_MODEL, Encoder, resolve_encoder
from .errors import JobError

_HEADER = struct.Struct("<4sIQI")
_MAGIC = b"EMB1"
_VERSION = 1


@dataclass(frozen=True)
class EmbedJob:
    corpus: Path
    out_prefix: Path
    model: str = DEFAULT_MODEL
    batch_size: int = 64


@dataclass(frozen=True)
class ExportResult:
    matrix_path: Path
    ids_path: Path
    count: int
    dim: int
    model: str
    skipped: int


def _output_paths(prefix: Path) -> tuple[Path, Path]:
    # Accept either a bare prefix or an already-suffixed matrix path.
    if prefix.suffix == ".emb":
        prefix = prefix.with_suffix("")
    return prefix.with_suffix(".emb"), prefix.with_suffix(".ids")


def _locate_failure(encoder: Encoder, batch: list[Document], start: int) -> int:
    # Batch failed; retry one at a time to name the offending document.
    for offset, doc in enumerate(batch):
        try:
            encoder.encode([doc.text])
        except Exception:
            return start + offset
    return start


def _encode_batch(encoder: Encoder, batch: list[Document], start: int) -> np.ndarray:
    try:
        encoded = np.asarray(encoder.encode([d.text for d in batch]), dtype=np.float32)
    except Exception as exc:
        index = _locate_failure(encoder, batch, start)
        raise JobError(
            f"encoding failed at document {index} (id {batch[index - start].id!r}): {exc}"
        ) from exc
    if encoded.shape != (len(batch), encoder.dim):
        raise JobError(
            f"encoder returned shape {encoded.shape} for documents "
            f"{start}..{start + len(batch) - 1}, want ({len(batch)}, {encoder.dim})"
        )
    if not np.isfinite(encoded).all():
        bad = int(np.argwhere(~np.isfinite(encoded).all(axis=1))[0][0])
        raise JobError(
            f"non-finite embedding at document {start + bad} (id {batch[bad].id!r})"
        )
    return encoded


def export_embeddings(job: EmbedJob, encoder: Encoder | None = None) -> ExportResult:
    """Encode every document and write the matrix plus id sidecar.

    Row order equals corpus order. Malformed corpus lines are skipped and
    counted, matching the corpus reader's contract everywhere else.
    """
    if job.batch_size < 1:
        raise JobError(f"batch size must be >= 1, got {job.batch_size}")
    if encoder is None:
        encoder = resolve_encoder(job.model)
    if encoder.dim < 1:
        raise JobError(f"encoder dim must be >= 1, got {encoder.dim}")

    errors: list = []
    try:
        docs = read_corpus(job.corpus, errors)
    except OSError as exc:
        raise JobError(f"cannot read corpus: {exc}") from exc

    seen: dict[str, int] = {}
    for i, doc in enumerate(docs):
        if doc.id in seen:
            raise JobError(
                f"duplicate id {doc.id!r} at documents {seen[doc.id]} and {i}"
            )
        seen[doc.id] = i

    vectors = np.empty((len(docs), encoder.dim), dtype=np.float32)
    for start in range(0, len(docs), job.batch_size):
        batch = docs[start:start + job.batch_size]
        vectors[start:start + len(batch)] = _encode_batch(encoder, batch, start)

    matrix_path, ids_path = _output_paths(Path(job.out_prefix))
    matrix_path.parent.mkdir(parents=True, exist_ok=True)
    with open(matrix_path, "wb") as handle:
        handle.write(_HEADER.pack(_MAGIC, _VERSION, len(docs), encoder.dim))
        handle.write(np.ascontiguousarray(vectors, dtype="<f4").tobytes())
    with open(ids_path, "w", encoding="utf-8") as handle:
        for doc in docs:
            handle.write(doc.id + "\n")

    return ExportResult(
        matrix_path=matrix_path,
        ids_path=ids_path,
        count=len(docs),
        dim=encoder.dim,
        model=encoder.name,
        skipped=len(errors),
    )
