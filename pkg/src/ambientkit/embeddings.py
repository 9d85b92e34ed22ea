"""Binary embedding matrix file format.

Layout: magic ``EMB1``, little-endian u32 version (=1), u64 row count,
u32 dimension, then count*dim float32 values row-major. Document ids live
in a sibling text file with the ``.ids`` suffix, one id per line, same
order as the rows.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import LoadError

MAGIC = b"EMB1"
VERSION = 1
_HEADER = struct.Struct("<4sIQI")


def ids_path_for(matrix_path: str | Path) -> Path:
    return Path(matrix_path).with_suffix(".ids")


@dataclass(frozen=True)
class EmbeddingMatrix:
    ids: tuple[str, ...]
    vectors: np.ndarray  # float32, shape (len(ids), dim)

    def __post_init__(self):
        if self.vectors.ndim != 2:
            raise ValueError("vectors must be a 2-d matrix")
        if self.vectors.shape[0] != len(self.ids):
            raise ValueError(
                f"{len(self.ids)} ids but {self.vectors.shape[0]} vector rows"
            )
        if self.vectors.shape[1] < 1:
            raise ValueError("embedding dim must be >= 1")
        if len(set(self.ids)) != len(self.ids):
            raise ValueError("duplicate document ids")
        if self.vectors.size and not np.isfinite(self.vectors).all():
            raise ValueError("non-finite embedding values")

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])

    def row_for(self, doc_id: str) -> np.ndarray:
        try:
            index = self.ids.index(doc_id)
        except ValueError:
            raise KeyError(doc_id) from None
        return self.vectors[index]

    def index_of(self) -> dict[str, int]:
        return {doc_id: i for i, doc_id in enumerate(self.ids)}


def read_embeddings(path: str | Path) -> EmbeddingMatrix:
    """Load a matrix file plus its sibling id file."""
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < _HEADER.size:
        raise LoadError(f"{path}: file shorter than the {_HEADER.size}-byte header")
    magic, version, count, dim = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise LoadError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise LoadError(f"{path}: unsupported version {version}")
    if dim < 1:
        raise LoadError(f"{path}: dim must be >= 1, got {dim}")

    expected = count * dim * 4
    payload = raw[_HEADER.size:]
    if len(payload) != expected:
        raise LoadError(
            f"{path}: payload is {len(payload)} bytes, header implies {expected}"
        )
    vectors = np.frombuffer(payload, dtype="<f4").reshape(count, dim)
    # frombuffer yields a read-only view; keep it that way but native-order.
    vectors = np.ascontiguousarray(vectors).astype(np.float32, copy=False)
    vectors.setflags(write=False)
    if count and not np.isfinite(vectors).all():
        row, col = map(int, np.argwhere(~np.isfinite(vectors))[0])
        raise LoadError(f"{path}: non-finite value at row {row}, col {col}")

    id_file = ids_path_for(path)
    if not id_file.exists():
        raise LoadError(f"{id_file}: id sidecar missing")
    ids = tuple(id_file.read_text(encoding="utf-8").splitlines())
    if len(ids) != count:
        raise LoadError(
            f"{id_file}: {len(ids)} ids but matrix header says {count} rows"
        )
    if len(set(ids)) != len(ids):
        raise LoadError(f"{id_file}: duplicate document ids")
    return EmbeddingMatrix(ids=ids, vectors=vectors)


def write_embeddings(matrix: EmbeddingMatrix, path: str | Path) -> tuple[Path, Path]:
    """Write the matrix file and its id sidecar; returns both paths."""
    path = Path(path)
    vectors = np.ascontiguousarray(matrix.vectors, dtype="<f4")
    with open(path, "wb") as handle:
        handle.write(_HEADER.pack(MAGIC, VERSION, len(matrix.ids), matrix.dim))
        handle.write(vectors.tobytes())
    id_file = ids_path_for(path)
    with open(id_file, "w", encoding="utf-8") as handle:
        for doc_id in matrix.ids:
            handle.write(doc_id + "\n")
    return path, id_file
