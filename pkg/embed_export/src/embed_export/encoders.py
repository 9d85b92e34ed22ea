"""Text encoders behind one small interface.

The exporter needs ``name``, ``dim``, and a batched ``encode`` returning a
float-convertible (n, dim) array. The default is a pretrained
sentence-embedding model, imported lazily because the weights are large
and often absent. A model name of the form ``hash:D`` selects a
deterministic offline encoder instead, so the export path itself can run
and be checked on machines with no weights and no network.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Protocol, Sequence

import numpy as np

from .errors import JobError

DEFAULT_MODEL = "all-mpnet-base-v2"


class Encoder(Protocol):
    name: str
    dim: int

    def encode(self, texts: Sequence[str]) -> np.ndarray: ...


@dataclass(frozen=True)
class HashEncoder:
    """Deterministic stand-in: a text's digest seeds a unit gaussian draw.

    Carries no semantics. Identical texts get identical rows, which is the
    only property of a real encoder the format contract depends on.
    """

    dim: int = 16

    @property
    def name(self) -> str:
        return f"hash:{self.dim}"

    def encode(self, texts: Sequence[str]) -> np.ndarray:
        out = np.empty((len(texts), self.dim), dtype=np.float32)
        for i, text in enumerate(texts):
            digest = hashlib.sha256(text.encode("utf-8")).digest()
            rng = np.random.default_rng(int.from_bytes(digest[:8], "little"))
            row = rng.standard_normal(self.dim)
            out[i] = (row / np.linalg.norm(row)).astype(np.float32)
        return out


class SentenceModelEncoder:
    """Wraps a sentence-transformers model in inference mode."""

    def __init__(self, name: str):
        try:
            from sentence_transformers import SentenceTransformer
        except ImportError as exc:
            raise JobError(
                f"model {name!r} needs sentence-transformers; install the [model] extra ({exc})"
            ) from None
        try:
            model = SentenceTransformer(name)
            model.eval()
        except Exception as exc:
            raise JobError(f"could not load model {name!r}: {exc}") from exc
        self._model = model
        self.name = name
        self.dim = int(model.get_sentence_embedding_dimension())

    def encode(self, texts: Sequence[str]) -> np.ndarray:
        vectors = self._model.encode(
            list(texts), convert_to_numpy=True, show_progress_bar=False
        )
        return np.asarray(vectors, dtype=np.float32)


def resolve_encoder(name: str) -> Encoder:
    if name.startswith("hash:"):
        try:
            dim = int(name.split(":", 1)[1])
        except ValueError:
            raise JobError(f"bad hash encoder spec {name!r}, want hash:<dim>") from None
        if dim < 1:
            raise JobError(f"hash encoder dim must be >= 1, got {dim}")
        return HashEncoder(dim=dim)
    return SentenceModelEncoder(name)
