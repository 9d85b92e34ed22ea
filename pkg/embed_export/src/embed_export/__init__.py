"""Corpus-to-embedding export in the ambientkit binary format."""

from .encoders import DEFAULT_MODEL, Encoder, HashEncoder, resolve_encoder
from .errors import JobError
from .export import EmbedJob, ExportResult, export_embeddings

__all__ = [
    "DEFAULT_MODEL",
    "EmbedJob",
    "Encoder",
    "ExportResult",
    "HashEncoder",
    "JobError",
    "export_embeddings",
    "resolve_encoder",
]
