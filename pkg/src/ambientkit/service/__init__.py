"""HTTP labeling service: a local, single-annotator FastAPI app."""

from .app import create_app

__all__ = ["create_app"]
