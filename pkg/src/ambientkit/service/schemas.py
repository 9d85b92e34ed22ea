"""Request/response bodies for the labeling API."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field


class DocumentOut(BaseModel):
    id: str
    ts: int
    text: str
    loc: str | None = None
    lang: str | None = None


class LabelIn(BaseModel):
    id: str = Field(min_length=1)
    label: Literal["R", "NR"]
    session: str = Field(min_length=1)


class SkipIn(BaseModel):
    id: str = Field(min_length=1)
    session: str = Field(min_length=1)


class AckOut(BaseModel):
    ok: bool = True
    id: str
    applied: bool


class ProgressOut(BaseModel):
    labeled_R: int
    labeled_NR: int
    skipped: int
    remaining: int
    percent_R: float | None


class ExportEntry(BaseModel):
    id: str
    label: Literal["R", "NR"]
    source: Literal["human", "model"]
    score: float | None = None
    at: str
