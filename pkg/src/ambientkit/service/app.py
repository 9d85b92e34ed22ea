"""FastAPI app for hand-labeling a corpus sample.

Endpoints are synchronous on purpose: every accepted label is fsynced by
the store before the handler returns, and running them in the threadpool
keeps that blocking write off the event loop.
"""

from __future__ import annotations

from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import HTMLResponse
from fastapi.staticfiles import StaticFiles

from ..documents import Document
from ..errors import ExhaustedSample
from ..labels import LabelRecord, LabelStore, SOURCE_HUMAN
from .schemas import AckOut, DocumentOut, ExportEntry, LabelIn, ProgressOut, SkipIn
from .sessions import STRATEGY_RANDOM, SessionManager

EXHAUSTED_DETAIL = "exhausted"

_FALLBACK_PAGE = """<!doctype html>
<html><head><meta charset="utf-8"><title>labeling service</title></head>
<body><h1>Labeling service is running</h1>
<p>No UI bundle was found. The JSON API lives under <code>/api/</code>;
point the label UI build at this address or use the endpoints directly.</p>
</body></html>"""


def _now_iso() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _doc_out(doc: Document) -> DocumentOut:
    return DocumentOut(
        id=doc.id,
        ts=doc.timestamp,
        text=doc.text,
        loc=doc.location_raw,
        lang=doc.language,
    )


def create_app(
    documents: dict[str, Document],
    store: LabelStore,
    strategy: str = STRATEGY_RANDOM,
    scores: dict[str, float] | None = None,
    seed: int = 0,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="ambientkit labeling service", docs_url=None, redoc_url=None)
    sessions = SessionManager(list(documents), strategy=strategy, seed=seed)

    @app.get("/api/next", response_model=DocumentOut)
    def api_next(session: str):
        state = sessions.get(session)
        try:
            doc_id = state.next_to_label(store, scores)
        except ExhaustedSample:
            raise HTTPException(status_code=404, detail=EXHAUSTED_DETAIL) from None
        return _doc_out(documents[doc_id])

    @app.post("/api/label", response_model=AckOut)
    def api_label(body: LabelIn):
        if body.id not in documents:
            raise HTTPException(status_code=404, detail=f"unknown document {body.id!r}")
        state = sessions.get(body.session)
        record = LabelRecord(
            doc_id=body.id, label=body.label, source=SOURCE_HUMAN, at=_now_iso()
        )
        applied = store.apply(record)
        if applied:
            state.record_label(body.label)
        return AckOut(id=body.id, applied=applied)

    @app.post("/api/skip", response_model=AckOut)
    def api_skip(body: SkipIn):
        if body.id not in documents:
            raise HTTPException(status_code=404, detail=f"unknown document {body.id!r}")
        sessions.get(body.session).record_skip(body.id)
        return AckOut(id=body.id, applied=True)

    @app.get("/api/progress", response_model=ProgressOut)
    def api_progress(session: str | None = None):
        labeled_r = 0
        labeled_nr = 0
        for doc_id, record in store.entries().items():
            if doc_id in documents and record.source == SOURCE_HUMAN:
                if record.label == "R":
                    labeled_r += 1
                else:
                    labeled_nr += 1
        if session is not None:
            skipped = sessions.get(session).counts["skipped"]
        else:
            skipped = sessions.total_skipped()
        remaining = max(len(documents) - labeled_r - labeled_nr - skipped, 0)
        labeled = labeled_r + labeled_nr
        percent = 100.0 * labeled_r / labeled if labeled else None
        return ProgressOut(
            labeled_R=labeled_r,
            labeled_NR=labeled_nr,
            skipped=skipped,
            remaining=remaining,
            percent_R=percent,
        )

    @app.get("/api/doc/{doc_id}", response_model=DocumentOut)
    def api_doc(doc_id: str):
        doc = documents.get(doc_id)
        if doc is None:
            raise HTTPException(status_code=404, detail=f"unknown document {doc_id!r}")
        return _doc_out(doc)

    @app.get("/api/export", response_model=list[ExportEntry])
    def api_export():
        entries = store.entries()
        return [
            ExportEntry(
                id=doc_id,
                label=record.label,
                source=record.source,
                score=record.score,
                at=record.at,
            )
            for doc_id, record in sorted(entries.items())
        ]

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")
    else:

        @app.get("/", response_class=HTMLResponse)
        def index():
            return _FALLBACK_PAGE

    return app
