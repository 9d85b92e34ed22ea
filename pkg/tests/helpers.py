"""Shared builders for randomized fixtures and corpus files."""

from __future__ import annotations

import json
import random
from pathlib import Path

WORD_POOL = [f"w{i}" for i in range(200)]


def random_counts(rng: random.Random, max_types: int = 40, max_count: int = 20) -> dict[str, int]:
    n_types = rng.randint(1, max_types)
    picked = rng.sample(WORD_POOL, n_types)
    return {w: rng.randint(1, max_count) for w in picked}


def random_scores(rng: random.Random, words) -> dict[str, float]:
    return {w: round(rng.uniform(1.0, 9.0), 3) for w in words}


def write_corpus_file(path: Path, records: list[dict]) -> Path:
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")
    return path


def corpus_record(doc_id: str, text: str, ts: int = 0, loc: str | None = None, lang: str | None = None) -> dict:
    record = {"id": doc_id, "ts": ts, "text": text}
    if loc is not None:
        record["loc"] = loc
    if lang is not None:
        record["lang"] = lang
    return record


EPOCH_2026 = 1_767_225_600  # 2026-01-01T00:00:00Z

R_TEXT = "solar energy power clean good panels"
NR_TEXT = "solar mph uv storm bad radiation"


def build_pipeline_fixture(root: Path, lexicon_file: Path, n_r: int = 6, n_nr: int = 6) -> dict:
    """A tiny but complete working set: corpus, embeddings, human labels, config.

    Half the documents read like energy posts, half like weather posts, with
    embeddings separated along the first axis so a linear head can recover
    the split exactly.
    """
    import numpy as np

    from ambientkit.embeddings import EmbeddingMatrix, write_embeddings
    from ambientkit.labels import LabelRecord, write_labels

    root = Path(root)
    day = 86_400
    records = []
    ids = []
    for i in range(n_r + n_nr):
        relevant = i < n_r
        doc_id = f"doc{i:02d}"
        ids.append(doc_id)
        records.append(
            corpus_record(
                doc_id,
                R_TEXT if relevant else NR_TEXT,
                # Spread across two bins.
                ts=EPOCH_2026 + (i % 2) * 15 * day,
                lang="en",
            )
        )
    corpus_path = write_corpus_file(root / "raw.ndjson", records)

    rng = np.random.default_rng(0)
    vectors = np.zeros((len(ids), 4), dtype=np.float32)
    vectors[:n_r, 0] = 2.0
    vectors[n_r:, 0] = -2.0
    vectors += rng.normal(scale=0.05, size=vectors.shape).astype(np.float32)
    embeddings_path = root / "vectors.emb"
    write_embeddings(EmbeddingMatrix(ids=tuple(ids), vectors=vectors), embeddings_path)

    # Human labels for 2/3 of each class; the rest is the model's job.
    labeled = [
        LabelRecord(doc_id=i, label="R", source="human")
        for i in ids[: n_r * 2 // 3 or 1]
    ] + [
        LabelRecord(doc_id=i, label="NR", source="human")
        for i in ids[n_r : n_r + (n_nr * 2 // 3 or 1)]
    ]
    labels_path = root / "labels.csv"
    write_labels(labeled, labels_path)

    out_dir = root / "run"
    config = {
        "paths": {
            "corpus": str(corpus_path),
            "lexicon": str(lexicon_file),
            "embeddings": str(embeddings_path),
            "labels": str(labels_path),
            "out_dir": str(out_dir),
        },
        "anchor": {"anchor": "solar", "match_mode": "word_boundary", "lang": "en"},
        "binning": {"epoch": "2026-01-01T00:00:00Z", "bin_days": 14},
        "training": {"epochs": 300},
        "alpha": 0.25,
        "seed": 0,
        "sample_size": 1000,
    }
    config_path = root / "config.json"
    config_path.write_text(json.dumps(config, indent=2) + "\n")
    return {
        "config_path": config_path,
        "config": config,
        "corpus": corpus_path,
        "embeddings": embeddings_path,
        "labels": labels_path,
        "out_dir": out_dir,
        "ids": ids,
        "n_r": n_r,
    }
