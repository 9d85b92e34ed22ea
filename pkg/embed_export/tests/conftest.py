import json
from pathlib import Path

import pytest


@pytest.fixture
def make_corpus(tmp_path):
    """Factory writing a JSONL corpus; texts map to ids d0, d1, ..."""

    def _write(texts, name="corpus.jsonl", raw_lines=()):
        path = tmp_path / name
        with open(path, "w", encoding="utf-8") as handle:
            for i, text in enumerate(texts):
                record = {"id": f"d{i}", "ts": 1_700_000_000 + i, "text": text}
                handle.write(json.dumps(record) + "\n")
            for line in raw_lines:
                handle.write(line + "\n")
        return path

    return _write


@pytest.fixture
def out_prefix(tmp_path) -> Path:
    return tmp_path / "vectors"
