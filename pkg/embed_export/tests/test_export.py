import json
import struct

import numpy as np
import pytest
from ambientkit.embeddings import read_embeddings

from embed_export import EmbedJob, HashEncoder, JobError, export_embeddings, resolve_encoder

HEADER = struct.Struct("<4sIQI")


def run(corpus, out_prefix, encoder=None, batch=64, model="hash:16"):
    job = EmbedJob(corpus=corpus, out_prefix=out_prefix, model=model, batch_size=batch)
    return export_embeddings(job, encoder=encoder)


class ExplodingEncoder:
    """Fails on any text containing the trigger word."""

    name = "exploding"
    dim = 4

    def __init__(self, trigger="BOOM"):
        self.trigger = trigger
        self.inner = HashEncoder(dim=self.dim)

    def encode(self, texts):
        for text in texts:
            if self.trigger in text:
                raise RuntimeError("synthetic encoder failure")
        return self.inner.encode(texts)


class WrongShapeEncoder:
    name = "wrong-shape"
    dim = 4

    def encode(self, texts):
        return np.zeros((len(texts), 3), dtype=np.float32)


class NanEncoder:
    name = "nan"
    dim = 2

    def encode(self, texts):
        out = np.zeros((len(texts), 2), dtype=np.float32)
        if texts:
            out[-1, 0] = float("nan")
        return out


def test_three_document_fixture_header(make_corpus, out_prefix):
    corpus = make_corpus(["alpha", "beta", "gamma"])
    result = run(corpus, out_prefix, encoder=HashEncoder(dim=16))

    raw = result.matrix_path.read_bytes()
    magic, version, count, dim = HEADER.unpack_from(raw)
    assert (magic, version, count, dim) == (b"EMB1", 1, 3, 16)
    assert len(raw) == HEADER.size + 3 * 16 * 4
    assert result.count == 3 and result.dim == 16


def test_empty_corpus_writes_zero_count(make_corpus, out_prefix):
    corpus = make_corpus([])
    result = run(corpus, out_prefix, encoder=HashEncoder(dim=8))

    _, _, count, dim = HEADER.unpack_from(result.matrix_path.read_bytes())
    assert (count, dim) == (0, 8)
    assert result.ids_path.read_text(encoding="utf-8") == ""
    matrix = read_embeddings(result.matrix_path)
    assert matrix.ids == () and matrix.vectors.shape == (0, 8)


def test_identical_texts_identical_rows(make_corpus, out_prefix):
    corpus = make_corpus(["same words here", "different", "same words here"])
    result = run(corpus, out_prefix, encoder=HashEncoder(dim=16))

    payload = result.matrix_path.read_bytes()[HEADER.size:]
    row_bytes = 16 * 4
    row0 = payload[0:row_bytes]
    row1 = payload[row_bytes:2 * row_bytes]
    row2 = payload[2 * row_bytes:3 * row_bytes]
    assert row0 == row2
    assert row0 != row1


def test_round_trip_with_primary_reader(make_corpus, out_prefix):
    texts = [f"document number {i}" for i in range(7)]
    corpus = make_corpus(texts)
    encoder = HashEncoder(dim=12)
    result = run(corpus, out_prefix, encoder=encoder)

    matrix = read_embeddings(result.matrix_path)
    assert matrix.ids == tuple(f"d{i}" for i in range(7))
    assert matrix.vectors.shape == (7, 12)
    for i, text in enumerate(texts):
        expected = encoder.encode([text])[0]
        assert np.array_equal(matrix.vectors[i], expected)


def test_export_is_deterministic(make_corpus, tmp_path):
    corpus = make_corpus(["one", "two", "three"])
    r1 = run(corpus, tmp_path / "a", encoder=HashEncoder(dim=8))
    r2 = run(corpus, tmp_path / "b", encoder=HashEncoder(dim=8))
    assert r1.matrix_path.read_bytes() == r2.matrix_path.read_bytes()
    assert r1.ids_path.read_bytes() == r2.ids_path.read_bytes()


def test_batch_size_does_not_change_output(make_corpus, tmp_path):
    corpus = make_corpus([f"text {i}" for i in range(5)])
    r1 = run(corpus, tmp_path / "a", encoder=HashEncoder(dim=8), batch=2)
    r2 = run(corpus, tmp_path / "b", encoder=HashEncoder(dim=8), batch=64)
    assert r1.matrix_path.read_bytes() == r2.matrix_path.read_bytes()


def test_encoder_failure_names_the_document(make_corpus, out_prefix):
    corpus = make_corpus(["fine", "fine", "fine", "has BOOM inside", "fine"])
    with pytest.raises(JobError, match=r"document 3 \(id 'd3'\)"):
        run(corpus, out_prefix, encoder=ExplodingEncoder(), batch=2)


def test_wrong_encoder_shape_rejected(make_corpus, out_prefix):
    corpus = make_corpus(["a", "b"])
    with pytest.raises(JobError, match="shape"):
        run(corpus, out_prefix, encoder=WrongShapeEncoder())


def test_non_finite_embedding_rejected(make_corpus, out_prefix):
    corpus = make_corpus(["a", "b", "c"])
    with pytest.raises(JobError, match="non-finite embedding at document 2"):
        run(corpus, out_prefix, encoder=NanEncoder())


def test_duplicate_corpus_ids_rejected(make_corpus, out_prefix):
    dup = json.dumps({"id": "d0", "ts": 1_700_000_009, "text": "again"})
    corpus = make_corpus(["first"], raw_lines=[dup])
    with pytest.raises(JobError, match="duplicate id 'd0'"):
        run(corpus, out_prefix, encoder=HashEncoder(dim=4))


def test_malformed_lines_skipped_and_counted(make_corpus, out_prefix):
    corpus = make_corpus(["good one", "good two"], raw_lines=["{not json"])
    result = run(corpus, out_prefix, encoder=HashEncoder(dim=4))
    assert result.count == 2
    assert result.skipped == 1


def test_missing_corpus_is_a_job_error(tmp_path, out_prefix):
    with pytest.raises(JobError, match="cannot read corpus"):
        run(tmp_path / "nope.jsonl", out_prefix, encoder=HashEncoder(dim=4))


def test_out_prefix_accepts_emb_suffix(make_corpus, tmp_path):
    corpus = make_corpus(["a"])
    result = run(corpus, tmp_path / "vec.emb", encoder=HashEncoder(dim=4))
    assert result.matrix_path == tmp_path / "vec.emb"
    assert result.ids_path == tmp_path / "vec.ids"


def test_missing_output_directory_is_created(make_corpus, tmp_path):
    corpus = make_corpus(["a"])
    result = run(corpus, tmp_path / "new" / "deep" / "vec", encoder=HashEncoder(dim=4))
    assert result.matrix_path.exists()
    assert result.ids_path.exists()


def test_bad_batch_size_rejected(make_corpus, out_prefix):
    corpus = make_corpus(["a"])
    with pytest.raises(JobError, match="batch size"):
        run(corpus, out_prefix, encoder=HashEncoder(dim=4), batch=0)


def test_resolve_hash_encoder():
    encoder = resolve_encoder("hash:8")
    assert encoder.dim == 8
    assert encoder.name == "hash:8"


@pytest.mark.parametrize("spec", ["hash:", "hash:x", "hash:0", "hash:-2"])
def test_bad_hash_specs_rejected(spec):
    with pytest.raises(JobError):
        resolve_encoder(spec)
