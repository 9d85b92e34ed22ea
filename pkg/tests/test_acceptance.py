"""End-to-end acceptance suite.

One test per acceptance criterion; each prints a single PASS/FAIL line
directly to the terminal (bypassing capture) so the run log reads as a
checklist. Numeric tolerances are pinned here and must not be loosened:
a criterion that cannot hold should fail loudly, not quietly drift.
"""

import json
import math
import os
import random
import signal
import socket
import subprocess
import sys
import threading
import time
from pathlib import Path

import httpx
import numpy as np

from ambientkit.anchor import AnchorQuery, match_keyword
from ambientkit.classifier import TrainConfig, evaluate, predict, split, train
from ambientkit.documents import parse_document
from ambientkit.embeddings import EmbeddingMatrix
from ambientkit.errors import NoScoredTokens
from ambientkit.labels import read_labels
from ambientkit.lexicon import Lexicon
from ambientkit.ngrams import count_tokens, tokenize
from ambientkit.rtd import rtd, rtd_contribution_list
from ambientkit.sentiment import FrequencyDistribution, ambient_sentiment
from ambientkit.wordshift import shift_contributions

from helpers import WORD_POOL, random_counts, random_scores
from oracles import oracle_ambient, oracle_rtd, oracle_shift_total

TOL_EXACT = 1e-12
TOL_SUM = 1e-9
TOL_DISJOINT = 1e-9


def _report(capfd, name, run):
    try:
        detail = run()
    except BaseException as exc:  # re-raised; the line is the point
        with capfd.disabled():
            print(f"FAIL [{name}] {type(exc).__name__}: {exc}", flush=True)
        raise
    with capfd.disabled():
        print(f"PASS [{name}] {detail}", flush=True)


def _pool_lexicon(rng):
    return Lexicon(entries=random_scores(rng, WORD_POOL), name="pool")


# --- criterion: frequency-weighted mean/spread vs brute force ---


def test_acceptance_ambient_mean_oracle(capfd):
    def run():
        rng = random.Random(101)
        t0 = time.perf_counter()
        worst = 0.0
        checked = 0
        for _ in range(1000):
            counts = random_counts(rng)
            scored = rng.sample(sorted(counts), max(1, len(counts) // 2))
            lexicon = Lexicon(entries=random_scores(rng, scored), name="t")
            expected = oracle_ambient(counts, lexicon.entries)
            dist = FrequencyDistribution.from_counts(counts)
            try:
                got = ambient_sentiment(dist, lexicon, n_documents=1)
            except NoScoredTokens:
                assert expected is None
                continue
            phi, sigma = expected
            worst = max(worst, abs(got.phi_avg - phi), abs(got.sigma - sigma))
            checked += 1
        elapsed = time.perf_counter() - t0
        assert checked >= 990
        assert worst <= TOL_EXACT, f"max deviation {worst}"
        assert elapsed < 5.0, f"took {elapsed:.2f}s"
        return f"{checked} fixtures, max |dev| {worst:.2e}, {elapsed:.2f}s"

    _report(capfd, "ambient-mean-oracle", run)


# --- criterion: word-shift contributions sum to the mean difference ---


def test_acceptance_shift_sum_identity(capfd):
    def run():
        rng = random.Random(202)
        lexicon = _pool_lexicon(rng)
        t0 = time.perf_counter()
        worst_identity = worst_oracle = 0.0
        for _ in range(1000):
            ref = FrequencyDistribution.from_counts(random_counts(rng))
            comp = FrequencyDistribution.from_counts(random_counts(rng))
            report = shift_contributions(ref, comp, lexicon)
            total = math.fsum(c.delta for c in report.contributions)
            worst_identity = max(
                worst_identity, abs(total - (report.phi_comp - report.phi_ref))
            )
            expected = oracle_shift_total(ref.counts, comp.counts, lexicon.entries)
            worst_oracle = max(
                worst_oracle, abs((report.phi_comp - report.phi_ref) - expected)
            )
        elapsed = time.perf_counter() - t0
        assert worst_identity <= TOL_SUM, f"sum identity off by {worst_identity}"
        assert worst_oracle <= TOL_SUM, f"oracle total off by {worst_oracle}"

        same = FrequencyDistribution.from_counts(random_counts(rng))
        identity_report = shift_contributions(same, same, lexicon)
        assert all(c.delta == 0.0 for c in identity_report.contributions)
        assert elapsed < 5.0, f"took {elapsed:.2f}s"
        return (
            f"1000 pairs, max |residual| {worst_identity:.2e}, "
            f"identity pair all-zero, {elapsed:.2f}s"
        )

    _report(capfd, "shift-sum-identity", run)


# --- criterion: rank-divergence identities, symmetry, range, brute force ---


def test_acceptance_rank_divergence_properties(capfd):
    def run():
        rng = random.Random(303)
        worst_identity = worst_symmetry = worst_disjoint = worst_oracle = 0.0
        lo, hi = math.inf, -math.inf

        for _ in range(200):
            dist = FrequencyDistribution.from_counts(random_counts(rng))
            worst_identity = max(worst_identity, abs(rtd(dist, dist).divergence))

        for _ in range(1000):
            d1 = FrequencyDistribution.from_counts(random_counts(rng))
            d2 = FrequencyDistribution.from_counts(random_counts(rng))
            forward = rtd(d1, d2).divergence
            lo, hi = min(lo, forward), max(hi, forward)
            worst_symmetry = max(
                worst_symmetry, abs(forward - rtd(d2, d1).divergence)
            )

        for _ in range(50):
            base1 = random_counts(rng, max_types=20)
            base2 = random_counts(rng, max_types=20)
            only1 = FrequencyDistribution.from_counts(
                {f"a:{w}": c for w, c in base1.items()}
            )
            only2 = FrequencyDistribution.from_counts(
                {f"b:{w}": c for w, c in base2.items()}
            )
            worst_disjoint = max(
                worst_disjoint, abs(rtd(only1, only2).divergence - 1.0)
            )

        for _ in range(200):
            c1 = random_counts(rng, max_types=20, max_count=12)
            c2 = random_counts(rng, max_types=20, max_count=12)
            got = rtd(
                FrequencyDistribution.from_counts(c1),
                FrequencyDistribution.from_counts(c2),
            ).divergence
            worst_oracle = max(worst_oracle, abs(got - oracle_rtd(c1, c2, 0.25)))

        assert worst_identity <= TOL_EXACT, f"identity {worst_identity}"
        assert worst_symmetry <= TOL_EXACT, f"symmetry {worst_symmetry}"
        assert 0.0 <= lo and hi <= 1.0, f"range [{lo}, {hi}]"
        assert worst_disjoint <= TOL_DISJOINT, f"disjoint {worst_disjoint}"
        assert worst_oracle <= TOL_EXACT, f"brute force {worst_oracle}"
        return (
            f"identity {worst_identity:.1e}, symmetry {worst_symmetry:.1e}, "
            f"range [{lo:.3f}, {hi:.3f}] over 1000 pairs, "
            f"disjoint |D-1| {worst_disjoint:.1e}, brute-force {worst_oracle:.1e}"
        )

    _report(capfd, "rank-divergence-properties", run)


# --- criterion: train/test split protocol ---


def test_acceptance_split_protocol(capfd):
    def run():
        ids = [f"d{i}" for i in range(1000)]
        labels = {i: ("R" if int(i[1:]) % 2 else "NR") for i in ids}
        first = split(ids, labels, train_frac=0.67, seed=0)
        again = split(ids, labels, train_frac=0.67, seed=0)
        assert len(first[0]) == 670 and len(first[1]) == 330
        assert first == again, "not deterministic under seed"
        assert not set(first[0]) & set(first[1]), "overlapping split"
        assert sorted(first[0] + first[1]) == sorted(ids), "not exhaustive"

        rng = random.Random(404)
        sizes = [2, 3, 4, 5, 10, 11, 9999, 10000] + [
            rng.randint(2, 10000) for _ in range(150)
        ]
        for n in sizes:
            ids_n = [f"d{i}" for i in range(n)]
            labels_n = {i: ("R" if int(i[1:]) % 2 else "NR") for i in ids_n}
            tr, te = split(ids_n, labels_n, train_frac=0.67, seed=rng.randint(0, 999))
            assert len(tr) == round(0.67 * n)
            assert len(tr) + len(te) == n
            assert not set(tr) & set(te)
        return f"1000 -> 670/330 exact; property held for {len(sizes)} sizes in [2, 10000]"

    _report(capfd, "split-protocol", run)


# --- criterion: classifier on separable and skewed synthetic data ---


def _blobs(n, dim=8, seed=0, sep=4.0, pos_frac=0.5):
    rng = np.random.default_rng(seed)
    n_pos = int(round(n * pos_frac))
    center = np.zeros(dim)
    center[0] = sep
    pos = rng.normal(size=(n_pos, dim)) + center
    neg = rng.normal(size=(n - n_pos, dim)) - center
    rows = np.vstack([pos, neg]).astype(np.float32)
    ids = tuple(f"d{i}" for i in range(n))
    labels = {f"d{i}": ("R" if i < n_pos else "NR") for i in range(n)}
    return EmbeddingMatrix(ids=ids, vectors=rows), labels


def _held_out_f1(matrix, labels, config):
    ids = list(matrix.ids)
    train_ids, test_ids = split(ids, labels, train_frac=0.67, seed=0)
    model = train(matrix, labels, train_ids, config)
    predictions = predict(model, matrix)
    report = evaluate(
        {i: predictions[i][1] for i in test_ids},
        {i: labels[i] for i in test_ids},
    )
    return report.f1


def test_acceptance_classifier_sanity(capfd):
    def run():
        t0 = time.perf_counter()
        matrix, labels = _blobs(300, dim=8, seed=10, sep=4.0)
        balanced_f1 = _held_out_f1(matrix, labels, TrainConfig(epochs=500))
        assert balanced_f1 >= 0.99, f"balanced F1 {balanced_f1}"

        skewed, skewed_labels = _blobs(2000, dim=8, seed=11, sep=3.0, pos_frac=0.047)
        skewed_f1 = _held_out_f1(
            skewed, skewed_labels, TrainConfig(epochs=500, class_weight=True)
        )
        assert skewed_f1 >= 0.9, f"skewed class-weighted F1 {skewed_f1}"
        elapsed = time.perf_counter() - t0
        assert elapsed < 30.0, f"took {elapsed:.2f}s"
        return (
            f"balanced F1 {balanced_f1:.3f}, 4.7%-prevalence weighted F1 "
            f"{skewed_f1:.3f}, {elapsed:.2f}s"
        )

    _report(capfd, "classifier-sanity", run)


# --- criterion: designed two-corpus fixture sorts vocabulary by side ---

ENERGY_WORDS = ("energy", "power", "panels")
WEATHER_WORDS = ("mph", "uv", "radiation")

R_COUNTS = {
    "solar": 40, "energy": 30, "power": 25, "panels": 20,
    "clean": 15, "good": 10, "uv": 2,
}
NR_COUNTS = {
    "solar": 40, "mph": 30, "uv": 25, "radiation": 20,
    "storm": 15, "bad": 10, "power": 2,
}


def _expand_to_docs(counts, words_per_doc=8):
    stream = [w for w, c in sorted(counts.items()) for _ in range(c)]
    return [
        " ".join(stream[i : i + words_per_doc])
        for i in range(0, len(stream), words_per_doc)
    ]


def test_acceptance_partition_quality(capfd, lexicon):
    def run():
        r_docs = _expand_to_docs(R_COUNTS)
        nr_docs = _expand_to_docs(NR_COUNTS)
        comp = FrequencyDistribution.from_counts(count_tokens(r_docs, 1))
        ref = FrequencyDistribution.from_counts(count_tokens(nr_docs, 1))

        r_phi = ambient_sentiment(comp, lexicon, n_documents=len(r_docs)).phi_avg
        nr_phi = ambient_sentiment(ref, lexicon, n_documents=len(nr_docs)).phi_avg
        assert r_phi > nr_phi, f"R mean {r_phi} not above NR mean {nr_phi}"

        # Divergence contributions, signed toward corpus 1 = R.
        top = {
            c.ngram_type: c.contribution
            for c in rtd_contribution_list(rtd(comp, ref), 10)
        }
        for word in ENERGY_WORDS:
            assert top[word] > 0, f"{word} not on the R side: {top[word]}"
        for word in WEATHER_WORDS:
            assert top[word] < 0, f"{word} not on the NR side: {top[word]}"

        # Shift agrees: energy words gained frequency and sit above the
        # reference mean, weather words the mirror image.
        shift = shift_contributions(ref, comp, lexicon)
        by_word = {c.word: c for c in shift.contributions}
        for word in ENERGY_WORDS:
            assert by_word[word].freq_change > 0
            assert by_word[word].polarity == "above_ref_mean"
        for word in WEATHER_WORDS:
            assert by_word[word].freq_change < 0
            assert by_word[word].polarity == "below_ref_mean"
        return (
            f"R mean {r_phi:.3f} > NR mean {nr_phi:.3f}; "
            f"energy terms on R side, weather terms on NR side in both views"
        )

    _report(capfd, "partition-quality", run)


# --- criterion: single-threaded ingest throughput (informative) ---

_TEMPLATES = (
    "solar panels on every roof would change the grid math in ways utilities never planned for today",
    "wind was picking up near the lake so we packed early and drove back before the rain line hit",
    "the nuclear option in this debate is just canceling the whole program and starting over again",
    "power prices spiked again this week and nobody at the meeting could explain the forward curve",
)


def test_acceptance_throughput(capfd):
    def run():
        n = 1_000_000
        query = AnchorQuery(
            anchor="solar", match_mode="word_boundary", required_language=None
        )
        t0 = time.perf_counter()
        matched = 0
        for i in range(n):
            line = json.dumps(
                {"id": str(i), "ts": 1_700_000_000 + i, "text": _TEMPLATES[i & 3]}
            )
            doc = parse_document(line, line_no=i + 1)
            if match_keyword(doc.text, query):
                matched += 1
            tokenize(doc.text, 1)
        elapsed = time.perf_counter() - t0
        assert matched == n // 4
        # The 60s budget is a goal, not a gate: report, never fail on time.
        goal = "met" if elapsed < 60.0 else "MISSED"
        return (
            f"{n:,} docs in {elapsed:.1f}s ({n / elapsed:,.0f} docs/s), "
            f"60s goal {goal} (informative)"
        )

    _report(capfd, "ingest-throughput", run)


# --- criterion: store survives SIGKILL mid-session ---

N_LABELS = 500
N_KILLS = 20
N_DOCS = 550


def _free_port():
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


def _start_server(corpus, labels, port, cwd):
    proc = subprocess.Popen(
        [
            sys.executable, "-m", "ambientkit", "serve",
            "--corpus", str(corpus), "--labels", str(labels),
            "--bind", f"127.0.0.1:{port}", "--seed", "0",
        ],
        cwd=cwd,
        stdout=subprocess.DEVNULL,
        stderr=subprocess.DEVNULL,
    )
    deadline = time.time() + 30
    while time.time() < deadline:
        if proc.poll() is not None:
            raise RuntimeError(f"server exited early with {proc.returncode}")
        try:
            response = httpx.get(
                f"http://127.0.0.1:{port}/api/progress", timeout=1.0
            )
            if response.status_code == 200:
                return proc
        except httpx.HTTPError:
            time.sleep(0.05)
    proc.kill()
    raise RuntimeError("server did not become ready in 30s")


def test_acceptance_crash_safety(capfd, tmp_path):
    def run():
        corpus = tmp_path / "corpus.ndjson"
        with open(corpus, "w", encoding="utf-8") as handle:
            for i in range(N_DOCS):
                handle.write(
                    json.dumps(
                        {"id": f"d{i:03d}", "ts": 1000 + i, "text": f"document {i}"}
                    )
                    + "\n"
                )
        labels_path = tmp_path / "labels.csv"
        port = _free_port()
        base = f"http://127.0.0.1:{port}"

        kill_at = set(random.Random(0).sample(range(N_LABELS + N_KILLS), N_KILLS))
        acked: dict[str, str] = {}
        maybe_stored: dict[str, str] = {}
        attempts = 0
        kills = 0

        proc = _start_server(corpus, labels_path, port, tmp_path)
        client = httpx.Client(base_url=base, timeout=10.0)
        try:
            while len(acked) < N_LABELS:
                response = client.get("/api/next", params={"session": "s"})
                if response.status_code == 404:
                    raise AssertionError("queue exhausted before 500 labels")
                doc_id = response.json()["id"]
                label = "R" if len(acked) % 2 == 0 else "NR"
                body = {"id": doc_id, "label": label, "session": "s"}

                if attempts in kill_at:
                    outcome: dict = {}

                    def fire():
                        try:
                            reply = client.post("/api/label", json=body)
                            outcome["ok"] = reply.status_code == 200
                        except httpx.HTTPError:
                            outcome["ok"] = False

                    poster = threading.Thread(target=fire)
                    poster.start()
                    os.kill(proc.pid, signal.SIGKILL)
                    poster.join()
                    proc.wait()
                    kills += 1
                    if outcome.get("ok"):
                        acked[doc_id] = label
                    else:
                        maybe_stored[doc_id] = label
                    # The store must parse cleanly after every kill.
                    if labels_path.exists():
                        read_labels(labels_path)
                    proc = _start_server(corpus, labels_path, port, tmp_path)
                else:
                    reply = client.post("/api/label", json=body)
                    assert reply.status_code == 200, reply.text
                    acked[doc_id] = label
                attempts += 1
        finally:
            client.close()
            if proc.poll() is None:
                os.kill(proc.pid, signal.SIGKILL)
                proc.wait()

        effective = {
            doc_id: record
            for doc_id, record in read_labels(labels_path).items()
            if record.source == "human"
        }
        for doc_id, label in acked.items():
            record = effective.get(doc_id)
            assert record is not None, f"acked {doc_id} missing from store"
            assert record.label == label, f"acked {doc_id} stored as {record.label}"
        extras = {i for i in effective if i not in acked}
        assert len(extras) <= kills, f"{len(extras)} unacked entries, {kills} kills"
        for doc_id in extras:
            assert effective[doc_id].label == maybe_stored.get(doc_id), (
                f"unacked {doc_id} does not match its in-flight attempt"
            )
        return (
            f"{len(acked)} acked labels intact across {kills} kills; "
            f"{len(extras)} in-flight extra(s), store parsed after every kill"
        )

    _report(capfd, "crash-safety", run)
