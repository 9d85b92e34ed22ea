"""Config-driven pipeline: ingest, label, train, classify, measure.

Each stage declares its input files and parameters; a stage is skipped on
rerun when every input digest, the parameter digest, and every output
digest still match the stored run manifest. Manifests carry no wall-clock
fields, so identical runs produce identical measurement bytes.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .anchor import AnchorQuery
from .classifier import (
    TrainConfig,
    evaluate,
    load_model,
    predict,
    sample_for_labeling,
    save_model,
    split,
    train,
)
from .documents import read_corpus
from .embeddings import ids_path_for, read_embeddings
from .errors import AmbientkitError, PipelineError
from .gazetteer import load_gazetteer
from .ingest import CORPUS_FILENAME, binning_from_manifest, read_manifest, run_ingest
from .labels import (
    LABEL_RELEVANT,
    LabelRecord,
    SOURCE_HUMAN,
    SOURCE_MODEL,
    _replay,
    read_labels,
    write_labels,
)
from .lexicon import apply_lens, load_lexicon
from .ngrams import count_tokens
from .rtd import RtdConfig, rtd, write_rtd_report
from .sentiment import (
    FrequencyDistribution,
    Partition,
    build_series,
    write_series,
)
from .timebins import TimeBin, parse_epoch
from .wordshift import shift_contributions, write_shift_report

MANIFEST_NAME = "run_manifest.json"
STAGES = ("ingest", "label", "train", "classify", "measure")


@dataclass(frozen=True)
class PipelineConfig:
    corpus: Path
    lexicon: Path
    embeddings: Path
    labels: Path
    out_dir: Path
    anchor: str
    match_mode: str = "word_boundary"
    language: str | None = None
    gazetteer: Path | None = None
    epoch: str | None = None
    bin_days: int = 14
    alpha: float = 0.25
    seed: int = 0
    lens: tuple[float, float] | None = None
    threshold: float = 0.5
    sample_size: int = 1000
    train_frac: float = 0.67
    epochs: int = 500
    learning_rate: float = 0.5
    l2: float = 0.0
    class_weight: bool = False


def load_config(path: str | Path) -> PipelineConfig:
    raw = json.loads(Path(path).read_text())
    paths = raw.get("paths", {})
    anchor = raw.get("anchor", {})
    binning = raw.get("binning", {})
    training = raw.get("training", {})
    lens = raw.get("lens")
    try:
        config = _build_config(raw, paths, anchor, binning, training, lens)
    except KeyError as exc:
        raise PipelineError("config", f"missing required key {exc}") from None
    validate_config(config)
    return config


def _build_config(raw, paths, anchor, binning, training, lens) -> PipelineConfig:
    return PipelineConfig(
        corpus=Path(paths["corpus"]),
        lexicon=Path(paths["lexicon"]),
        embeddings=Path(paths["embeddings"]),
        labels=Path(paths["labels"]),
        out_dir=Path(paths["out_dir"]),
        gazetteer=Path(paths["gazetteer"]) if paths.get("gazetteer") else None,
        anchor=anchor["anchor"],
        match_mode=anchor.get("match_mode", "word_boundary"),
        language=anchor.get("lang"),
        epoch=binning.get("epoch"),
        bin_days=binning.get("bin_days", 14),
        alpha=raw.get("alpha", 0.25),
        seed=raw["seed"],
        lens=tuple(lens) if lens else None,
        threshold=raw.get("threshold", 0.5),
        sample_size=raw.get("sample_size", 1000),
        train_frac=training.get("train_frac", 0.67),
        epochs=training.get("epochs", 500),
        learning_rate=training.get("learning_rate", 0.5),
        l2=training.get("l2", 0.0),
        class_weight=training.get("class_weight", False),
    )


def validate_config(config: PipelineConfig):
    required = {
        "corpus": config.corpus,
        "lexicon": config.lexicon,
        "embeddings": config.embeddings,
        "labels": config.labels,
    }
    if config.gazetteer is not None:
        required["gazetteer"] = config.gazetteer
    for name, path in required.items():
        if not Path(path).exists():
            raise PipelineError("config", f"{name} path does not exist: {path}")
    if config.epoch is None:
        raise PipelineError("config", "binning.epoch is required")
    if not isinstance(config.seed, int):
        raise PipelineError("config", "seed must be an integer")


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _params_digest(params: dict) -> str:
    return hashlib.sha256(
        json.dumps(params, sort_keys=True, default=str).encode("utf-8")
    ).hexdigest()


class _Runner:
    def __init__(self, config: PipelineConfig):
        self.config = config
        self.out_dir = Path(config.out_dir)
        self.manifest_path = self.out_dir / MANIFEST_NAME
        self.previous = {}
        if self.manifest_path.exists():
            try:
                self.previous = json.loads(self.manifest_path.read_text()).get("stages", {})
            except (json.JSONDecodeError, OSError):
                self.previous = {}
        self.stages: dict[str, dict] = {}

    def run_stage(self, name: str, inputs: list[Path], params: dict, outputs: list[Path], build):
        input_digests = {}
        for path in inputs:
            if not path.exists():
                raise PipelineError(name, f"missing input {path}")
            input_digests[str(path)] = _sha256(path)
        params_digest = _params_digest(params)

        old = self.previous.get(name)
        if (
            old is not None
            and old.get("inputs") == input_digests
            and old.get("params_digest") == params_digest
            and all(p.exists() for p in outputs)
            and {str(p): _sha256(p) for p in outputs} == old.get("outputs")
        ):
            entry = dict(old)
            entry["cache_hit"] = True
            self.stages[name] = entry
            return

        try:
            build()
        except PipelineError:
            raise
        except (AmbientkitError, OSError, ValueError, KeyError) as exc:
            raise PipelineError(name, str(exc)) from exc
        for path in outputs:
            if not path.exists():
                raise PipelineError(name, f"stage did not produce {path}")
        self.stages[name] = {
            "inputs": input_digests,
            "params_digest": params_digest,
            "outputs": {str(p): _sha256(p) for p in outputs},
            "cache_hit": False,
        }

    def write_manifest(self) -> dict:
        manifest = {
            "version": __version__,
            "seed": self.config.seed,
            "stages": self.stages,
        }
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
        return manifest


def run_pipeline(config: PipelineConfig) -> dict:
    validate_config(config)
    c = config
    out = Path(c.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    runner = _Runner(c)

    binning = TimeBin(epoch_start=parse_epoch(c.epoch), width=c.bin_days * 86_400)
    query = AnchorQuery(anchor=c.anchor, match_mode=c.match_mode, required_language=c.language)

    # Stage 1: filter the raw corpus.
    ingest_dir = out / "ingest"
    ingest_inputs = [c.corpus] + ([c.gazetteer] if c.gazetteer else [])
    filtered_corpus = ingest_dir / CORPUS_FILENAME

    def build_ingest():
        gazetteer = load_gazetteer(c.gazetteer) if c.gazetteer else None
        run_ingest(c.corpus, query, ingest_dir, gazetteer=gazetteer, binning=binning)

    runner.run_stage(
        "ingest",
        ingest_inputs,
        {
            "anchor": c.anchor,
            "match_mode": c.match_mode,
            "lang": c.language,
            "epoch": c.epoch,
            "bin_days": c.bin_days,
        },
        [filtered_corpus, ingest_dir / "manifest.json"],
        build_ingest,
    )

    # Stage 2: pick the labeling sample and snapshot its human labels.
    label_dir = out / "label"
    sample_path = label_dir / "sample_ids.txt"
    snapshot_path = label_dir / "labels_snapshot.csv"

    def build_label():
        label_dir.mkdir(parents=True, exist_ok=True)
        errors: list = []
        ids = [d.id for d in read_corpus(filtered_corpus, errors)]
        n = min(c.sample_size, len(ids))
        sample = sample_for_labeling(ids, n, seed=c.seed)
        sample_path.write_text("".join(i + "\n" for i in sample))
        human = {
            i: r
            for i, r in read_labels(c.labels).items()
            if r.source == SOURCE_HUMAN and i in set(sample)
        }
        if not human:
            raise PipelineError("label", f"no human labels in {c.labels} cover the sample")
        write_labels(human.values(), snapshot_path)

    runner.run_stage(
        "label",
        [filtered_corpus, c.labels],
        {"sample_size": c.sample_size, "seed": c.seed},
        [sample_path, snapshot_path],
        build_label,
    )

    # Stage 3: train the relevance head on the snapshot, evaluate held-out.
    train_dir = out / "train"
    model_path = train_dir / "model.json"
    eval_path = train_dir / "eval.json"

    def build_train():
        train_dir.mkdir(parents=True, exist_ok=True)
        matrix = read_embeddings(c.embeddings)
        snapshot = read_labels(snapshot_path)
        labels_by_id = {i: r.label for i, r in snapshot.items()}
        ids = sorted(labels_by_id)
        train_ids, test_ids = split(ids, labels_by_id, c.train_frac, seed=c.seed)
        train_config = TrainConfig(
            learning_rate=c.learning_rate,
            epochs=c.epochs,
            l2=c.l2,
            class_weight=c.class_weight,
            seed=c.seed,
        )
        model = train(matrix, labels_by_id, train_ids, train_config)
        if c.threshold != model.threshold:
            model = type(model)(
                weights=model.weights,
                bias=model.bias,
                threshold=c.threshold,
                train_config=train_config,
            )
        save_model(model, model_path)
        predicted = predict(model, matrix)
        report = evaluate(
            {i: predicted[i][1] for i in test_ids},
            {i: labels_by_id[i] for i in test_ids},
            train_frac=c.train_frac,
            seed=c.seed,
        )
        eval_path.write_text(
            json.dumps(
                {
                    "precision": report.precision,
                    "recall": report.recall,
                    "f1": report.f1,
                    "confusion": {
                        "tp": report.tp,
                        "fp": report.fp,
                        "fn": report.fn,
                        "tn": report.tn,
                    },
                    "split": {"train_frac": c.train_frac, "seed": c.seed},
                },
                indent=2,
                sort_keys=True,
            )
            + "\n"
        )

    runner.run_stage(
        "train",
        [c.embeddings, ids_path_for(c.embeddings), snapshot_path],
        {
            "train_frac": c.train_frac,
            "epochs": c.epochs,
            "learning_rate": c.learning_rate,
            "l2": c.l2,
            "class_weight": c.class_weight,
            "seed": c.seed,
            "threshold": c.threshold,
        },
        [model_path, eval_path],
        build_train,
    )

    # Stage 4: score every embedded document.
    classify_dir = out / "classify"
    model_labels_path = classify_dir / "labels.csv"

    def build_classify():
        classify_dir.mkdir(parents=True, exist_ok=True)
        matrix = read_embeddings(c.embeddings)
        model = load_model(model_path)
        predictions = predict(model, matrix)
        records = [
            LabelRecord(doc_id=i, label=label, source=SOURCE_MODEL, score=score)
            for i, (score, label) in predictions.items()
        ]
        write_labels(records, model_labels_path)

    runner.run_stage(
        "classify",
        [c.embeddings, ids_path_for(c.embeddings), model_path],
        {},
        [model_labels_path],
        build_classify,
    )

    # Stage 5: series, word shift, and divergence over the partition.
    measure_dir = out / "measure"
    series_paths = {
        Partition.R: measure_dir / "series_R.csv",
        Partition.NR: measure_dir / "series_NR.csv",
        Partition.COMBINED: measure_dir / "series_combined.csv",
    }
    shift_path = measure_dir / "shift.csv"
    rtd_dir = measure_dir / "rtd"
    measure_outputs = list(series_paths.values()) + [
        shift_path,
        rtd_dir / "divergence.json",
        rtd_dir / "contributions.csv",
        rtd_dir / "histogram.csv",
    ]

    def build_measure():
        measure_dir.mkdir(parents=True, exist_ok=True)
        errors: list = []
        docs = read_corpus(filtered_corpus, errors)
        lexicon = load_lexicon(c.lexicon)
        if c.lens is not None:
            lexicon = apply_lens(lexicon, *c.lens)
        effective: dict[str, LabelRecord] = {}
        for record in read_labels(model_labels_path).values():
            _replay(effective, record)
        for record in read_labels(c.labels).values():
            _replay(effective, record)
        labels_by_id = {i: r.label for i, r in effective.items()}

        for partition, path in series_paths.items():
            series = build_series(docs, binning, lexicon, partition, labels_by_id)
            write_series([series], binning, path)

        relevant_texts = [d.text for d in docs if labels_by_id.get(d.id) == LABEL_RELEVANT]
        other_texts = [d.text for d in docs if labels_by_id.get(d.id) not in (None, LABEL_RELEVANT)]
        ref = FrequencyDistribution.from_counts(count_tokens(other_texts, 1))
        comp = FrequencyDistribution.from_counts(count_tokens(relevant_texts, 1))
        report = shift_contributions(ref, comp, lexicon)
        write_shift_report(report, shift_path)
        divergence = rtd(comp, ref, RtdConfig(alpha=c.alpha))
        write_rtd_report(divergence, rtd_dir, corpus_names=("R", "NR"))

    runner.run_stage(
        "measure",
        [filtered_corpus, c.lexicon, c.labels, model_labels_path],
        {"alpha": c.alpha, "lens": c.lens, "epoch": c.epoch, "bin_days": c.bin_days},
        measure_outputs,
        build_measure,
    )

    return runner.write_manifest()
