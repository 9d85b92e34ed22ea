"""Linear relevance classifier over fixed embedding vectors.

A logistic-loss linear head trained by deterministic full-batch gradient
descent from zero initialization, so identical inputs and config give
bit-identical weights, and epochs=0 means every score is exactly 0.5.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .embeddings import EmbeddingMatrix
from .errors import (
    EvalError,
    InsufficientDocuments,
    PredictError,
    SingleClassError,
    TrainError,
)
from .labels import LABEL_NOT_RELEVANT, LABEL_RELEVANT

DEFAULT_SAMPLE_SIZE = 1000
DEFAULT_TRAIN_FRAC = 0.67


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.5
    epochs: int = 500
    l2: float = 0.0
    class_weight: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if self.l2 < 0:
            raise ValueError("l2 must be >= 0")


@dataclass(frozen=True)
class LinearModel:
    weights: np.ndarray  # float64, shape (dim,)
    bias: float
    threshold: float = 0.5
    train_config: TrainConfig = field(default_factory=TrainConfig)

    def __post_init__(self):
        if not 0.0 < self.threshold < 1.0:
            raise ValueError("threshold must be in (0, 1)")

    @property
    def dim(self) -> int:
        return int(self.weights.shape[0])


@dataclass(frozen=True)
class EvalReport:
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    fn: int
    tn: int
    undefined: bool  # some metric had a zero denominator and was set to 0
    train_frac: float | None = None
    seed: int | None = None

    @property
    def n(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


def sample_for_labeling(ids: Sequence[str], n: int = DEFAULT_SAMPLE_SIZE, seed: int = 0) -> list[str]:
    """Uniform sample of ids without replacement, deterministic under seed."""
    if n > len(ids):
        raise InsufficientDocuments(f"asked for {n} of {len(ids)} documents")
    if n < 0:
        raise ValueError("n must be >= 0")
    return random.Random(seed).sample(list(ids), n)


def split(
    ids: Sequence[str],
    labels_by_id: Mapping[str, str],
    train_frac: float = DEFAULT_TRAIN_FRAC,
    seed: int = 0,
    stratified: bool = False,
) -> tuple[list[str], list[str]]:
    """Seeded shuffle then prefix split; train size = round(train_frac * n)."""
    if not 0.0 < train_frac < 1.0:
        raise ValueError("train_frac must be in (0, 1)")
    if len(ids) < 2:
        raise ValueError("need at least 2 labeled ids")
    seen = {labels_by_id[i] for i in ids}
    if len(seen) < 2:
        raise SingleClassError(f"all labels are {seen.pop()!r}")

    rng = random.Random(seed)
    if stratified:
        train: list[str] = []
        test: list[str] = []
        for label in (LABEL_RELEVANT, LABEL_NOT_RELEVANT):
            members = [i for i in ids if labels_by_id[i] == label]
            rng.shuffle(members)
            cut = round(train_frac * len(members))
            train.extend(members[:cut])
            test.extend(members[cut:])
        return train, test

    shuffled = list(ids)
    rng.shuffle(shuffled)
    cut = round(train_frac * len(shuffled))
    return shuffled[:cut], shuffled[cut:]


def _logistic(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=np.float64)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _gather(
    embeddings: EmbeddingMatrix, labels_by_id: Mapping[str, str], train_ids: Sequence[str]
) -> tuple[np.ndarray, np.ndarray]:
    index = embeddings.index_of()
    rows = []
    signs = []
    for doc_id in train_ids:
        row = index.get(doc_id)
        if row is None:
            raise TrainError(f"no embedding row for id {doc_id!r}")
        label = labels_by_id.get(doc_id)
        if label is None:
            raise TrainError(f"no label for id {doc_id!r}")
        rows.append(row)
        signs.append(1.0 if label == LABEL_RELEVANT else -1.0)
    x = embeddings.vectors[rows].astype(np.float64)
    y = np.asarray(signs, dtype=np.float64)
    return x, y


def train(
    embeddings: EmbeddingMatrix,
    labels_by_id: Mapping[str, str],
    train_ids: Sequence[str],
    config: TrainConfig | None = None,
) -> LinearModel:
    config = config or TrainConfig()
    if not train_ids:
        raise TrainError("empty training set")
    x, y = _gather(embeddings, labels_by_id, train_ids)

    if config.class_weight:
        n = len(y)
        n_pos = int((y > 0).sum())
        n_neg = n - n_pos
        if n_pos == 0 or n_neg == 0:
            raise SingleClassError("class weighting needs both classes present")
        sample_weight = np.where(y > 0, n / (2.0 * n_pos), n / (2.0 * n_neg))
    else:
        sample_weight = np.ones_like(y)
    total_weight = sample_weight.sum()

    w = np.zeros(x.shape[1], dtype=np.float64)
    b = 0.0
    for _ in range(config.epochs):
        z = x @ w + b
        wrong = _logistic(-y * z)  # P(misclassified) under current model
        pull = sample_weight * y * wrong
        grad_w = -(x.T @ pull) / total_weight + config.l2 * w
        grad_b = -pull.sum() / total_weight
        w -= config.learning_rate * grad_w
        b -= config.learning_rate * grad_b

    w.setflags(write=False)
    return LinearModel(weights=w, bias=float(b), train_config=config)


def predict(
    model: LinearModel, embeddings: EmbeddingMatrix
) -> dict[str, tuple[float, str]]:
    """Scores and labels in embedding row order; label R iff score >= threshold."""
    if embeddings.dim != model.dim:
        raise PredictError(
            f"model dim {model.dim} != embedding dim {embeddings.dim}"
        )
    scores = _logistic(embeddings.vectors.astype(np.float64) @ model.weights + model.bias)
    out: dict[str, tuple[float, str]] = {}
    for doc_id, score in zip(embeddings.ids, scores):
        score = float(score)
        label = LABEL_RELEVANT if score >= model.threshold else LABEL_NOT_RELEVANT
        out[doc_id] = (score, label)
    return out


def evaluate(
    predictions: Mapping[str, str],
    truth: Mapping[str, str],
    train_frac: float | None = None,
    seed: int | None = None,
) -> EvalReport:
    """Positive-class (R) precision/recall/F1 over matching id sets."""
    if set(predictions) != set(truth):
        missing = sorted(set(truth) - set(predictions))[:3]
        extra = sorted(set(predictions) - set(truth))[:3]
        raise EvalError(f"id sets differ (missing {missing}, extra {extra})")
    tp = fp = fn = tn = 0
    for doc_id, predicted in predictions.items():
        actual = truth[doc_id]
        if predicted == LABEL_RELEVANT:
            if actual == LABEL_RELEVANT:
                tp += 1
            else:
                fp += 1
        elif actual == LABEL_RELEVANT:
            fn += 1
        else:
            tn += 1

    undefined = False
    if tp + fp:
        precision = tp / (tp + fp)
    else:
        precision, undefined = 0.0, True
    if tp + fn:
        recall = tp / (tp + fn)
    else:
        recall, undefined = 0.0, True
    if precision + recall:
        f1 = 2.0 * precision * recall / (precision + recall)
    else:
        f1, undefined = 0.0, True
    return EvalReport(
        precision=precision,
        recall=recall,
        f1=f1,
        tp=tp,
        fp=fp,
        fn=fn,
        tn=tn,
        undefined=undefined,
        train_frac=train_frac,
        seed=seed,
    )


def save_model(model: LinearModel, path: str | Path):
    config = model.train_config
    payload = {
        "dim": model.dim,
        "weights": [float(v) for v in model.weights],
        "bias": model.bias,
        "threshold": model.threshold,
        "train_config": {
            "learning_rate": config.learning_rate,
            "epochs": config.epochs,
            "l2": config.l2,
            "class_weight": config.class_weight,
            "seed": config.seed,
        },
    }
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def load_model(path: str | Path) -> LinearModel:
    payload = json.loads(Path(path).read_text())
    weights = np.asarray(payload["weights"], dtype=np.float64)
    if weights.shape[0] != payload["dim"]:
        raise PredictError(f"{path}: weight length != declared dim")
    if not all(map(math.isfinite, payload["weights"])):
        raise PredictError(f"{path}: non-finite weight")
    weights.setflags(write=False)
    cfg = payload.get("train_config", {})
    return LinearModel(
        weights=weights,
        bias=float(payload["bias"]),
        threshold=float(payload.get("threshold", 0.5)),
        train_config=TrainConfig(
            learning_rate=cfg.get("learning_rate", 0.5),
            epochs=cfg.get("epochs", 500),
            l2=cfg.get("l2", 0.0),
            class_weight=cfg.get("class_weight", False),
            seed=cfg.get("seed", 0),
        ),
    )
