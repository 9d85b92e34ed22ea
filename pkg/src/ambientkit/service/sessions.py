"""Labeling session queues.

A session owns an ordered view over the corpus. Documents leave the queue
when the store holds a human label for them or when this session skipped
them; model labels never hide a document, since model output is exactly
what human labeling is meant to correct.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass, field

from ..errors import ExhaustedSample
from ..labels import LabelStore, SOURCE_HUMAN

STRATEGY_RANDOM = "random"
STRATEGY_UNCERTAINTY = "uncertainty"
STRATEGIES = (STRATEGY_RANDOM, STRATEGY_UNCERTAINTY)


def _human_labeled(store: LabelStore, doc_id: str) -> bool:
    record = store.get(doc_id)
    return record is not None and record.source == SOURCE_HUMAN


@dataclass
class LabelSession:
    name: str
    order: list[str]  # queue order; uncertainty sessions re-rank live instead
    strategy: str
    cursor: int = 0
    skipped: set[str] = field(default_factory=set)
    counts: dict[str, int] = field(default_factory=lambda: {"R": 0, "NR": 0, "skipped": 0})

    def next_to_label(self, store: LabelStore, scores: dict[str, float] | None) -> str:
        if self.strategy == STRATEGY_UNCERTAINTY:
            return self._next_uncertain(store, scores or {})
        while self.cursor < len(self.order):
            doc_id = self.order[self.cursor]
            if doc_id in self.skipped or _human_labeled(store, doc_id):
                self.cursor += 1
                continue
            return doc_id
        raise ExhaustedSample(f"session {self.name!r} has no documents left")

    def _next_uncertain(self, store: LabelStore, scores: dict[str, float]) -> str:
        best: str | None = None
        best_key: tuple[float, str] | None = None
        for doc_id in self.order:
            if doc_id in self.skipped or _human_labeled(store, doc_id):
                continue
            # Unscored documents count as maximally uncertain.
            distance = abs(scores.get(doc_id, 0.5) - 0.5)
            key = (distance, doc_id)
            if best_key is None or key < best_key:
                best, best_key = doc_id, key
        if best is None:
            raise ExhaustedSample(f"session {self.name!r} has no documents left")
        return best

    def record_label(self, label: str):
        self.counts[label] = self.counts.get(label, 0) + 1

    def record_skip(self, doc_id: str):
        if doc_id not in self.skipped:
            self.skipped.add(doc_id)
            self.counts["skipped"] += 1


class SessionManager:
    def __init__(self, corpus_ids: list[str], strategy: str, seed: int = 0):
        if strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}")
        self._corpus_ids = list(corpus_ids)
        self._strategy = strategy
        self._seed = seed
        self._sessions: dict[str, LabelSession] = {}
        self._mutex = threading.Lock()

    def get(self, name: str) -> LabelSession:
        with self._mutex:
            session = self._sessions.get(name)
            if session is None:
                order = list(self._corpus_ids)
                if self._strategy == STRATEGY_RANDOM:
                    random.Random(f"{self._seed}:{name}").shuffle(order)
                session = LabelSession(name=name, order=order, strategy=self._strategy)
                self._sessions[name] = session
            return session

    def total_skipped(self) -> int:
        with self._mutex:
            return sum(s.counts["skipped"] for s in self._sessions.values())
