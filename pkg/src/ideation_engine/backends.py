"""Swappable QA backends: the local pipeline and a scripted mock.

Any backend must keep the answering contract: confidences in [0, 1],
non-increasing order, and an empty list for "no answer". The mock replays
canned responses from a JSON fixture mapping question text to a list of
{text, confidence, source_tag} objects, which makes session replays byte
deterministic.
"""
from __future__ import annotations

import json
import threading
from pathlib import Path
from typing import Optional, Protocol, Sequence

from .errors import BackendError
from .qa import (
    CandidateAnswer,
    DEFAULT_K_HYPOTHESES,
    answer_question,
    extract_concepts,
    extract_relations,
)
from .retrieval import RetrievalIndex, build_index
from .store import KnowledgeStore


class QABackend(Protocol):
    def answer_question(self, text: str, k_hypotheses: int = DEFAULT_K_HYPOTHESES
                        ) -> list[CandidateAnswer]: ...

    def extract_concepts(self, text: str, max_concepts: int) -> list[tuple[str, float]]: ...

    def extract_relations(self, text: str, concepts: Sequence[str]
                          ) -> list[tuple[str, str, str, float]]: ...


class LocalBackend:
    """Runs the in-repo pipeline over the knowledge store.

    The retrieval index is rebuilt lazily whenever the store version moved and
    swapped in atomically, so concurrent queries keep reading the old index
    until the new one is complete.
    """

    def __init__(self, store: KnowledgeStore, k1: float = 1.2, b: float = 0.75,
                 tau: float = 0.15, corpus_ids: Optional[list[str]] = None,
                 w_retrieval: float = 0.5, w_coverage: float = 0.3,
                 w_proximity: float = 0.2):
        self.store = store
        self.k1 = k1
        self.b = b
        self.tau = tau
        self.corpus_ids = corpus_ids
        self.w_retrieval = w_retrieval
        self.w_coverage = w_coverage
        self.w_proximity = w_proximity
        self._index: Optional[RetrievalIndex] = None
        self._build_lock = threading.Lock()

    @property
    def index(self) -> RetrievalIndex:
        current = self._index
        if current is not None and current.store_version == self.store.version:
            return current
        with self._build_lock:
            if self._index is None or self._index.store_version != self.store.version:
                self._index = build_index(self.store, self.corpus_ids, k1=self.k1, b=self.b)
        return self._index

    def answer_question(self, text: str, k_hypotheses: int = DEFAULT_K_HYPOTHESES
                        ) -> list[CandidateAnswer]:
        return answer_question(text, k_hypotheses, self.index, tau=self.tau,
                               w_retrieval=self.w_retrieval,
                               w_coverage=self.w_coverage,
                               w_proximity=self.w_proximity)

    def extract_concepts(self, text: str, max_concepts: int) -> list[tuple[str, float]]:
        return extract_concepts(text, max_concepts, self.index)

    def extract_relations(self, text: str, concepts: Sequence[str]
                          ) -> list[tuple[str, str, str, float]]:
        return extract_relations(text, concepts)


class MockBackend:
    """Replays canned answers from a fixture; extraction stays rule-based."""

    def __init__(self, fixture: str | Path | dict):
        if isinstance(fixture, (str, Path)):
            try:
                fixture = json.loads(Path(fixture).read_text(encoding="utf-8"))
            except OSError as exc:
                raise BackendError(f"cannot read mock fixture: {exc}") from exc
            except json.JSONDecodeError as exc:
                raise BackendError(f"mock fixture is not valid JSON: {exc}") from exc
        if not isinstance(fixture, dict):
            raise BackendError("mock fixture must map question text to answer lists")
        self.fixture = fixture

    def answer_question(self, text: str, k_hypotheses: int = DEFAULT_K_HYPOTHESES
                        ) -> list[CandidateAnswer]:
        canned = self.fixture.get(text, [])
        answers = []
        for position, item in enumerate(canned[:k_hypotheses]):
            try:
                confidence = float(item["confidence"])
                answer = CandidateAnswer(
                    text=str(item["text"]),
                    passage_ref=int(item.get("passage_ref", position)),
                    source_tag=str(item.get("source_tag", "internal_kms")),
                    features={
                        "retrieval_score": confidence,
                        "coverage": confidence,
                        "proximity": confidence,
                    },
                    confidence=confidence,
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise BackendError(f"malformed mock answer for {text!r}: {exc}") from exc
            if not 0.0 <= answer.confidence <= 1.0:
                raise BackendError(f"mock confidence out of range for {text!r}")
            answers.append(answer)
        answers.sort(key=lambda a: (-a.confidence, a.passage_ref))
        return answers

    def extract_concepts(self, text: str, max_concepts: int) -> list[tuple[str, float]]:
        return extract_concepts(text, max_concepts, index=None)

    def extract_relations(self, text: str, concepts: Sequence[str]
                          ) -> list[tuple[str, str, str, float]]:
        return extract_relations(text, concepts)
