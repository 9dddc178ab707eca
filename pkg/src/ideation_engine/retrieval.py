"""Sentence-passage retrieval index with BM25 scoring.

Each indexed passage is one sentence of a stored document (boundary: . ? !
followed by whitespace, plus newlines). The index is immutable once built;
rebuilding publishes a fresh object so concurrent readers are never blocked.

Scoring uses the standard BM25 closed form

    idf(t) = ln(1 + (N - df(t) + 0.5) / (df(t) + 0.5))
    score  = sum over matching query terms of
             idf(t) * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len / avg_len))

with k1 = 1.2 and b = 0.75 by default. Closed-form evaluation on every
passage is cheap enough here that the inverted index exists mainly to keep
doc_freq exact and queries sub-linear in corpus size.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Iterable, Optional

from .errors import StateError
from .store import KnowledgeStore
from .text import raw_tokens, split_sentences

DEFAULT_K1 = 1.2
DEFAULT_B = 0.75


@dataclass(frozen=True)
class Passage:
    passage_id: int
    doc_id: str
    sentence_index: int
    text: str
    term_vector: dict[str, int]
    length: int

    @property
    def tokens(self) -> list[str]:
        return raw_tokens(self.text)


@dataclass(frozen=True)
class RetrievalIndex:
    passages: tuple[Passage, ...]
    postings: dict[str, tuple[tuple[int, int], ...]]  # term -> ((passage_id, tf), ...)
    doc_freq: dict[str, int]
    passage_count: int
    avg_length: float
    built_at: str
    k1: float = DEFAULT_K1
    b: float = DEFAULT_B
    store_version: int = -1
    doc_source: dict[str, str] = field(default_factory=dict)  # doc_id -> source_tag

    def idf(self, term: str) -> float:
        df = self.doc_freq.get(term, 0)
        if df == 0:
            return 0.0
        return math.log(1.0 + (self.passage_count - df + 0.5) / (df + 0.5))


def build_index(store: KnowledgeStore,
                corpus_ids: Optional[Iterable[str]] = None,
                k1: float = DEFAULT_K1, b: float = DEFAULT_B) -> RetrievalIndex:
    """Split the selected corpora into sentence passages and index them.

    Documents are processed in doc_id order so identical corpus bytes always
    produce identical index statistics. An empty selection yields a valid
    index with passage_count 0.
    """
    passages: list[Passage] = []
    doc_source: dict[str, str] = {}
    for doc in store.corpus_documents(corpus_ids):
        doc_source[doc.doc_id] = doc.source_tag.value
        for sentence_index, sentence in enumerate(split_sentences(doc.body)):
            vector = dict(Counter(raw_tokens(sentence)))
            length = sum(vector.values())
            if length == 0:
                continue
            passages.append(Passage(
                passage_id=len(passages), doc_id=doc.doc_id,
                sentence_index=sentence_index, text=sentence,
                term_vector=vector, length=length,
            ))

    postings: dict[str, list[tuple[int, int]]] = {}
    for passage in passages:
        for term, tf in passage.term_vector.items():
            postings.setdefault(term, []).append((passage.passage_id, tf))

    total_length = sum(p.length for p in passages)
    return RetrievalIndex(
        passages=tuple(passages),
        postings={term: tuple(entries) for term, entries in sorted(postings.items())},
        doc_freq={term: len(entries) for term, entries in postings.items()},
        passage_count=len(passages),
        avg_length=total_length / len(passages) if passages else 0.0,
        built_at=datetime.now(timezone.utc).isoformat(),
        k1=k1, b=b,
        store_version=store.version,
        doc_source=doc_source,
    )


def score_passage(query_terms: Iterable[str], passage: Passage, index: RetrievalIndex) -> float:
    """BM25 score of one passage; 0 when no query term matches."""
    if index is None:
        raise StateError("retrieval index has not been built")
    score = 0.0
    norm = index.k1 * (1.0 - index.b + index.b * passage.length / index.avg_length) \
        if index.avg_length > 0 else index.k1
    for term in query_terms:
        tf = passage.term_vector.get(term, 0)
        if tf == 0:
            continue
        score += index.idf(term) * tf * (index.k1 + 1.0) / (tf + norm)
    return score


def rank_passages(query_terms: list[str], index: RetrievalIndex, k: int
                  ) -> list[tuple[Passage, float]]:
    """Top-k passages with positive score; ties broken by lower passage_id."""
    if index is None:
        raise StateError("retrieval index has not been built")
    candidate_ids: set[int] = set()
    for term in set(query_terms):
        for passage_id, _ in index.postings.get(term, ()):
            candidate_ids.add(passage_id)
    scored = []
    for passage_id in candidate_ids:
        passage = index.passages[passage_id]
        score = score_passage(query_terms, passage, index)
        if score > 0.0:
            scored.append((passage, score))
    scored.sort(key=lambda item: (-item[1], item[0].passage_id))
    return scored[:k]
