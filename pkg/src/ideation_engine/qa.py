"""Local question answering: the four-step pipeline plus concept/relation extraction.

Answering runs question analysis, hypothesis generation (top-k passages by
BM25), evidence scoring (a linear composite of normalized retrieval score,
focus-term coverage and term proximity), and final confidence merging and
ranking (dedup by normalized text, min-max confidence, threshold cut). An
empty result list is the contractual "no answer".
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

from .errors import StateError, ValidationError
from .retrieval import RetrievalIndex, rank_passages
from .text import (
    INTERROGATIVE_TERMS,
    STOP_WORDS,
    content_terms,
    normalize_answer_text,
    raw_tokens,
    split_sentences,
)

# Evidence-scoring feature weights and the no-answer confidence threshold.
W_RETRIEVAL = 0.5
W_COVERAGE = 0.3
W_PROXIMITY = 0.2
CONFIDENCE_THRESHOLD = 0.15
DEFAULT_K_HYPOTHESES = 10


class QuestionKind(str, Enum):
    WHAT = "what"
    WHO = "who"
    WHEN = "when"
    WHERE = "where"
    WHY = "why"
    HOW = "how"
    HOW_MANY = "how_many"
    OTHER = "other"


_KIND_TOKENS = {
    "what": QuestionKind.WHAT,
    "who": QuestionKind.WHO,
    "whom": QuestionKind.WHO,
    "when": QuestionKind.WHEN,
    "where": QuestionKind.WHERE,
    "why": QuestionKind.WHY,
    "how": QuestionKind.HOW,
}


@dataclass(frozen=True)
class QuestionAnalysis:
    question_text: str
    question_kind: QuestionKind
    focus_terms: tuple[str, ...]
    context_terms: tuple[str, ...]


@dataclass(frozen=True)
class CandidateAnswer:
    text: str
    passage_ref: int
    source_tag: str
    features: dict[str, float]
    confidence: float


@dataclass
class ExtractedKnowledge:
    """Concepts and relations distilled from answer text, pending approval."""
    concepts: list[tuple[str, float]] = field(default_factory=list)
    relations: list[tuple[str, str, str, float]] = field(default_factory=list)


def analyze_question(text: str) -> QuestionAnalysis:
    """Classify the interrogative and derive context/focus term lists.

    Kind is the first interrogative token, with "how many" checked before
    "how". Context terms are the stop-word-filtered tokens; focus terms
    additionally drop interrogative scaffolding.
    """
    if not text or not text.strip():
        raise ValidationError("question text must be non-empty")
    tokens = raw_tokens(text)
    if not any(any(c.isalpha() for c in tok) for tok in tokens):
        raise ValidationError("question has no alphabetic tokens")

    kind = QuestionKind.OTHER
    for position, token in enumerate(tokens):
        if token == "how" and position + 1 < len(tokens) and tokens[position + 1] == "many":
            kind = QuestionKind.HOW_MANY
            break
        if token in _KIND_TOKENS:
            kind = _KIND_TOKENS[token]
            break

    context = _dedup(content_terms(text))
    focus = tuple(t for t in context if t not in INTERROGATIVE_TERMS)
    return QuestionAnalysis(
        question_text=text, question_kind=kind,
        focus_terms=focus, context_terms=context,
    )


def _dedup(terms: Sequence[str]) -> tuple[str, ...]:
    seen: dict[str, None] = {}
    for term in terms:
        seen.setdefault(term, None)
    return tuple(seen)


def _min_window_width(tokens: list[str], terms: set[str]) -> int:
    """Width (last index - first index) of the smallest token window covering
    every term in ``terms``; 0 when at most one term occurs."""
    positions = [i for i, tok in enumerate(tokens) if tok in terms]
    present = {tokens[i] for i in positions}
    if len(present) <= 1:
        return 0
    best = len(tokens)
    for start_at, start_pos in enumerate(positions):
        seen = set()
        for pos in positions[start_at:]:
            seen.add(tokens[pos])
            if seen == present:
                best = min(best, pos - start_pos)
                break
    return best


def answer_question(text: str, k_hypotheses: int, index: Optional[RetrievalIndex],
                    tau: float = CONFIDENCE_THRESHOLD,
                    w_retrieval: float = W_RETRIEVAL,
                    w_coverage: float = W_COVERAGE,
                    w_proximity: float = W_PROXIMITY) -> list[CandidateAnswer]:
    """Run the four answering steps; an empty list means "no answer"."""
    if index is None:
        raise StateError("retrieval index has not been built")
    if k_hypotheses < 1:
        raise ValidationError("k_hypotheses must be >= 1")

    analysis = analyze_question(text)
    focus = list(analysis.focus_terms)
    if not focus:
        return []

    # hypothesis generation
    ranked = rank_passages(focus, index, k_hypotheses)
    if not ranked:
        return []
    max_score = ranked[0][1]

    # hypothesis evidence scoring
    focus_set = set(focus)
    scored: list[tuple[float, float, dict[str, float], object]] = []
    for passage, retrieval_score in ranked:
        tokens = passage.tokens
        matched = focus_set & set(tokens)
        coverage = len(matched) / len(focus_set)
        width = _min_window_width(tokens, matched)
        proximity = 1.0 / (1.0 + width)
        composite = (w_retrieval * (retrieval_score / max_score)
                     + w_coverage * coverage + w_proximity * proximity)
        features = {
            "retrieval_score": retrieval_score,
            "coverage": coverage,
            "proximity": proximity,
        }
        scored.append((composite, coverage, features, passage))

    # final confidence merging and ranking
    merged: dict[str, tuple[float, float, dict[str, float], object]] = {}
    for entry in scored:
        key = normalize_answer_text(entry[3].text)
        kept = merged.get(key)
        if kept is None or (entry[0], -entry[3].passage_id) > (kept[0], -kept[3].passage_id):
            merged[key] = entry
    candidates = list(merged.values())

    composites = [c[0] for c in candidates]
    low, high = min(composites), max(composites)
    answers = []
    for composite, coverage, features, passage in candidates:
        if high > low:
            confidence = (composite - low) / (high - low)
        else:
            confidence = coverage  # single candidate, or all composites equal
        if confidence < tau:
            continue
        answers.append(CandidateAnswer(
            text=passage.text, passage_ref=passage.passage_id,
            source_tag=index.doc_source.get(passage.doc_id, "internal_kms"),
            features=features, confidence=confidence,
        ))
    answers.sort(key=lambda a: (-a.confidence, a.passage_ref))
    return answers


def _concept_idf(term: str, index: Optional[RetrievalIndex]) -> float:
    if index is None or term not in index.doc_freq:
        return 1.0
    return index.idf(term)


def extract_concepts(text: str, max_concepts: int,
                     index: Optional[RetrievalIndex] = None) -> list[tuple[str, float]]:
    """Top tf-idf unigram/bigram candidates from the text.

    Bigrams require two content tokens adjacent in the raw token stream of one
    sentence. After top-k selection, a unigram fully contained in a selected
    higher-weighted bigram is dropped.
    """
    if not text or not text.strip():
        raise ValidationError("text must be non-empty")
    if max_concepts < 1:
        raise ValidationError("max_concepts must be >= 1")

    counts: dict[str, int] = {}
    for term in content_terms(text):
        counts[term] = counts.get(term, 0) + 1
    for sentence in split_sentences(text):
        tokens = raw_tokens(sentence)
        for left, right in zip(tokens, tokens[1:]):
            if _is_content(left) and _is_content(right):
                label = f"{left} {right}"
                counts[label] = counts.get(label, 0) + 1
    if not counts:
        return []

    weighted = []
    for label, tf in counts.items():
        if " " in label:
            idf = 1.0  # bigrams never appear in the unigram index
        else:
            idf = _concept_idf(label, index)
        weight = tf * idf
        if weight > 0.0:
            weighted.append((label, weight))
    weighted.sort(key=lambda item: (-item[1], item[0]))
    selected = weighted[:max_concepts]

    bigrams = [(label, weight) for label, weight in selected if " " in label]
    kept = []
    for label, weight in selected:
        if " " not in label:
            subsumed = any(label in big.split() and big_weight > weight
                           for big, big_weight in bigrams)
            if subsumed:
                continue
        kept.append((label, weight))
    return kept


def _is_content(token: str) -> bool:
    return len(token) >= 2 and token not in STOP_WORDS


def _find_mention(tokens: list[str], label_tokens: list[str]) -> Optional[tuple[int, int]]:
    """(start, end) token span of the first occurrence of the label, if any."""
    width = len(label_tokens)
    for start in range(len(tokens) - width + 1):
        if tokens[start:start + width] == label_tokens:
            return start, start + width - 1
    return None


def extract_relations(text: str, concepts: Sequence[str]
                      ) -> list[tuple[str, str, str, float]]:
    """One relation per unordered concept pair co-occurring in a sentence.

    The relation label is the lowest-index non-stop-word token between the two
    mentions in the earliest co-occurring sentence ("co-occurs" when none);
    the weight counts co-occurring sentences; endpoints are ordered by first
    appearance in the text.
    """
    if not concepts:
        raise ValidationError("concepts must be non-empty")
    labels = [c.lower() for c in concepts]
    sentences = [raw_tokens(s) for s in split_sentences(text)]

    mentions: dict[str, list[tuple[int, tuple[int, int]]]] = {label: [] for label in labels}
    for sentence_index, tokens in enumerate(sentences):
        for label in labels:
            span = _find_mention(tokens, label.split())
            if span is not None:
                mentions[label].append((sentence_index, span))

    first_seen = {
        label: (entries[0][0], entries[0][1][0])
        for label, entries in mentions.items() if entries
    }

    relations = []
    for i in range(len(labels)):
        for j in range(i + 1, len(labels)):
            a, b = labels[i], labels[j]
            if a == b or a not in first_seen or b not in first_seen:
                continue
            sentences_a = {s for s, _ in mentions[a]}
            sentences_b = {s for s, _ in mentions[b]}
            shared = sorted(sentences_a & sentences_b)
            if not shared:
                continue
            first_sentence = shared[0]
            span_a = next(span for s, span in mentions[a] if s == first_sentence)
            span_b = next(span for s, span in mentions[b] if s == first_sentence)
            earlier, later = (span_a, span_b) if span_a[0] <= span_b[0] else (span_b, span_a)
            between = sentences[first_sentence][earlier[1] + 1:later[0]]
            label = next((tok for tok in between if tok not in STOP_WORDS), "co-occurs")
            src, dst = (a, b) if first_seen[a] <= first_seen[b] else (b, a)
            relations.append((src, dst, label, float(len(shared))))
    relations.sort(key=lambda r: (r[0], r[1]))
    return relations
