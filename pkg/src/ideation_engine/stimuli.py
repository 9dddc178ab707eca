"""Search-cue generation: context-similar past ideas and questions as fresh stimuli."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import ValidationError
from .store import KnowledgeStore


class StimulusKind(str, Enum):
    PRIOR_IDEA = "prior_idea"
    PRIOR_QUESTION = "prior_question"
    DECOMPOSITION = "decomposition"


@dataclass(frozen=True)
class Stimulus:
    kind: StimulusKind
    payload: str
    similarity: float


def generate_search_cues(store: KnowledgeStore, context_terms: list[str],
                         limit: int) -> list[Stimulus]:
    """Merge context-matching ideas and questions, interleaved by similarity.

    Ties break on kind (prior_idea before prior_question, lexicographic) and
    then payload so output is deterministic.
    """
    if not context_terms:
        raise ValidationError("context_terms must be non-empty")
    if limit < 1:
        raise ValidationError("limit must be >= 1")
    cues = [
        Stimulus(StimulusKind.PRIOR_IDEA, idea.title, sim)
        for idea, sim in store.find_ideas_by_context(context_terms, limit)
    ] + [
        Stimulus(StimulusKind.PRIOR_QUESTION, question.text, sim)
        for question, sim in store.find_questions_by_context(context_terms, limit)
    ]
    cues.sort(key=lambda s: (-s.similarity, s.kind.value, s.payload))
    return cues[:limit]
