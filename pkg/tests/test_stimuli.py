from __future__ import annotations

import pytest

from ideation_engine.errors import ValidationError
from ideation_engine.stimuli import StimulusKind, generate_search_cues
from ideation_engine.store import StoredIdea, StoredQuestion


def seed(store):
    store.store_idea(StoredIdea(
        idea_id="i1", title="solar cooker lid", description="",
        idea_type="product", context_terms=["solar", "lid"], session_ref="s0"))
    store.store_question(StoredQuestion(
        question_id="q1", text="Why do lids warp?",
        context_terms=["lids", "warp", "solar", "heat", "metal"],
        session_ref="s0", asked_at="2022-01-01T00:00:00+00:00"))


def test_empty_repositories_empty_list(memory_store):
    assert generate_search_cues(memory_store, ["anything"], 5) == []


def test_merge_order_by_similarity(memory_store):
    seed(memory_store)
    # idea matches 1/2 of its terms, question matches 4/5: question first
    cues = generate_search_cues(memory_store, ["lids", "warp", "heat", "metal"], 5)
    assert [c.kind for c in cues] == [StimulusKind.PRIOR_QUESTION]
    cues = generate_search_cues(memory_store, ["solar", "lid"], 5)
    kinds = [c.kind for c in cues]
    assert kinds[0] is StimulusKind.PRIOR_IDEA  # sim 1.0 beats the question's overlap


def test_question_outranks_weaker_idea(memory_store):
    memory_store.store_idea(StoredIdea(
        idea_id="i1", title="idea", description="", idea_type="product",
        context_terms=["alpha", "beta"], session_ref="s0"))
    memory_store.store_question(StoredQuestion(
        question_id="q1", text="question?", context_terms=["alpha"],
        session_ref="s0", asked_at="2022-01-01T00:00:00+00:00"))
    # idea sim = 1/3, question sim = 1/2
    cues = generate_search_cues(memory_store, ["alpha", "xray"], 5)
    assert [c.kind for c in cues] == [StimulusKind.PRIOR_QUESTION,
                                      StimulusKind.PRIOR_IDEA]
    assert cues[0].similarity > cues[1].similarity


def test_limit_one_keeps_best(memory_store):
    seed(memory_store)
    cues = generate_search_cues(memory_store, ["solar", "lid"], 1)
    assert len(cues) == 1
    assert cues[0].kind is StimulusKind.PRIOR_IDEA


def test_similarities_in_half_open_unit_interval(memory_store):
    seed(memory_store)
    for cue in generate_search_cues(memory_store, ["solar", "heat"], 10):
        assert 0.0 < cue.similarity <= 1.0


def test_preconditions(memory_store):
    with pytest.raises(ValidationError):
        generate_search_cues(memory_store, [], 5)
    with pytest.raises(ValidationError):
        generate_search_cues(memory_store, ["x"], 0)
