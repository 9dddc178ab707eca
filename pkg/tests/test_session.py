from __future__ import annotations

import pytest

from ideation_engine.backends import MockBackend
from ideation_engine.errors import (
    BackendError,
    NotFoundError,
    StateError,
    ValidationError,
)
from ideation_engine.evaluation import WeightVector, aggregate_subscores
from ideation_engine.session import (
    ConceptSource,
    Phase,
    SessionEngine,
    SessionStatus,
    read_operation_log,
)
from ideation_engine.store import KnowledgeStore, StoredQuestion

from conftest import MOCK_FIXTURE, FixedClock, reach_ideation, start_session


class FailingBackend:
    def answer_question(self, text, k_hypotheses=10):
        raise BackendError("backend offline")

    def extract_concepts(self, text, max_concepts):
        raise BackendError("backend offline")

    def extract_relations(self, text, concepts):
        raise BackendError("backend offline")


def eval_scores():
    return aggregate_subscores(novelty=0.6, usefulness=0.6, quality=0.6,
                               surprisingness=0.6)


# ----------------------------------------------------------------------
# create_session

def test_create_session_decomposition_concepts(engine):
    session = engine.create_session(
        "the company wants to add new features to the product XYZ",
        ["features", "drawbacks"], session_id="s1")
    assert session.current_round.number == 1
    assert session.current_phase is Phase.STIMULATION
    labels = {c.label for c in session.current_round.approved_concepts()}
    assert labels == {"features", "drawbacks"}
    assert all(c.source is ConceptSource.DECOMPOSITION
               for c in session.current_round.concepts)
    assert {"features", "drawbacks"} <= set(session.context_terms)


def test_create_session_empty_decomposition(engine):
    session = engine.create_session("statement here", [], session_id="s1")
    assert session.current_round.concepts == []


def test_create_session_empty_statement_rejected(engine):
    with pytest.raises(ValidationError):
        engine.create_session("", ["x"])


def test_create_session_normalizes_decomposition_labels(engine):
    session = engine.create_session(
        "labels normalize", ["Pot", "pot", "  ", "Lid"], session_id="s1")
    assert [c.label for c in session.current_round.concepts] == ["pot", "lid"]


# ----------------------------------------------------------------------
# ask_question

def test_ask_answerable_question_stages_pending(engine):
    start_session(engine)
    answers, suggestions, pending = engine.ask_question("s1", "What helps the gadget?")
    assert answers and suggestions == []
    assert pending["concepts"]
    session = engine.sessions["s1"]
    assert session.current_phase is Phase.QA
    assert len(session.question_log) == 1
    assert session.question_log[0].analysis.question_kind.value == "what"
    assert all(not c["approved"] for c in pending["concepts"])
    # persisted to the questions repository with its confidence
    stored = engine.store.get_question("s1-q1")
    assert stored.best_confidence == answers[0].confidence


def test_ask_unanswerable_question_suggests_same_context(engine):
    engine.store.store_question(StoredQuestion(
        question_id="old-1", text="Which gadget colors exist?",
        context_terms=["colors", "exist", "gadget"], session_ref="old",
        asked_at="2021-01-01T00:00:00+00:00"))
    start_session(engine)
    answers, suggestions, pending = engine.ask_question(
        "s1", "Which gadget colors sell best?")
    assert answers == []
    assert suggestions == ["Which gadget colors exist?"]
    assert pending == {"concepts": [], "relations": []}
    stored = engine.store.get_question("s1-q1")
    assert stored.best_confidence is None


def test_resubmitting_a_suggestion_marks_acceptance(engine):
    engine.store.store_question(StoredQuestion(
        question_id="old-1", text="What helps the gadget?",
        context_terms=["colors", "gadget"], session_ref="old",
        asked_at="2021-01-01T00:00:00+00:00"))
    start_session(engine)
    _, suggestions, _ = engine.ask_question("s1", "Which gadget colors sell best?")
    assert suggestions
    engine.ask_question("s1", suggestions[0])
    assert engine.sessions["s1"].question_log[0].accepted_suggestion == 0


def test_ask_on_closed_session_is_state_error(engine):
    state = reach_ideation(engine)
    engine.create_idea("s1", "idea", "", "other",
                       [state.current_round.approved_concepts()[0].concept_id])
    engine.close_session("s1")
    with pytest.raises(StateError):
        engine.ask_question("s1", "What now?")


def test_backend_error_leaves_state_unchanged(memory_store, clock):
    engine = SessionEngine(memory_store, FailingBackend(), clock=clock)
    start_session(engine)
    before = engine.state_digest("s1")
    log_before = len(engine.operation_log("s1"))
    with pytest.raises(BackendError):
        engine.ask_question("s1", "What helps the gadget?")
    assert engine.state_digest("s1") == before
    assert engine.sessions["s1"].current_phase is Phase.STIMULATION
    assert len(engine.operation_log("s1")) == log_before


# ----------------------------------------------------------------------
# approve_knowledge

def test_approve_subset_drops_unselected_and_orphan_relations(engine):
    start_session(engine)
    _, _, pending = engine.ask_question("s1", "What helps the gadget?")
    round_ = engine.sessions["s1"].current_round
    by_label = {c.label: c.concept_id for c in round_.pending_concepts()}
    keep = by_label["gadget"]
    relations = [r.relation_id for r in round_.relations if not r.approved]
    engine.approve_knowledge("s1", [keep], relations)
    round_ = engine.sessions["s1"].current_round
    approved_labels = {c.label for c in round_.approved_concepts()}
    assert "gadget" in approved_labels
    assert not round_.pending_concepts()  # unselected pending discarded
    # every surviving relation has both endpoints approved
    approved_ids = {c.concept_id for c in round_.approved_concepts()}
    for relation in round_.relations:
        assert relation.approved
        assert {relation.from_concept, relation.to_concept} <= approved_ids


def test_approve_duplicate_label_merges_weights(engine):
    start_session(engine)
    engine.ask_question("s1", "What helps the gadget?")
    round_ = engine.sessions["s1"].current_round
    first_pending = {c.label: c for c in round_.pending_concepts()}
    target = first_pending["gadget"]
    weight_before = target.weight
    engine.approve_knowledge("s1", [target.concept_id], [])
    # ask again: the same label is extracted and staged pending again
    engine.ask_question("s1", "What helps the gadget?")
    round_ = engine.sessions["s1"].current_round
    again = {c.label: c for c in round_.pending_concepts()}["gadget"]
    engine.approve_knowledge("s1", [again.concept_id], [])
    merged = [c for c in round_.approved_concepts() if c.label == "gadget"]
    assert len(merged) == 1
    assert merged[0].weight > weight_before


def test_approve_all_grows_by_distinct_pending_labels(engine):
    start_session(engine)
    engine.ask_question("s1", "What helps the gadget?")
    round_ = engine.sessions["s1"].current_round
    pending_labels = {c.label for c in round_.pending_concepts()}
    approved_before = {c.label for c in round_.approved_concepts()}
    engine.approve_knowledge(
        "s1", [c.concept_id for c in round_.pending_concepts()],
        [r.relation_id for r in round_.relations if not r.approved])
    approved_after = {c.label for c in engine.sessions["s1"]
                      .current_round.approved_concepts()}
    assert approved_after == approved_before | pending_labels


def test_approve_unknown_id_not_found(engine):
    start_session(engine)
    engine.ask_question("s1", "What helps the gadget?")
    before = engine.state_digest("s1")
    with pytest.raises(NotFoundError):
        engine.approve_knowledge("s1", ["c999"], [])
    assert engine.state_digest("s1") == before


def test_approval_returns_round_to_stimulation(engine):
    start_session(engine)
    engine.ask_question("s1", "What helps the gadget?")
    assert engine.sessions["s1"].current_phase is Phase.QA
    round_ = engine.sessions["s1"].current_round
    engine.approve_knowledge(
        "s1", [c.concept_id for c in round_.pending_concepts()], [])
    assert engine.sessions["s1"].current_phase is Phase.STIMULATION


# ----------------------------------------------------------------------
# declare_sufficient / create_idea

def test_declare_sufficient_requires_approved_concepts(memory_store, clock):
    engine = SessionEngine(memory_store, MockBackend(dict(MOCK_FIXTURE)), clock=clock)
    engine.create_session("statement without decomposition", [], session_id="s1")
    with pytest.raises(ValidationError):
        engine.declare_sufficient("s1")


def test_declare_sufficient_then_asking_is_state_error(engine):
    reach_ideation(engine)
    with pytest.raises(StateError):
        engine.ask_question("s1", "What helps the gadget?")


def test_create_idea_happy_path(engine):
    state = reach_ideation(engine)
    concept_id = state.current_round.approved_concepts()[0].concept_id
    question_id = state.question_log[0].question_id
    idea = engine.create_idea("s1", "Adding a Bluetooth chip to the pot",
                              "alerting", "product", [concept_id], [question_id])
    assert idea.idea_id == "i1"
    assert engine.sessions["s1"].idea_set[0].title == "Adding a Bluetooth chip to the pot"


def test_create_idea_requires_refs_and_phase(engine):
    state = reach_ideation(engine)
    with pytest.raises(ValidationError):
        engine.create_idea("s1", "no refs", "", "product", [])
    engine2 = SessionEngine(engine.store, engine.backend, clock=FixedClock())
    start_session(engine2, "s2")
    engine2.ask_question("s2", "What helps the gadget?")
    round_ = engine2.sessions["s2"].current_round
    pending_id = round_.pending_concepts()[0].concept_id
    with pytest.raises(StateError):
        engine2.create_idea("s2", "during qa", "", "product", [pending_id])
    # unapproved / foreign-round refs rejected
    with pytest.raises(ValidationError):
        engine.create_idea("s1", "bad ref", "", "product", ["c999"])
    assert state.idea_set == []


# ----------------------------------------------------------------------
# end_round / close_session

def test_end_round_carries_concepts_and_stimuli(engine):
    state = reach_ideation(engine)
    concept_id = state.current_round.approved_concepts()[0].concept_id
    engine.create_idea("s1", "first idea", "", "product", [concept_id])
    carried_labels = {c.label for c in state.current_round.approved_concepts()}
    new_round = engine.end_round("s1")
    assert new_round.number == 2
    assert new_round.phase is Phase.STIMULATION
    assert [s.payload for s in new_round.stimuli] == ["first idea"]
    assert {c.label for c in new_round.approved_concepts()} == carried_labels
    assert all(c.source is ConceptSource.PRIOR_IDEA for c in new_round.concepts)


def test_end_round_zero_ideas(engine):
    reach_ideation(engine)
    new_round = engine.end_round("s1")
    assert new_round.number == 2
    assert new_round.stimuli == []


def test_round_numbering_increments_by_one(engine):
    reach_ideation(engine)
    assert engine.end_round("s1").number == 2
    engine.declare_sufficient("s1")
    assert engine.end_round("s1").number == 3


def test_close_session_exports_and_receipts(engine):
    state = reach_ideation(engine)
    concept_id = state.current_round.approved_concepts()[0].concept_id
    for title in ("idea one", "idea two"):
        idea = engine.create_idea("s1", title, "", "product", [concept_id])
        engine.record_evaluation("s1", idea.idea_id, eval_scores(),
                                 WeightVector(1, 1, 1, 1))
    report = engine.close_session("s1")
    assert len(report.exports) == 2
    assert report.idea_receipts == ["s1-i1", "s1-i2"]
    assert engine.store.get_idea("s1-i1").composite_score is not None
    assert engine.sessions["s1"].status is SessionStatus.CLOSED
    with pytest.raises(StateError):
        engine.close_session("s1")


def test_close_without_ideas_names_quit_rule(engine):
    reach_ideation(engine)
    with pytest.raises(ValidationError) as err:
        engine.close_session("s1")
    assert "quit rule" in str(err.value)


# ----------------------------------------------------------------------
# get_state

def test_snapshot_fresh_session(engine):
    start_session(engine)
    snapshot = engine.get_state("s1")
    assert snapshot["rounds"][0]["number"] == 1
    assert snapshot["rounds"][0]["phase"] == "stimulation"


def test_snapshot_stable_without_writes(engine):
    start_session(engine)
    assert engine.get_state("s1") == engine.get_state("s1")
    assert engine.state_digest("s1") == engine.state_digest("s1")


def test_snapshot_question_count_increments(engine):
    start_session(engine)
    before = len(engine.get_state("s1")["question_log"])
    engine.ask_question("s1", "What helps the gadget?")
    after = len(engine.get_state("s1")["question_log"])
    assert after == before + 1


def test_get_state_unknown_session(engine):
    with pytest.raises(NotFoundError):
        engine.get_state("missing")


# ----------------------------------------------------------------------
# operation log and replay

def full_session_ops(engine, session_id="s1"):
    state = reach_ideation(engine, session_id)
    concept_id = state.current_round.approved_concepts()[0].concept_id
    idea = engine.create_idea(session_id, "logged idea", "desc", "product",
                              [concept_id], [state.question_log[0].question_id])
    engine.record_evaluation(session_id, idea.idea_id, eval_scores(),
                             WeightVector(2, 1, 1, 1))
    engine.end_round(session_id)
    engine.declare_sufficient(session_id)
    engine.close_session(session_id)


def test_log_has_one_record_per_mutation(engine):
    full_session_ops(engine)
    ops = [r["op"] for r in engine.operation_log("s1")]
    assert ops == ["create_session", "ask_question", "approve_knowledge",
                   "declare_sufficient", "create_idea", "record_evaluation",
                   "end_round", "declare_sufficient", "close_session"]


def test_replay_reproduces_digest_in_memory(engine, memory_store):
    full_session_ops(engine)
    live = engine.state_digest("s1")
    fresh = SessionEngine(KnowledgeStore(), MockBackend(dict(MOCK_FIXTURE)))
    replayed = fresh.replay_log(engine.operation_log("s1"))
    assert replayed == live


def test_replay_from_disk_log(tmp_path, clock):
    data_dir = tmp_path / "data"
    store = KnowledgeStore(root=data_dir, clock=clock)
    engine = SessionEngine(store, MockBackend(dict(MOCK_FIXTURE)),
                           data_dir=data_dir, clock=clock)
    full_session_ops(engine)
    live = engine.state_digest("s1")
    log_path = data_dir / "sessions" / "s1.jsonl"
    assert log_path.is_file()

    fresh = SessionEngine(KnowledgeStore(root=data_dir),
                          MockBackend(dict(MOCK_FIXTURE)))
    assert fresh.replay_log(read_operation_log(log_path)) == live


def test_restart_recovers_sessions(tmp_path, clock):
    data_dir = tmp_path / "data"
    store = KnowledgeStore(root=data_dir, clock=clock)
    engine = SessionEngine(store, MockBackend(dict(MOCK_FIXTURE)),
                           data_dir=data_dir, clock=clock)
    start_session(engine)
    engine.ask_question("s1", "What helps the gadget?")
    live_digest = engine.state_digest("s1")

    restarted = SessionEngine(KnowledgeStore(root=data_dir),
                              MockBackend(dict(MOCK_FIXTURE)), data_dir=data_dir)
    assert restarted.load_persisted_sessions() == ["s1"]
    assert restarted.state_digest("s1") == live_digest
    # the restarted engine keeps appending to the same log
    round_ = restarted.sessions["s1"].current_round
    restarted.approve_knowledge(
        "s1", [c.concept_id for c in round_.pending_concepts()], [])
    assert len(read_operation_log(data_dir / "sessions" / "s1.jsonl")) == 3
