"""Bundled end-to-end session: two rounds over the electronic cooking-pot corpus.

The walkthrough ingests the mini corpus (manuals + reviews), seeds the
questions repository with two prior-session questions, then drives a full
session: round 1 asks about rival technology, hits the no-answer suggestion
path on an over-broad question and re-asks the first suggestion; round 2 digs
into complaints, approves the mined knowledge, and produces two ideas which
are evaluated, ranked and exported as ontologies on close.

A fixed tick clock plus the scripted mock backend make the closing snapshot
digest identical across runs; the same steps also run against the local
backend for transition-parity checks.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from importlib import resources
from pathlib import Path
from typing import Optional

from .backends import LocalBackend, MockBackend, QABackend
from .errors import ValidationError
from .evaluation import WeightVector, aggregate_subscores
from .session import ClosureReport, SessionEngine, SessionState
from .store import KnowledgeStore, Satisfaction, StoredQuestion

SESSION_ID = "cooking-pot"
PROBLEM = "the company wants to add new features to the product XYZ"
DECOMPOSITION = ["features", "drawbacks"]
PARTICIPANTS = [("facilitator", "engineering"), ("analyst", "marketing")]

QUESTION_RIVALS = "What are the latest technologies used in cooking pots by the rival companies?"
QUESTION_BROAD = "What are the latest technologies in market?"
QUESTION_DISLIKE = "What do people dislike about the pot?"
QUESTION_RATIO = "What is the ratio between negative and positive reviews?"

IDEA_BLUETOOTH = "Adding a Bluetooth chip to the pot"
IDEA_HEAT_METER = "heat meter inside the pot"


def _data_path(name: str) -> Path:
    return Path(str(resources.files("ideation_engine").joinpath("data/scenario", name)))


class TickClock:
    """Deterministic clock: one-minute steps from a fixed start."""

    def __init__(self, start: Optional[datetime] = None, step_seconds: int = 60):
        self.now = start or datetime(2021, 1, 5, 9, 0, 0, tzinfo=timezone.utc)
        self.step = timedelta(seconds=step_seconds)

    def __call__(self) -> datetime:
        current = self.now
        self.now = self.now + self.step
        return current


@dataclass
class ScenarioResult:
    engine: SessionEngine
    store: KnowledgeStore
    session_id: str
    report: ClosureReport
    digest: str
    suggested_questions: list[str]
    transitions: list[tuple[str, int, str]] = field(default_factory=list)


def seed_store(store: KnowledgeStore) -> None:
    """Ingest the mini corpus and pre-seed the questions repository."""
    store.ingest_document(
        "manuals", _data_path("manuals.md").read_text(encoding="utf-8"),
        "markdown", "internal_kms", doc_id="manuals-pot-xyz")
    store.ingest_document(
        "reviews", _data_path("reviews.csv").read_text(encoding="utf-8"),
        "csv_rows", "external", doc_id="reviews-pot-xyz")
    for item in json.loads(_data_path("prior_questions.json").read_text(encoding="utf-8")):
        item["user_satisfaction"] = Satisfaction(item["user_satisfaction"])
        store.store_question(StoredQuestion(**item))


def make_backend(kind: str, store: KnowledgeStore) -> QABackend:
    if kind == "mock":
        return MockBackend(_data_path("mock_answers.json"))
    if kind == "local":
        return LocalBackend(store)
    raise ValidationError(f"unknown scenario backend {kind!r}")


def _concept_ids_for(state: SessionState, labels: list[str], fallback: int) -> list[str]:
    """Approved concept ids for the given labels, or the first few approved."""
    approved = state.current_round.approved_concepts()
    by_label = {c.label: c.concept_id for c in approved}
    ids = [by_label[label] for label in labels if label in by_label]
    if ids:
        return ids
    return [c.concept_id for c in approved[:fallback]]


def run_cooking_pot_scenario(data_dir: Optional[str | Path] = None,
                             backend: str = "mock") -> ScenarioResult:
    clock = TickClock()
    store = KnowledgeStore(root=data_dir, clock=clock)
    seed_store(store)
    engine = SessionEngine(store, make_backend(backend, store),
                           data_dir=data_dir, clock=clock)
    transitions: list[tuple[str, int, str]] = []

    def mark(op: str) -> None:
        state = engine.sessions[SESSION_ID]
        transitions.append((op, state.current_round.number, state.current_phase.value))

    # round 1: problem decomposition, questions, suggestion path
    engine.create_session(PROBLEM, DECOMPOSITION, PARTICIPANTS,
                          time="2021-01-05 09:00", place="innovation lab",
                          session_id=SESSION_ID)
    mark("create_session")

    engine.ask_question(SESSION_ID, QUESTION_RIVALS)
    mark("ask_question")

    _, suggestions, _ = engine.ask_question(SESSION_ID, QUESTION_BROAD)
    mark("ask_question")
    if not suggestions:
        raise ValidationError("expected suggestions for the over-broad question")

    engine.ask_question(SESSION_ID, suggestions[0])
    mark("ask_question")

    state = engine.sessions[SESSION_ID]
    round_ = state.current_round
    engine.approve_knowledge(
        SESSION_ID,
        [c.concept_id for c in round_.pending_concepts()],
        [r.relation_id for r in round_.relations if not r.approved])
    mark("approve_knowledge")

    engine.declare_sufficient(SESSION_ID)
    mark("declare_sufficient")
    engine.end_round(SESSION_ID)
    mark("end_round")

    # round 2: product flaws, two ideas, evaluation with group-chosen weights
    engine.ask_question(SESSION_ID, QUESTION_DISLIKE)
    mark("ask_question")
    engine.ask_question(SESSION_ID, QUESTION_RATIO)
    mark("ask_question")

    round_ = engine.sessions[SESSION_ID].current_round
    engine.approve_knowledge(
        SESSION_ID,
        [c.concept_id for c in round_.pending_concepts()],
        [r.relation_id for r in round_.relations if not r.approved])
    mark("approve_knowledge")

    engine.declare_sufficient(SESSION_ID)
    mark("declare_sufficient")

    state = engine.sessions[SESSION_ID]
    dislike_question = next(q.question_id for q in state.question_log
                            if q.text == QUESTION_DISLIKE)
    ratio_question = next(q.question_id for q in state.question_log
                          if q.text == QUESTION_RATIO)

    bluetooth_idea = engine.create_idea(
        SESSION_ID, IDEA_BLUETOOTH,
        "Pair the pot with phones so it can push cooking alerts.",
        "product",
        _concept_ids_for(state, ["bluetooth", "chip", "bluetooth chip"], fallback=2),
        [dislike_question])
    mark("create_idea")

    heat_meter_idea = engine.create_idea(
        SESSION_ID, IDEA_HEAT_METER,
        "Report the inner temperature so food stops overheating.",
        "product",
        _concept_ids_for(state, ["heat", "meter", "heat meter"], fallback=2),
        [dislike_question, ratio_question])
    mark("create_idea")

    # the group weighted novelty and usefulness highest, with quality driven
    # by feasibility; surprisingness mattered least
    weights = WeightVector(novelty=3.0, usefulness=3.0, quality=2.0, surprisingness=1.0)
    engine.record_evaluation(
        SESSION_ID, bluetooth_idea.idea_id,
        aggregate_subscores(
            novelty=0.8,
            specificity=0.7, feasibility=0.8, relevance=0.8,
            acceptability=0.8, completeness=0.7, implicational_explicitness=0.7,
            unusual=0.5, unexpected=0.4,
        ), weights)
    mark("record_evaluation")
    engine.record_evaluation(
        SESSION_ID, heat_meter_idea.idea_id,
        aggregate_subscores(
            novelty=0.5,
            specificity=0.7, feasibility=0.7, relevance=0.8,
            acceptability=0.6, completeness=0.6, implicational_explicitness=0.5,
            unusual=0.3, unexpected=0.2,
        ), weights)
    mark("record_evaluation")

    report = engine.close_session(SESSION_ID)
    mark("close_session")

    return ScenarioResult(
        engine=engine, store=store, session_id=SESSION_ID, report=report,
        digest=engine.state_digest(SESSION_ID),
        suggested_questions=suggestions, transitions=transitions,
    )


if __name__ == "__main__":
    result = run_cooking_pot_scenario()
    print(f"session {result.session_id} closed")
    print(f"final digest: {result.digest}")
    print(f"suggested questions after the broad ask: {result.suggested_questions}")
    for evaluation in result.report.ranked_evaluations:
        print(f"  rank {evaluation.rank}: {evaluation.idea_ref} "
              f"composite={evaluation.composite:.6f}")
    print(f"ontology exports: {[e.artifact_id for e in result.report.exports]}")
