"""Working-memory layer: live session state and the round workflow.

A session moves through rounds, each cycling stimulation -> qa -> stimulation
until the group declares the gathered concepts sufficient and enters ideation;
ending a round reopens stimulation for the next one. Legal phase transitions:

    stimulation -> qa          (asking a question)
    qa          -> stimulation (approving extracted knowledge)
    stimulation -> ideation    (declare_sufficient)
    qa          -> ideation    (declare_sufficient)
    ideation    -> stimulation (end_round, opens the next round)
    ideation    -> close       (close_session, requires at least one idea)

Illegal operations raise before any mutation, so failed calls leave state
bit-identical. Every mutating operation appends one record to the session's
append-only JSONL log; replaying a log against the same data directory
reproduces the closing snapshot byte for byte (timestamps are replayed from
the records, generated ids are sequential).
"""
from __future__ import annotations

import hashlib
import json
import threading
import uuid
from dataclasses import dataclass, field, asdict, is_dataclass
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Callable, Optional, Sequence

from .backends import QABackend
from .errors import (
    NotFoundError,
    ReplayError,
    StateError,
    ValidationError,
)
from .evaluation import (
    CriterionScores,
    IdeaEvaluation,
    WeightVector,
    rank_ideas,
    stored_composite,
)
from .ontology import build_idea_ontology, serialize_ontology
from .qa import CandidateAnswer, QuestionAnalysis, analyze_question
from .stimuli import Stimulus, StimulusKind
from .store import IdeaType, KnowledgeStore, StoredIdea, StoredQuestion
from .text import content_terms


class Phase(str, Enum):
    STIMULATION = "stimulation"
    QA = "qa"
    IDEATION = "ideation"


class SessionStatus(str, Enum):
    ACTIVE = "active"
    CLOSED = "closed"


class ConceptSource(str, Enum):
    DECOMPOSITION = "decomposition"
    ANSWER = "answer"
    PRIOR_IDEA = "prior_idea"
    PRIOR_QUESTION = "prior_question"
    MANUAL = "manual"


@dataclass
class Concept:
    concept_id: str
    label: str
    source: ConceptSource
    weight: float
    approved: bool


@dataclass
class Relation:
    relation_id: str
    from_concept: str
    to_concept: str
    label: str
    weight: float
    approved: bool


@dataclass
class Idea:
    idea_id: str
    title: str
    description: str
    idea_type: IdeaType
    concept_refs: list[str]
    stimulus_question_refs: list[str]
    created_at: str


@dataclass
class AskedQuestion:
    question_id: str
    text: str
    analysis: QuestionAnalysis
    answers_ref: int
    suggested: list[str] = field(default_factory=list)
    accepted_suggestion: Optional[int] = None


@dataclass
class Round:
    number: int
    phase: Phase
    concepts: list[Concept] = field(default_factory=list)
    relations: list[Relation] = field(default_factory=list)
    stimuli: list[Stimulus] = field(default_factory=list)

    def approved_concepts(self) -> list[Concept]:
        return [c for c in self.concepts if c.approved]

    def pending_concepts(self) -> list[Concept]:
        return [c for c in self.concepts if not c.approved]

    def concept_by_id(self, concept_id: str) -> Optional[Concept]:
        for concept in self.concepts:
            if concept.concept_id == concept_id:
                return concept
        return None


@dataclass
class SessionState:
    session_id: str
    problem_statement: str
    context_terms: list[str]
    participants: list[tuple[str, str]]
    time: str
    place: str
    rounds: list[Round] = field(default_factory=list)
    status: SessionStatus = SessionStatus.ACTIVE
    idea_set: list[Idea] = field(default_factory=list)
    question_log: list[AskedQuestion] = field(default_factory=list)
    answer_log: list[list[CandidateAnswer]] = field(default_factory=list)
    evaluations: dict[str, IdeaEvaluation] = field(default_factory=dict)

    @property
    def current_phase(self) -> Phase:
        return self.rounds[-1].phase

    @property
    def current_round(self) -> Round:
        return self.rounds[-1]


@dataclass
class OntologyExport:
    idea_id: str
    artifact_id: str
    jsonld: str
    turtle: str
    jsonld_path: Optional[str] = None
    turtle_path: Optional[str] = None


@dataclass
class ClosureReport:
    session_id: str
    ranked_evaluations: list[IdeaEvaluation]
    exports: list[OntologyExport]
    idea_receipts: list[str]
    question_receipts: list[str]


def _jsonable(value):
    if is_dataclass(value) and not isinstance(value, type):
        return _jsonable(asdict(value))
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def snapshot_digest(snapshot: dict) -> str:
    canonical = json.dumps(snapshot, ensure_ascii=False, sort_keys=True,
                           separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _utc_now() -> datetime:
    return datetime.now(timezone.utc)


class SessionEngine:
    """Drives sessions through their phases and owns the operation log."""

    def __init__(self, store: KnowledgeStore, backend: QABackend,
                 data_dir: Optional[str | Path] = None,
                 clock: Callable[[], datetime] = _utc_now,
                 k_hypotheses: int = 10, suggestion_limit: int = 3,
                 max_concepts: int = 8):
        self.store = store
        self.backend = backend
        self.data_dir = Path(data_dir) if data_dir is not None else None
        self.clock = clock
        self.k_hypotheses = k_hypotheses
        self.suggestion_limit = suggestion_limit
        self.max_concepts = max_concepts
        self.sessions: dict[str, SessionState] = {}
        self._counters: dict[str, dict[str, int]] = {}
        self._locks: dict[str, threading.RLock] = {}
        self._memory_logs: dict[str, list[dict]] = {}
        self._replay_ts: Optional[str] = None

    # ------------------------------------------------------------------
    # plumbing

    def _now_iso(self) -> str:
        if self._replay_ts is not None:
            return self._replay_ts
        return self.clock().isoformat()

    def _lock(self, session_id: str) -> threading.RLock:
        return self._locks.setdefault(session_id, threading.RLock())

    def _session(self, session_id: str) -> SessionState:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise NotFoundError(f"no session {session_id!r}") from None

    def _active(self, session_id: str) -> SessionState:
        session = self._session(session_id)
        if session.status is not SessionStatus.ACTIVE:
            raise StateError(f"session {session_id!r} is closed")
        return session

    def _next_id(self, session_id: str, prefix: str) -> str:
        counters = self._counters.setdefault(session_id, {})
        counters[prefix] = counters.get(prefix, 0) + 1
        return f"{prefix}{counters[prefix]}"

    def _log_path(self, session_id: str) -> Optional[Path]:
        if self.data_dir is None:
            return None
        return self.data_dir / "sessions" / f"{session_id}.jsonl"

    def _append_log(self, session_id: str, op: str, args: dict, ts: str) -> None:
        record = {
            "ts": ts,
            "op": op,
            "args": _jsonable(args),
            "result_digest": self.state_digest(session_id),
        }
        self._memory_logs.setdefault(session_id, []).append(record)
        path = self._log_path(session_id)
        if path is not None:
            path.parent.mkdir(parents=True, exist_ok=True)
            with path.open("a", encoding="utf-8") as handle:
                handle.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")
                handle.flush()

    def operation_log(self, session_id: str) -> list[dict]:
        return list(self._memory_logs.get(session_id, []))

    # ------------------------------------------------------------------
    # snapshots

    def get_state(self, session_id: str) -> dict:
        """Immutable snapshot of the full session state."""
        return _jsonable(self._session(session_id))

    def state_digest(self, session_id: str) -> str:
        return snapshot_digest(self.get_state(session_id))

    # ------------------------------------------------------------------
    # operations

    def create_session(self, problem_statement: str,
                       decomposition_concepts: Sequence[str] = (),
                       participants: Sequence[tuple[str, str]] = (),
                       time: str = "", place: str = "",
                       session_id: Optional[str] = None) -> SessionState:
        """Open round 1 in stimulation with the decomposition concepts approved."""
        if not problem_statement or not problem_statement.strip():
            raise ValidationError("problem_statement must be non-empty")
        session_id = session_id or f"s-{uuid.uuid4().hex[:12]}"
        if session_id in self.sessions:
            raise ValidationError(f"session {session_id!r} already exists")

        ts = self._now_iso()
        labels: list[str] = []
        for raw in decomposition_concepts:
            label = raw.strip().lower()
            if label and label not in labels:
                labels.append(label)
        session = SessionState(
            session_id=session_id,
            problem_statement=problem_statement,
            context_terms=sorted(set(content_terms(problem_statement)) | set(labels)),
            participants=[(name, dept) for name, dept in participants],
            time=time, place=place,
        )
        session.rounds.append(Round(number=1, phase=Phase.STIMULATION))
        self.sessions[session_id] = session
        for label in labels:
            session.current_round.concepts.append(Concept(
                concept_id=self._next_id(session_id, "c"),
                label=label, source=ConceptSource.DECOMPOSITION,
                weight=1.0, approved=True,
            ))
            session.current_round.stimuli.append(Stimulus(
                StimulusKind.DECOMPOSITION, label, 1.0))
        self._append_log(session_id, "create_session", {
            "problem_statement": problem_statement,
            "decomposition_concepts": list(decomposition_concepts),
            "participants": [list(p) for p in session.participants],
            "time": time, "place": place, "session_id": session_id,
        }, ts)
        return session

    def ask_question(self, session_id: str, question_text: str,
                     request_suggestions: bool = False
                     ) -> tuple[list[CandidateAnswer], list[str], dict]:
        """Answer a question through the backend and stage extracted knowledge.

        Returns (answers, suggested question texts, pending knowledge). With no
        answers, similar stored questions are suggested instead; otherwise the
        answers are mined for concepts/relations which wait, unapproved, in the
        current round. The question is persisted with its best confidence.
        """
        with self._lock(session_id):
            session = self._active(session_id)
            round_ = session.current_round
            if round_.phase not in (Phase.STIMULATION, Phase.QA):
                raise StateError(f"cannot ask questions in the {round_.phase.value} phase")

            analysis = analyze_question(question_text)
            # backend may fail: nothing below this line runs in that case,
            # leaving phase and logs untouched
            answers = self.backend.answer_question(question_text, self.k_hypotheses)

            ts = self._now_iso()
            round_.phase = Phase.QA

            suggestions: list[str] = []
            pending: dict[str, list] = {"concepts": [], "relations": []}
            if not answers or request_suggestions:
                # questions this session asked (or is asking) are not suggested
                # back to it; that also keeps log replay deterministic while the
                # repository keeps growing
                fetch = self.suggestion_limit + len(session.question_log) + 2
                seen = {question_text.strip().lower()}
                for record, _sim in self.store.find_questions_by_context(
                        list(analysis.context_terms), fetch):
                    normalized = record.text.strip().lower()
                    if record.session_ref == session_id or normalized in seen:
                        continue
                    seen.add(normalized)
                    suggestions.append(record.text)
                suggestions = suggestions[:self.suggestion_limit]
            if answers:
                combined = "\n".join(a.text for a in answers)
                extracted_concepts = self.backend.extract_concepts(combined, self.max_concepts)
                labels = [label for label, _ in extracted_concepts]
                extracted_relations = self.backend.extract_relations(combined, labels) \
                    if labels else []
                pending = self._stage_pending(session, extracted_concepts, extracted_relations)

            question_id = self._next_id(session_id, "q")
            session.answer_log.append(list(answers))
            asked = AskedQuestion(
                question_id=question_id, text=question_text, analysis=analysis,
                answers_ref=len(session.answer_log) - 1, suggested=suggestions,
            )
            # clicking a suggested question re-submits it; mark the acceptance
            if session.question_log:
                previous = session.question_log[-1]
                if question_text in previous.suggested and previous.accepted_suggestion is None:
                    previous.accepted_suggestion = previous.suggested.index(question_text)
            session.question_log.append(asked)

            self._persist_question(session, asked, answers, ts)
            self._append_log(session_id, "ask_question", {
                "session_id": session_id, "question_text": question_text,
                "request_suggestions": request_suggestions,
            }, ts)
            return answers, suggestions, _jsonable(pending)

    def _stage_pending(self, session: SessionState,
                       concepts: list[tuple[str, float]],
                       relations: list[tuple[str, str, str, float]]) -> dict:
        """Merge extraction output into the round's pending sets, assigning ids."""
        round_ = session.current_round
        added: dict[str, list] = {"concepts": [], "relations": []}
        pending_by_label = {c.label: c for c in round_.pending_concepts()}
        approved_by_label = {c.label: c for c in round_.approved_concepts()}
        for label, weight in concepts:
            existing = pending_by_label.get(label)
            if existing is not None:
                existing.weight += weight
                if existing not in added["concepts"]:
                    added["concepts"].append(existing)
                continue
            concept = Concept(
                concept_id=self._next_id(session.session_id, "c"),
                label=label, source=ConceptSource.ANSWER,
                weight=weight, approved=False,
            )
            round_.concepts.append(concept)
            pending_by_label[label] = concept
            added["concepts"].append(concept)

        def resolve(label: str) -> Optional[str]:
            if label in pending_by_label:
                return pending_by_label[label].concept_id
            if label in approved_by_label:
                return approved_by_label[label].concept_id
            return None

        pending_relations = {(r.from_concept, r.to_concept, r.label): r
                             for r in round_.relations if not r.approved}
        for from_label, to_label, rel_label, weight in relations:
            source, target = resolve(from_label), resolve(to_label)
            if source is None or target is None or source == target:
                continue
            key = (source, target, rel_label)
            if key in pending_relations:
                pending_relations[key].weight += weight
                if pending_relations[key] not in added["relations"]:
                    added["relations"].append(pending_relations[key])
                continue
            relation = Relation(
                relation_id=self._next_id(session.session_id, "r"),
                from_concept=source, to_concept=target,
                label=rel_label, weight=weight, approved=False,
            )
            round_.relations.append(relation)
            pending_relations[key] = relation
            added["relations"].append(relation)
        return added

    def _persist_question(self, session: SessionState, asked: AskedQuestion,
                          answers: list[CandidateAnswer], ts: str) -> None:
        store_id = f"{session.session_id}-{asked.question_id}"
        if store_id in self.store.questions:
            return  # replay over the same data directory
        self.store.store_question(StoredQuestion(
            question_id=store_id,
            text=asked.text,
            context_terms=sorted(asked.analysis.context_terms),
            session_ref=session.session_id,
            asked_at=ts,
            best_confidence=answers[0].confidence if answers else None,
        ))

    def approve_knowledge(self, session_id: str, concept_ids: Sequence[str],
                          relation_ids: Sequence[str]) -> Round:
        """Approve a subset of pending knowledge; everything else pending is dropped.

        Approved concepts merge into the round by normalized label (weights
        summed); relations survive only if both endpoints ended up approved.
        Approval completes the QA loop, so the round returns to stimulation.
        """
        with self._lock(session_id):
            session = self._active(session_id)
            round_ = session.current_round
            pending_concepts = {c.concept_id: c for c in round_.pending_concepts()}
            pending_relations = {r.relation_id: r for r in round_.relations if not r.approved}
            unknown = [cid for cid in concept_ids if cid not in pending_concepts]
            unknown += [rid for rid in relation_ids if rid not in pending_relations]
            if unknown:
                raise NotFoundError(f"unknown pending id(s): {unknown}")

            ts = self._now_iso()
            approved_by_label = {c.label: c for c in round_.approved_concepts()}
            remap: dict[str, str] = {}
            for cid in concept_ids:
                concept = pending_concepts[cid]
                existing = approved_by_label.get(concept.label)
                if existing is not None:
                    existing.weight += concept.weight
                    round_.concepts.remove(concept)
                    remap[cid] = existing.concept_id
                else:
                    concept.approved = True
                    approved_by_label[concept.label] = concept
            # discard unselected pending concepts
            for concept in list(round_.pending_concepts()):
                round_.concepts.remove(concept)

            approved_concept_ids = {c.concept_id for c in round_.approved_concepts()}
            selected_relations = [pending_relations[rid] for rid in relation_ids]
            for relation in [r for r in round_.relations if not r.approved]:
                round_.relations.remove(relation)
            existing_relations = {(r.from_concept, r.to_concept, r.label): r
                                  for r in round_.relations}
            for relation in selected_relations:
                relation.from_concept = remap.get(relation.from_concept, relation.from_concept)
                relation.to_concept = remap.get(relation.to_concept, relation.to_concept)
                if (relation.from_concept not in approved_concept_ids
                        or relation.to_concept not in approved_concept_ids
                        or relation.from_concept == relation.to_concept):
                    continue  # endpoint not approved: relation is dropped
                key = (relation.from_concept, relation.to_concept, relation.label)
                if key in existing_relations:
                    existing_relations[key].weight += relation.weight
                    continue
                relation.approved = True
                round_.relations.append(relation)
                existing_relations[key] = relation

            if round_.phase is Phase.QA:
                round_.phase = Phase.STIMULATION
            self._append_log(session_id, "approve_knowledge", {
                "session_id": session_id,
                "concept_ids": list(concept_ids),
                "relation_ids": list(relation_ids),
            }, ts)
            return round_

    def declare_sufficient(self, session_id: str) -> Phase:
        """Group judgment that the gathered concepts suffice: enter ideation."""
        with self._lock(session_id):
            session = self._active(session_id)
            round_ = session.current_round
            if round_.phase is Phase.IDEATION:
                raise StateError("round is already in the ideation phase")
            if not round_.approved_concepts():
                raise ValidationError("cannot enter ideation with zero approved concepts")
            ts = self._now_iso()
            round_.phase = Phase.IDEATION
            self._append_log(session_id, "declare_sufficient",
                             {"session_id": session_id}, ts)
            return round_.phase

    def create_idea(self, session_id: str, title: str, description: str,
                    idea_type: IdeaType | str, concept_refs: Sequence[str],
                    stimulus_question_refs: Sequence[str] = ()) -> Idea:
        with self._lock(session_id):
            session = self._active(session_id)
            round_ = session.current_round
            if round_.phase is not Phase.IDEATION:
                raise StateError("ideas can only be created in the ideation phase")
            if not title or not title.strip():
                raise ValidationError("idea title must be non-empty")
            if not concept_refs:
                raise ValidationError("concept_refs must be non-empty")
            idea_type = IdeaType(idea_type)
            approved_ids = {c.concept_id for c in round_.approved_concepts()}
            bad = [cid for cid in concept_refs if cid not in approved_ids]
            if bad:
                raise ValidationError(
                    f"concept_refs must name approved concepts of the current round: {bad}")
            known_questions = {q.question_id for q in session.question_log}
            bad_q = [qid for qid in stimulus_question_refs if qid not in known_questions]
            if bad_q:
                raise ValidationError(f"unknown stimulus question(s): {bad_q}")

            ts = self._now_iso()
            idea = Idea(
                idea_id=self._next_id(session_id, "i"),
                title=title, description=description, idea_type=idea_type,
                concept_refs=list(concept_refs),
                stimulus_question_refs=list(stimulus_question_refs),
                created_at=ts,
            )
            session.idea_set.append(idea)
            self._append_log(session_id, "create_idea", {
                "session_id": session_id, "title": title, "description": description,
                "idea_type": idea_type.value, "concept_refs": list(concept_refs),
                "stimulus_question_refs": list(stimulus_question_refs),
            }, ts)
            return idea

    def record_evaluation(self, session_id: str, idea_id: str,
                          scores: CriterionScores, weights: WeightVector
                          ) -> IdeaEvaluation:
        """Attach a composite evaluation to an idea of this session."""
        with self._lock(session_id):
            session = self._active(session_id)
            idea = next((i for i in session.idea_set if i.idea_id == idea_id), None)
            if idea is None:
                raise NotFoundError(f"no idea {idea_id!r} in session {session_id!r}")
            ts = self._now_iso()
            evaluation = IdeaEvaluation(
                idea_ref=idea_id, scores=scores, weights=weights,
                composite=stored_composite(scores, weights),
                idea_created_at=idea.created_at,
            )
            session.evaluations[idea_id] = evaluation
            self._append_log(session_id, "record_evaluation", {
                "session_id": session_id, "idea_id": idea_id,
                "scores": _jsonable(scores), "weights": _jsonable(weights),
            }, ts)
            return evaluation

    def ranked_evaluations(self, session_id: str) -> list[IdeaEvaluation]:
        session = self._session(session_id)
        if not session.evaluations:
            raise ValidationError("no evaluations recorded for this session")
        return rank_ideas(list(session.evaluations.values()))

    def end_round(self, session_id: str) -> Round:
        """Close the ideation phase and open the next round in stimulation.

        Idea titles become the new round's stimuli; the ending round's approved
        concepts carry forward as approved prior-idea concepts.
        """
        with self._lock(session_id):
            session = self._active(session_id)
            round_ = session.current_round
            if round_.phase is not Phase.IDEATION:
                raise StateError("end_round requires the ideation phase")
            ts = self._now_iso()
            round_ideas = [i for i in session.idea_set
                           if i.concept_refs and set(i.concept_refs)
                           & {c.concept_id for c in round_.concepts}]
            new_round = Round(number=round_.number + 1, phase=Phase.STIMULATION)
            for idea in round_ideas:
                new_round.stimuli.append(Stimulus(StimulusKind.PRIOR_IDEA, idea.title, 1.0))
            for concept in round_.approved_concepts():
                new_round.concepts.append(Concept(
                    concept_id=self._next_id(session_id, "c"),
                    label=concept.label, source=ConceptSource.PRIOR_IDEA,
                    weight=concept.weight, approved=True,
                ))
            session.rounds.append(new_round)
            self._append_log(session_id, "end_round", {"session_id": session_id}, ts)
            return new_round

    def close_session(self, session_id: str) -> ClosureReport:
        """Persist ideas and exports, then freeze the session.

        Requires the ideation phase and at least one idea overall (the quit
        rule: the group may stop at any loop as long as some ideas were
        generated). Every evaluated idea is serialized through the ontology
        generator in both formats.
        """
        with self._lock(session_id):
            session = self._active(session_id)
            if session.current_round.phase is not Phase.IDEATION:
                raise StateError("close_session requires the ideation phase")
            if not session.idea_set:
                raise ValidationError(
                    "cannot close with zero ideas: the quit rule requires that "
                    "some ideas were generated")

            ts = self._now_iso()
            exports: list[OntologyExport] = []
            for idea in session.idea_set:
                evaluation = session.evaluations.get(idea.idea_id)
                if evaluation is None:
                    continue
                graph = build_idea_ontology(session, idea, evaluation)
                artifact_id = f"{session_id}-{idea.idea_id}"
                export = OntologyExport(
                    idea_id=idea.idea_id, artifact_id=artifact_id,
                    jsonld=serialize_ontology(graph, "jsonld"),
                    turtle=serialize_ontology(graph, "turtle"),
                )
                if self.data_dir is not None:
                    directory = self.data_dir / "ontologies"
                    directory.mkdir(parents=True, exist_ok=True)
                    jsonld_path = directory / f"{artifact_id}.jsonld"
                    turtle_path = directory / f"{artifact_id}.ttl"
                    jsonld_path.write_text(export.jsonld, encoding="utf-8")
                    turtle_path.write_text(export.turtle, encoding="utf-8")
                    export.jsonld_path = str(jsonld_path)
                    export.turtle_path = str(turtle_path)
                exports.append(export)

            concept_labels = {c.concept_id: c.label
                              for r in session.rounds for c in r.concepts}
            idea_receipts = []
            exported = {e.idea_id: e.artifact_id for e in exports}
            for idea in session.idea_set:
                store_id = f"{session_id}-{idea.idea_id}"
                if store_id not in self.store.ideas:
                    evaluation = session.evaluations.get(idea.idea_id)
                    self.store.store_idea(StoredIdea(
                        idea_id=store_id,
                        title=idea.title,
                        description=idea.description,
                        idea_type=idea.idea_type,
                        context_terms=sorted({concept_labels[cid]
                                              for cid in idea.concept_refs}),
                        session_ref=session_id,
                        composite_score=evaluation.composite if evaluation else None,
                        ontology_ref=exported.get(idea.idea_id),
                    ))
                idea_receipts.append(store_id)
            question_receipts = [f"{session_id}-{q.question_id}"
                                 for q in session.question_log]

            ranked = rank_ideas(list(session.evaluations.values())) \
                if session.evaluations else []
            session.status = SessionStatus.CLOSED
            self._append_log(session_id, "close_session", {"session_id": session_id}, ts)
            return ClosureReport(
                session_id=session_id, ranked_evaluations=ranked,
                exports=exports, idea_receipts=idea_receipts,
                question_receipts=question_receipts,
            )

    # ------------------------------------------------------------------
    # replay

    def replay_record(self, record: dict) -> None:
        """Re-execute one log record with its recorded timestamp."""
        args = dict(record["args"])
        self._replay_ts = record["ts"]
        try:
            op = record["op"]
            if op == "create_session":
                args["participants"] = [tuple(p) for p in args.get("participants", [])]
                self.create_session(**args)
            elif op == "ask_question":
                self.ask_question(**args)
            elif op == "approve_knowledge":
                self.approve_knowledge(**args)
            elif op == "declare_sufficient":
                self.declare_sufficient(**args)
            elif op == "create_idea":
                self.create_idea(**args)
            elif op == "record_evaluation":
                scores = CriterionScores(
                    novelty=args["scores"]["novelty"],
                    usefulness=args["scores"]["usefulness"],
                    quality=args["scores"]["quality"],
                    surprisingness=args["scores"]["surprisingness"],
                    subscores=dict(args["scores"].get("subscores", {})),
                )
                weights = WeightVector(
                    novelty=args["weights"]["novelty"],
                    usefulness=args["weights"]["usefulness"],
                    quality=args["weights"]["quality"],
                    surprisingness=args["weights"]["surprisingness"],
                )
                self.record_evaluation(args["session_id"], args["idea_id"], scores, weights)
            elif op == "end_round":
                self.end_round(**args)
            elif op == "close_session":
                self.close_session(**args)
            else:
                raise ReplayError(f"unknown operation {op!r} in log")
        finally:
            self._replay_ts = None

    def replay_log(self, records: list[dict], verify_digests: bool = True) -> str:
        """Replay a full operation log; returns the final state digest."""
        session_id = None
        for record in records:
            self.replay_record(record)
            session_id = record["args"].get("session_id", session_id)
            if verify_digests:
                digest = self.state_digest(session_id)
                if digest != record["result_digest"]:
                    raise ReplayError(
                        f"digest mismatch after {record['op']} "
                        f"(expected {record['result_digest'][:12]}…, got {digest[:12]}…)")
        if session_id is None:
            raise ReplayError("empty operation log")
        return self.state_digest(session_id)

    def load_persisted_sessions(self) -> list[str]:
        """Rebuild sessions from their logs after a restart."""
        if self.data_dir is None:
            return []
        directory = self.data_dir / "sessions"
        if not directory.is_dir():
            return []
        loaded = []
        for path in sorted(directory.glob("*.jsonl")):
            records = read_operation_log(path)
            if not records:
                continue
            # rewriting the log during replay would duplicate it
            memory_log = self._memory_logs
            original_dir = self.data_dir
            self.data_dir = None
            try:
                self.replay_log(records)
            finally:
                self.data_dir = original_dir
            session_id = records[0]["args"]["session_id"]
            memory_log[session_id] = records
            loaded.append(session_id)
        return loaded


def read_operation_log(path: str | Path) -> list[dict]:
    records = []
    text = Path(path).read_text(encoding="utf-8")
    for line_number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise ReplayError(f"malformed log line {line_number}: {exc.msg}") from exc
    return records
