"""HTTP surface: every engine, store and support operation behind JSON endpoints.

One process hosts the store, the discovery backend and the session engine.
Mutating endpoints append exactly one operation-log record (the engine does
the appending); GETs never write. Error bodies carry the machine-readable
code of the underlying module error.
"""
from __future__ import annotations

from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .config import ServiceConfig, build_backend, build_store
from .errors import IdeationError
from .evaluation import WeightVector, aggregate_subscores
from .session import SessionEngine, _jsonable
from .stimuli import generate_search_cues
from .store import KnowledgeStore
from .viz import concept_cloud, concept_network, export_dot

_STATUS_BY_CODE = {
    "validation": 400,
    "ingestion": 400,
    "parse": 400,
    "config": 400,
    "not_found": 404,
    "conflict": 409,
    "state": 409,
    "integrity": 422,
    "backend": 502,
    "replay": 500,
}


class IngestRequest(BaseModel):
    content: str
    format: str = "plain_text"
    source_tag: str = "internal_kms"
    doc_id: Optional[str] = None
    metadata: dict[str, str] = Field(default_factory=dict)


class Participant(BaseModel):
    name: str
    department: str = ""


class CreateSessionRequest(BaseModel):
    problem_statement: str
    decomposition_concepts: list[str] = Field(default_factory=list)
    participants: list[Participant] = Field(default_factory=list)
    time: str = ""
    place: str = ""
    session_id: Optional[str] = None


class AskRequest(BaseModel):
    question: str
    request_suggestions: bool = False


class ApprovalsRequest(BaseModel):
    concept_ids: list[str] = Field(default_factory=list)
    relation_ids: list[str] = Field(default_factory=list)


class IdeaRequest(BaseModel):
    title: str
    description: str = ""
    idea_type: str = "other"
    concept_refs: list[str]
    stimulus_question_refs: list[str] = Field(default_factory=list)


class EvaluationRequest(BaseModel):
    scores: dict[str, float]
    weights: dict[str, float]


def create_app(config: ServiceConfig,
               store: Optional[KnowledgeStore] = None,
               engine: Optional[SessionEngine] = None) -> FastAPI:
    config.validate()
    if store is None:
        store = build_store(config)
    if engine is None:
        backend = build_backend(config, store)
        engine = SessionEngine(
            store, backend, data_dir=config.data_dir,
            k_hypotheses=config.k_hypotheses,
            suggestion_limit=config.suggestion_limit,
            max_concepts=config.max_concepts,
        )
        engine.load_persisted_sessions()

    app = FastAPI(title="ideation-engine")
    app.state.config = config
    app.state.store = store
    app.state.engine = engine

    @app.exception_handler(IdeationError)
    async def _ideation_error(_request: Request, exc: IdeationError):
        status = _STATUS_BY_CODE.get(exc.code, 500)
        return JSONResponse(status_code=status,
                            content={"error": {"code": exc.code, "message": exc.message}})

    @app.get("/health")
    def health():
        return {"status": "ok", "sessions": len(engine.sessions)}

    @app.post("/corpora/{corpus_id}/documents")
    def ingest(corpus_id: str, body: IngestRequest):
        documents = store.ingest_document(
            corpus_id, body.content, body.format, body.source_tag,
            doc_id=body.doc_id, metadata=body.metadata,
        )
        return {"ingested": len(documents),
                "documents": [_jsonable(d) for d in documents]}

    @app.post("/sessions")
    def create_session(body: CreateSessionRequest):
        session = engine.create_session(
            body.problem_statement, body.decomposition_concepts,
            participants=[(p.name, p.department) for p in body.participants],
            time=body.time, place=body.place, session_id=body.session_id,
        )
        return {"state": engine.get_state(session.session_id),
                "digest": engine.state_digest(session.session_id)}

    @app.get("/sessions/{session_id}")
    def get_state(session_id: str):
        return {"state": engine.get_state(session_id),
                "digest": engine.state_digest(session_id)}

    @app.post("/sessions/{session_id}/questions")
    def ask_question(session_id: str, body: AskRequest):
        answers, suggestions, pending = engine.ask_question(
            session_id, body.question, request_suggestions=body.request_suggestions)
        return {
            "answers": [_jsonable(a) for a in answers],
            "suggested_questions": suggestions,
            "pending_knowledge": pending,
        }

    @app.post("/sessions/{session_id}/knowledge/approvals")
    def approve(session_id: str, body: ApprovalsRequest):
        round_ = engine.approve_knowledge(session_id, body.concept_ids, body.relation_ids)
        return {"round": _jsonable(round_)}

    @app.post("/sessions/{session_id}/sufficient")
    def declare_sufficient(session_id: str):
        phase = engine.declare_sufficient(session_id)
        return {"phase": phase.value}

    @app.post("/sessions/{session_id}/ideas")
    def create_idea(session_id: str, body: IdeaRequest):
        idea = engine.create_idea(
            session_id, body.title, body.description, body.idea_type,
            body.concept_refs, body.stimulus_question_refs,
        )
        return {"idea": _jsonable(idea)}

    @app.post("/sessions/{session_id}/ideas/{idea_id}/evaluation")
    def evaluate(session_id: str, idea_id: str, body: EvaluationRequest):
        scores = aggregate_subscores(**body.scores)
        weights = WeightVector(
            novelty=body.weights.get("novelty", 0.0),
            usefulness=body.weights.get("usefulness", 0.0),
            quality=body.weights.get("quality", 0.0),
            surprisingness=body.weights.get("surprisingness", 0.0),
        )
        evaluation = engine.record_evaluation(session_id, idea_id, scores, weights)
        return {"evaluation": _jsonable(evaluation)}

    @app.get("/sessions/{session_id}/ideas/ranking")
    def ranking(session_id: str):
        return {"ranking": [_jsonable(e) for e in engine.ranked_evaluations(session_id)]}

    @app.post("/sessions/{session_id}/rounds")
    def end_round(session_id: str):
        round_ = engine.end_round(session_id)
        return {"round": _jsonable(round_)}

    @app.post("/sessions/{session_id}/close")
    def close_session(session_id: str):
        report = engine.close_session(session_id)
        return {"report": _jsonable(report),
                "digest": engine.state_digest(session_id)}

    @app.get("/sessions/{session_id}/visualization")
    def visualization(session_id: str, mode: str = Query("network"),
                      include_pending: bool = Query(False)):
        snapshot = engine.get_state(session_id)
        if mode == "network":
            return {"network": _jsonable(concept_network(snapshot, include_pending))}
        if mode == "cloud":
            return {"cloud": _jsonable(concept_cloud(snapshot, config.cloud_limit))}
        if mode == "dot":
            return {"dot": export_dot(concept_network(snapshot, include_pending))}
        return JSONResponse(status_code=400, content={
            "error": {"code": "validation",
                      "message": f"unknown visualization mode {mode!r}"}})

    @app.get("/sessions/{session_id}/stimuli")
    def stimuli(session_id: str, limit: int = Query(5)):
        snapshot = engine.get_state(session_id)
        cues = generate_search_cues(store, snapshot["context_terms"], limit)
        return {"stimuli": [_jsonable(s) for s in cues]}

    @app.get("/repositories/questions")
    def questions_by_context(context: str, limit: int = Query(5)):
        terms = [t for t in context.replace(",", " ").split() if t]
        results = store.find_questions_by_context(terms, limit)
        return {"results": [{"question": _jsonable(q), "similarity": sim}
                            for q, sim in results]}

    console_dir = config.console_dir
    if console_dir and Path(console_dir).is_dir():
        app.mount("/console", StaticFiles(directory=console_dir, html=True), name="console")

    return app
