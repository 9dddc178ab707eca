"""A full session's workflow: stimulation, QA, approval, ideation, closing.

Each round loops stimulation -> qa -> stimulation until the group declares the
concepts sufficient; ideas are created in the ideation phase, and closing
persists everything and exports evaluated ideas as ontologies.
"""
from ideation_engine import (
    KnowledgeStore,
    MockBackend,
    SessionEngine,
    WeightVector,
    aggregate_subscores,
)

backend = MockBackend({
    "What annoys early adopters?": [
        {"text": "Early adopters dislike the loud fan and flimsy stand.",
         "confidence": 0.8, "source_tag": "external"},
        {"text": "A quieter fan would fix most complaints about the stand.",
         "confidence": 0.6, "source_tag": "external"},
    ],
})
engine = SessionEngine(KnowledgeStore(), backend)

session = engine.create_session(
    "make the next revision quieter", ["noise", "stand"],
    participants=[("sam", "hardware"), ("rin", "support")],
    time="today 10:00", place="workshop", session_id="walkthrough")
print("phase:", session.current_phase.value)

answers, suggestions, pending = engine.ask_question(
    "walkthrough", "What annoys early adopters?")
print("phase after asking:", session.current_phase.value)
print("pending concepts:", [c["label"] for c in pending["concepts"]])

round_ = session.current_round
engine.approve_knowledge(
    "walkthrough",
    [c.concept_id for c in round_.pending_concepts()],
    [r.relation_id for r in round_.relations if not r.approved])
print("phase after approval:", session.current_phase.value)
print("approved:", [c.label for c in round_.approved_concepts()])

engine.declare_sufficient("walkthrough")
idea = engine.create_idea(
    "walkthrough", "Swap in a silent fan", "same airflow, lower dB", "product",
    [round_.approved_concepts()[0].concept_id],
    [session.question_log[0].question_id])

engine.record_evaluation(
    "walkthrough", idea.idea_id,
    aggregate_subscores(novelty=0.4, usefulness=0.9, quality=0.8, surprisingness=0.2),
    WeightVector(novelty=1, usefulness=3, quality=2, surprisingness=1))

report = engine.close_session("walkthrough")
print("closing rank 1:", report.ranked_evaluations[0].idea_ref,
      f"composite={report.ranked_evaluations[0].composite:.4f}")
print("exports:", [e.artifact_id for e in report.exports])
print("final digest:", engine.state_digest("walkthrough")[:16], "…")
