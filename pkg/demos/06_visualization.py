"""Visualization payloads: concept network, word cloud, DOT export.

Payloads are pure functions of a session snapshot; rendering is left to the
console (force layout) or external tools (Graphviz for DOT).
"""
from ideation_engine import (
    KnowledgeStore,
    MockBackend,
    SessionEngine,
    concept_cloud,
    concept_network,
    export_dot,
)

backend = MockBackend({"What wears out?": [
    {"text": "The drive belt wears out before the motor bearing.", "confidence": 0.8},
    {"text": "A worn belt squeals while the motor warms up.", "confidence": 0.6},
]})
engine = SessionEngine(KnowledgeStore(), backend)
session = engine.create_session("extend service life", ["belt"],
                                session_id="viz-demo")
engine.ask_question("viz-demo", "What wears out?")

snapshot = engine.get_state("viz-demo")
pending_included = concept_network(snapshot, include_pending=True)
approved_only = concept_network(snapshot, include_pending=False)
print(f"network nodes: {len(approved_only.nodes)} approved-only, "
      f"{len(pending_included.nodes)} with pending")

round_ = session.current_round
engine.approve_knowledge("viz-demo",
                         [c.concept_id for c in round_.pending_concepts()],
                         [r.relation_id for r in round_.relations if not r.approved])

cloud = concept_cloud(engine.get_state("viz-demo"))
print("word cloud:", [(e["term"], round(e["weight"], 2)) for e in cloud.entries[:5]])

dot = export_dot(concept_network(engine.get_state("viz-demo")))
print("--- DOT ---")
print(dot)
