"""Building an idea ontology graph and round-tripping it through both formats.

The graph links the idea to its type, session, departments, stimulus
questions, concepts, relations and evaluation through a fixed edge
vocabulary. Serialization is canonical, so equal graphs are equal bytes.
"""
from ideation_engine import (
    KnowledgeStore,
    MockBackend,
    SessionEngine,
    WeightVector,
    aggregate_subscores,
    build_idea_ontology,
    parse_ontology,
    serialize_ontology,
)

backend = MockBackend({"What leaks?": [
    {"text": "The valve gasket leaks under pressure.", "confidence": 0.7}]})
engine = SessionEngine(KnowledgeStore(), backend)
session = engine.create_session("stop the leaks", ["valve"],
                                participants=[("pat", "engineering")],
                                time="now", place="bench", session_id="demo")
engine.ask_question("demo", "What leaks?")
round_ = session.current_round
engine.approve_knowledge("demo",
                         [c.concept_id for c in round_.pending_concepts()],
                         [r.relation_id for r in round_.relations if not r.approved])
engine.declare_sufficient("demo")
idea = engine.create_idea("demo", "Self-sealing gasket", "swap material", "product",
                          [round_.approved_concepts()[0].concept_id],
                          [session.question_log[0].question_id])
evaluation = engine.record_evaluation(
    "demo", idea.idea_id,
    aggregate_subscores(novelty=0.7, usefulness=0.8, quality=0.6, surprisingness=0.4),
    WeightVector(2, 2, 1, 1))

graph = build_idea_ontology(session, idea, evaluation, resources=["gasket supplier"])
print(f"nodes: {len(graph.nodes)}, edges: {len(graph.edges)}")

turtle = serialize_ontology(graph, "turtle")
jsonld = serialize_ontology(graph, "jsonld")
print("--- turtle (first lines) ---")
print("\n".join(turtle.splitlines()[:6]))

assert parse_ontology(turtle, "turtle") == graph
assert parse_ontology(jsonld, "jsonld") == graph
assert serialize_ontology(parse_ontology(turtle, "turtle"), "turtle") == turtle
print("round-trips hold and bytes are stable in both formats")
