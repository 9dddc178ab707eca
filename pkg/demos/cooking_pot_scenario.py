"""The bundled end-to-end walkthrough over the electronic cooking-pot corpus.

Two rounds: round 1 explores rival technology and takes the suggestion path
on an over-broad question; round 2 mines complaints and produces the two
ideas, which are evaluated, ranked, and exported as ontologies on close. The
final snapshot digest is identical on every run.

Run directly, or with a directory to persist everything:

    python3 demos/cooking_pot_scenario.py [data_dir]
"""
import sys

from ideation_engine.scenario import run_cooking_pot_scenario

data_dir = sys.argv[1] if len(sys.argv) > 1 else None
result = run_cooking_pot_scenario(data_dir=data_dir)

state = result.engine.get_state(result.session_id)
print(f"rounds: {len(state['rounds'])}, status: {state['status']}")
print("suggested after the broad question:")
for text in result.suggested_questions:
    print(f"  - {text}")
print("ideas:")
for idea in state["idea_set"]:
    print(f"  - {idea['title']}")
print("ranking:")
for evaluation in result.report.ranked_evaluations:
    title = next(i["title"] for i in state["idea_set"]
                 if i["idea_id"] == evaluation.idea_ref)
    print(f"  {evaluation.rank}. {title} (composite {evaluation.composite:.4f})")
print(f"ontology exports: {[e.artifact_id for e in result.report.exports]}")
print(f"final digest: {result.digest}")
