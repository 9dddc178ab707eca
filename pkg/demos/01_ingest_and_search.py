"""Ingesting heterogeneous content and searching repositories by context.

The knowledge store accepts plain text, markdown, CSV rows and JSON records;
tabular formats become one document per row. Past questions and ideas are
retrieved by Jaccard similarity over their context-term sets.
"""
from ideation_engine import KnowledgeStore, StoredIdea, StoredQuestion

store = KnowledgeStore()  # pass root="./data" for on-disk persistence

# -- documents --------------------------------------------------------------
store.ingest_document("manuals", "# Pot XYZ\nUses induction heating.",
                      "markdown", "internal_kms")
docs = store.ingest_document(
    "reviews",
    "product,rating,review\nPot XYZ,2,The pot burns rice.\nPot XYZ,4,Love the lid.",
    "csv_rows", "external")
print(f"csv ingestion produced {len(docs)} documents")
print("first row body:")
print(docs[0].body)

# -- questions repository -----------------------------------------------------
store.store_question(StoredQuestion(
    question_id="q-2020-1",
    text="What are the latest technologies in cooking pots?",
    context_terms=["cooking", "latest", "pots", "technologies"],
    session_ref="an-earlier-session",
    asked_at="2020-11-03T10:00:00+00:00",
    best_confidence=0.85,
))
matches = store.find_questions_by_context(["technologies", "pots"], limit=3)
for record, similarity in matches:
    print(f"similar question ({similarity:.3f}): {record.text}")

# -- ideas repository ---------------------------------------------------------
store.store_idea(StoredIdea(
    idea_id="i-2020-1", title="Adding a Bluetooth chip to the pot",
    description="remote alerts", idea_type="product",
    context_terms=["bluetooth", "chip", "pot"], session_ref="an-earlier-session",
))
for record, similarity in store.find_ideas_by_context(["pot", "chip"], limit=3):
    print(f"similar idea ({similarity:.3f}): {record.title}")
