"""The local question-answering pipeline, step by step.

Documents are split into sentence passages and indexed; a question runs
through analysis, BM25 hypothesis generation, evidence scoring and confidence
ranking. Questions whose terms miss the corpus return the empty "no answer".
"""
from ideation_engine import (
    KnowledgeStore,
    analyze_question,
    answer_question,
    build_index,
    extract_concepts,
    extract_relations,
)

store = KnowledgeStore()
store.ingest_document("notes", """
The gadget sensor beeps when the battery runs low.
A firmware update made the sensor beep less often.
Shipping delays affected the spring batch.
""", "plain_text", "internal_kms")

index = build_index(store)
print(f"indexed {index.passage_count} passages, avg length {index.avg_length:.2f}")

analysis = analyze_question("Why does the gadget sensor beep?")
print(f"kind={analysis.question_kind.value} focus={list(analysis.focus_terms)}")

answers = answer_question("Why does the gadget sensor beep?", 10, index)
for answer in answers:
    print(f"  {answer.confidence:.3f} [{answer.source_tag}] {answer.text}")

print("unanswerable:", answer_question("What about submarines?", 10, index))

# concepts and relations mined from the answers feed the session working memory
combined = "\n".join(a.text for a in answers)
concepts = extract_concepts(combined, 5, index)
print("concepts:", concepts)
print("relations:", extract_relations(combined, [label for label, _ in concepts]))
