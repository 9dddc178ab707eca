from __future__ import annotations

import json

import pytest

from ideation_engine.errors import ConflictError, IngestionError, ValidationError
from ideation_engine.store import (
    KnowledgeStore,
    Satisfaction,
    StoredIdea,
    StoredQuestion,
    jaccard,
)


def question(qid, text, terms, asked_at="2022-01-01T00:00:00+00:00", confidence=None):
    return StoredQuestion(
        question_id=qid, text=text, context_terms=terms,
        session_ref="s0", asked_at=asked_at, best_confidence=confidence,
    )


def idea(iid, title, terms):
    return StoredIdea(
        idea_id=iid, title=title, description="", idea_type="product",
        context_terms=terms, session_ref="s0",
    )


# ----------------------------------------------------------------------
# ingestion

def test_ingest_plain_text_identity(memory_store):
    docs = memory_store.ingest_document("reviews", "the pot burns rice",
                                        "plain_text", "external")
    assert len(docs) == 1
    assert docs[0].body == "the pot burns rice"
    assert docs[0].source_tag.value == "external"


def test_ingest_markdown_strips_heading(memory_store):
    docs = memory_store.ingest_document(
        "manuals", "# Pot XYZ\nuses induction heating", "markdown", "internal_kms")
    assert docs[0].body == "Pot XYZ\nuses induction heating"


def test_ingest_empty_body_rejected(memory_store):
    with pytest.raises(IngestionError):
        memory_store.ingest_document("reviews", "", "plain_text", "external")
    with pytest.raises(IngestionError):
        memory_store.ingest_document("manuals", "# \n", "markdown", "internal_kms")


def test_ingest_invalid_utf8_names_byte_offset(memory_store):
    with pytest.raises(IngestionError) as err:
        memory_store.ingest_document("reviews", b"ok \xff bad", "plain_text", "external")
    assert "byte offset 3" in str(err.value)


def test_ingest_csv_one_document_per_row(memory_store):
    raw = "name,score\nalpha,1\nbeta,2\n"
    docs = memory_store.ingest_document("table", raw, "csv_rows", "external")
    assert len(docs) == 2
    assert docs[0].body == "name: alpha\nscore: 1"
    assert docs[1].body == "name: beta\nscore: 2"
    assert docs[0].metadata["row"] == "1"


def test_ingest_json_records(memory_store):
    raw = json.dumps([{"title": "a", "note": "x"}, {"title": "b", "note": "y"}])
    docs = memory_store.ingest_document("notes", raw, "json_records", "internal_kms")
    assert len(docs) == 2
    assert docs[0].body == "title: a\nnote: x"


def test_ingest_idempotent_with_same_doc_id(memory_store):
    first = memory_store.ingest_document("c", "same body", "plain_text", "external",
                                         doc_id="d1")
    again = memory_store.ingest_document("c", "same body", "plain_text", "external",
                                         doc_id="d1")
    assert first == again
    assert len(memory_store.documents) == 1
    with pytest.raises(ConflictError):
        memory_store.ingest_document("c", "different body", "plain_text", "external",
                                     doc_id="d1")


# ----------------------------------------------------------------------
# questions repository

def test_store_question_and_retrieve_by_context(memory_store):
    memory_store.store_question(question(
        "q1", "What do people dislike about the pot?", ["dislike", "pot"]))
    results = memory_store.find_questions_by_context(["dislike", "pot"], limit=5)
    assert len(results) == 1
    record, sim = results[0]
    assert record.question_id == "q1"
    assert sim == 1.0


def test_store_question_requires_context_terms(memory_store):
    with pytest.raises(ValidationError):
        memory_store.store_question(question("q1", "anything", []))
    with pytest.raises(ValidationError):
        memory_store.store_question(question("q2", "mixed", ["pot", "the"]))
    with pytest.raises(ValidationError):
        memory_store.store_question(question("q3", "upper", ["Pot"]))


def test_store_question_duplicate_id_conflicts(memory_store):
    memory_store.store_question(question("q1", "first", ["first"]))
    with pytest.raises(ConflictError):
        memory_store.store_question(question("q1", "second", ["second"]))


def test_jaccard_similarity_hand_computed():
    # |{technologies, pots}| / |{technologies, cooking, pots}| = 2/3
    assert jaccard(["technologies", "pots"],
                   ["technologies", "cooking", "pots"]) == pytest.approx(2 / 3)


def test_find_questions_by_context_similarity_and_order(memory_store):
    memory_store.store_question(question(
        "qa", "pots tech", ["technologies", "cooking", "pots"],
        asked_at="2022-01-01T00:00:00+00:00"))
    memory_store.store_question(question(
        "qb", "other", ["gardening", "tools"],
        asked_at="2022-01-02T00:00:00+00:00"))
    results = memory_store.find_questions_by_context(["technologies", "pots"], limit=5)
    assert [(r.question_id, s) for r, s in results] == [("qa", pytest.approx(2 / 3))]

    assert memory_store.find_questions_by_context(["absent"], limit=3) == []


def test_find_questions_tie_break_earlier_then_id(memory_store):
    memory_store.store_question(question("qz", "z", ["alpha"], "2022-01-01T00:00:00+00:00"))
    memory_store.store_question(question("qa", "a", ["alpha"], "2022-01-01T00:00:00+00:00"))
    memory_store.store_question(question("qm", "m", ["alpha"], "2021-12-01T00:00:00+00:00"))
    ids = [r.question_id for r, _ in
           memory_store.find_questions_by_context(["alpha"], limit=5)]
    assert ids == ["qm", "qa", "qz"]


def test_find_questions_limit_validation(memory_store):
    with pytest.raises(ValidationError):
        memory_store.find_questions_by_context(["x"], limit=0)
    with pytest.raises(ValidationError):
        memory_store.find_questions_by_context([], limit=1)


def test_question_satisfaction_update_path(memory_store):
    memory_store.store_question(question("q1", "text", ["text"]))
    memory_store.set_question_satisfaction("q1", "satisfied")
    assert memory_store.get_question("q1").user_satisfaction is Satisfaction.SATISFIED


# ----------------------------------------------------------------------
# ideas repository

def test_store_idea_paper_titles(memory_store):
    memory_store.store_idea(idea("i1", "Adding a Bluetooth chip to the pot",
                                 ["bluetooth", "chip", "pot"]))
    memory_store.store_idea(idea("i2", "heat meter inside the pot",
                                 ["heat", "meter", "pot"]))
    assert len(memory_store.ideas) == 2


def test_store_idea_empty_title_rejected(memory_store):
    with pytest.raises(ValidationError):
        memory_store.store_idea(idea("i1", "  ", ["x"]))


def test_find_ideas_overlap_ranking(memory_store):
    memory_store.store_idea(idea("one", "one", ["a", "b", "c", "d"]))
    memory_store.store_idea(idea("two", "two", ["a", "x", "y", "z"]))
    # query overlaps 3/4 terms of "one" and 1/4 of "two"
    results = memory_store.find_ideas_by_context(["a", "b", "c"], limit=5)
    assert [r.idea_id for r, _ in results] == ["one", "two"]
    assert results[0][1] > results[1][1]

    assert memory_store.find_ideas_by_context(["nothing"], limit=2) == []
    exact = memory_store.find_ideas_by_context(["a", "b", "c", "d"], limit=1)
    assert exact[0][1] == 1.0


def test_find_results_share_terms_and_scores_in_unit_range(memory_store):
    for n in range(6):
        memory_store.store_idea(idea(f"i{n}", f"i{n}", [f"t{n}", "shared"]))
    results = memory_store.find_ideas_by_context(["shared", "t1"], limit=10)
    assert results
    sims = [s for _, s in results]
    assert all(0.0 < s <= 1.0 for s in sims)
    assert sims == sorted(sims, reverse=True)
    for record, _ in results:
        assert set(record.context_terms) & {"shared", "t1"}


# ----------------------------------------------------------------------
# persistence

def test_disk_layout_and_write_then_read(tmp_path, clock):
    store = KnowledgeStore(root=tmp_path, clock=clock)
    store.ingest_document("manuals", "body text here", "plain_text", "internal_kms",
                          doc_id="m1")
    store.store_question(question("q1", "What about pots?", ["pots"],
                                  "2022-01-01T00:00:00+00:00"))
    store.store_idea(idea("i1", "title", ["title"]))

    assert (tmp_path / "documents" / "m1.json").is_file()
    assert (tmp_path / "questions" / "q1.json").is_file()
    assert (tmp_path / "ideas" / "i1.json").is_file()
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["corpora"] == ["manuals"]
    assert manifest["counts"] == {"documents": 1, "questions": 1, "ideas": 1}

    reloaded = KnowledgeStore(root=tmp_path)
    assert reloaded.get_document("m1") == store.get_document("m1")
    assert reloaded.get_question("q1") == store.get_question("q1")
    assert reloaded.get_idea("i1") == store.get_idea("i1")
