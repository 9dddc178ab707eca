"""Long-term memory layer: document corpora plus the ideas and questions repositories.

Persistence is a single on-disk tree (one JSON file per record, a manifest
listing corpora and counts) with an in-memory read index. Passing
``root=None`` keeps everything in memory, which the randomized state-machine
tests rely on for speed. Records are immutable after write except
``StoredQuestion.user_satisfaction`` which has a dedicated update path.
"""
from __future__ import annotations

import csv
import io
import json
import threading
from dataclasses import dataclass, field, asdict
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable, Optional

from .errors import ConflictError, IngestionError, NotFoundError, ValidationError
from .text import STOP_WORDS, strip_markdown


class SourceTag(str, Enum):
    INTERNAL_KMS = "internal_kms"
    EXTERNAL = "external"


class DocFormat(str, Enum):
    PLAIN_TEXT = "plain_text"
    MARKDOWN = "markdown"
    CSV_ROWS = "csv_rows"
    JSON_RECORDS = "json_records"


class Satisfaction(str, Enum):
    SATISFIED = "satisfied"
    UNSATISFIED = "unsatisfied"
    UNRATED = "unrated"


class IdeaType(str, Enum):
    PRODUCT = "product"
    SERVICE = "service"
    RULE = "rule"
    PROCESS = "process"
    OTHER = "other"


@dataclass(frozen=True)
class Document:
    doc_id: str
    corpus_id: str
    source_tag: SourceTag
    title: str
    body: str
    metadata: dict[str, str] = field(default_factory=dict)
    ingested_at: str = ""


@dataclass
class StoredQuestion:
    question_id: str
    text: str
    context_terms: list[str]
    session_ref: str
    asked_at: str
    best_confidence: Optional[float] = None
    user_satisfaction: Satisfaction = Satisfaction.UNRATED


@dataclass
class StoredIdea:
    idea_id: str
    title: str
    description: str
    idea_type: IdeaType
    context_terms: list[str]
    session_ref: str
    composite_score: Optional[float] = None
    ontology_ref: Optional[str] = None


def _utc_now() -> datetime:
    return datetime.now(timezone.utc)


def _record_json(record) -> str:
    data = asdict(record)
    return json.dumps(data, ensure_ascii=False, sort_keys=True, indent=2) + "\n"


def jaccard(a: Iterable[str], b: Iterable[str]) -> float:
    """Jaccard index |a ∩ b| / |a ∪ b| over term sets."""
    sa, sb = set(a), set(b)
    union = sa | sb
    if not union:
        return 0.0
    return len(sa & sb) / len(union)


def _flatten_csv(raw: str) -> list[tuple[str, str]]:
    """One (title, body) per data row; body is 'header: value' lines."""
    rows = list(csv.reader(io.StringIO(raw)))
    rows = [r for r in rows if any(cell.strip() for cell in r)]
    if len(rows) < 2:
        return []
    header = [h.strip() for h in rows[0]]
    out = []
    for row in rows[1:]:
        pairs = [(header[i], row[i].strip()) for i in range(min(len(header), len(row)))]
        body = "\n".join(f"{h}: {v}" for h, v in pairs)
        title = pairs[0][1] if pairs else ""
        out.append((title, body))
    return out


def _flatten_json(raw: str) -> list[tuple[str, str]]:
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise IngestionError(f"json_records content is not valid JSON: {exc}") from exc
    records = data if isinstance(data, list) else [data]
    out = []
    for rec in records:
        if not isinstance(rec, dict):
            raise IngestionError("json_records expects objects (or a list of objects)")
        lines = []
        for key, value in rec.items():
            if isinstance(value, (dict, list)):
                value = json.dumps(value, ensure_ascii=False, sort_keys=True)
            lines.append(f"{key}: {value}")
        body = "\n".join(lines)
        title = str(next(iter(rec.values()))) if rec else ""
        out.append((title, body))
    return out


def _first_line_title(body: str) -> str:
    for line in body.split("\n"):
        line = line.strip()
        if line:
            return line[:80]
    return ""


class KnowledgeStore:
    """Documents, questions and ideas repositories with durable persistence."""

    def __init__(self, root: Optional[str | Path] = None,
                 clock: Callable[[], datetime] = _utc_now):
        self.root = Path(root) if root is not None else None
        self.clock = clock
        self.documents: dict[str, Document] = {}
        self.questions: dict[str, StoredQuestion] = {}
        self.ideas: dict[str, StoredIdea] = {}
        # monotone counter so index builds can detect a stale corpus view
        self.version = 0
        self._locks = {name: threading.Lock() for name in ("documents", "questions", "ideas")}
        if self.root is not None:
            self._load()

    # ------------------------------------------------------------------
    # persistence plumbing

    def _load(self) -> None:
        for name, target, loader in (
            ("documents", self.documents, self._document_from_dict),
            ("questions", self.questions, self._question_from_dict),
            ("ideas", self.ideas, self._idea_from_dict),
        ):
            directory = self.root / name
            if not directory.is_dir():
                continue
            for path in sorted(directory.glob("*.json")):
                record = loader(json.loads(path.read_text(encoding="utf-8")))
                target[self._record_id(record)] = record
        self.version += 1

    @staticmethod
    def _record_id(record) -> str:
        for attr in ("doc_id", "question_id", "idea_id"):
            if hasattr(record, attr):
                return getattr(record, attr)
        raise AssertionError("unknown record type")

    @staticmethod
    def _document_from_dict(data: dict) -> Document:
        data["source_tag"] = SourceTag(data["source_tag"])
        return Document(**data)

    @staticmethod
    def _question_from_dict(data: dict) -> StoredQuestion:
        data["user_satisfaction"] = Satisfaction(data["user_satisfaction"])
        return StoredQuestion(**data)

    @staticmethod
    def _idea_from_dict(data: dict) -> StoredIdea:
        data["idea_type"] = IdeaType(data["idea_type"])
        return StoredIdea(**data)

    def _write(self, repository: str, record_id: str, record) -> None:
        if self.root is None:
            return
        directory = self.root / repository
        directory.mkdir(parents=True, exist_ok=True)
        (directory / f"{record_id}.json").write_text(_record_json(record), encoding="utf-8")
        self._write_manifest()

    def _write_manifest(self) -> None:
        corpora = sorted({d.corpus_id for d in self.documents.values()})
        manifest = {
            "corpora": corpora,
            "counts": {
                "documents": len(self.documents),
                "questions": len(self.questions),
                "ideas": len(self.ideas),
            },
        }
        (self.root / "manifest.json").write_text(
            json.dumps(manifest, ensure_ascii=False, sort_keys=True, indent=2) + "\n",
            encoding="utf-8",
        )

    # ------------------------------------------------------------------
    # documents

    def ingest_document(self, corpus_id: str, raw_content: str | bytes,
                        fmt: DocFormat | str, source_tag: SourceTag | str,
                        doc_id: Optional[str] = None,
                        metadata: Optional[dict[str, str]] = None) -> list[Document]:
        """Normalize raw content into one or more stored documents.

        plain_text passes through; markdown is stripped of markup; csv_rows and
        json_records yield one document per row/record with fields joined by
        newline. Returns the stored documents in row order.
        """
        fmt = DocFormat(fmt)
        source_tag = SourceTag(source_tag)
        if not corpus_id:
            raise ValidationError("corpus_id must be non-empty")
        if isinstance(raw_content, bytes):
            try:
                raw_content = raw_content.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise IngestionError(
                    f"content is not valid UTF-8 at byte offset {exc.start}") from exc

        if fmt is DocFormat.PLAIN_TEXT:
            parts = [(_first_line_title(raw_content), raw_content.strip())]
        elif fmt is DocFormat.MARKDOWN:
            stripped = strip_markdown(raw_content)
            parts = [(_first_line_title(stripped), stripped)]
        elif fmt is DocFormat.CSV_ROWS:
            parts = _flatten_csv(raw_content)
        else:
            parts = _flatten_json(raw_content)

        parts = [(title, body) for title, body in parts if body.strip()]
        if not parts:
            raise IngestionError("no document body left after normalization (empty content)")

        metadata = dict(metadata or {})
        stored: list[Document] = []
        with self._locks["documents"]:
            base = doc_id or f"{corpus_id}-{self._next_doc_ordinal(corpus_id):04d}"
            for index, (title, body) in enumerate(parts):
                rid = base if len(parts) == 1 else f"{base}-r{index + 1}"
                meta = dict(metadata)
                if len(parts) > 1:
                    meta["row"] = str(index + 1)
                existing = self.documents.get(rid)
                if existing is not None:
                    if (existing.corpus_id, existing.body, existing.metadata) == (corpus_id, body, meta):
                        stored.append(existing)  # idempotent re-ingest
                        continue
                    raise ConflictError(f"document id {rid!r} already exists with different content")
                doc = Document(
                    doc_id=rid, corpus_id=corpus_id, source_tag=source_tag,
                    title=title, body=body, metadata=meta,
                    ingested_at=self.clock().isoformat(),
                )
                self.documents[rid] = doc
                self._write("documents", rid, doc)
                stored.append(doc)
            self.version += 1
        return stored

    def _next_doc_ordinal(self, corpus_id: str) -> int:
        return sum(1 for d in self.documents.values() if d.corpus_id == corpus_id) + 1

    def get_document(self, doc_id: str) -> Document:
        try:
            return self.documents[doc_id]
        except KeyError:
            raise NotFoundError(f"no document {doc_id!r}") from None

    def corpus_documents(self, corpus_ids: Optional[Iterable[str]] = None) -> list[Document]:
        wanted = set(corpus_ids) if corpus_ids is not None else None
        docs = [d for d in self.documents.values() if wanted is None or d.corpus_id in wanted]
        return sorted(docs, key=lambda d: d.doc_id)

    # ------------------------------------------------------------------
    # questions repository

    def store_question(self, record: StoredQuestion) -> str:
        if not record.text.strip():
            raise ValidationError("question text must be non-empty")
        if not record.context_terms:
            raise ValidationError("context_terms must be non-empty")
        if any(t != t.lower() for t in record.context_terms):
            raise ValidationError("context_terms must be lowercase")
        stop = [t for t in record.context_terms if t in STOP_WORDS]
        if stop:
            raise ValidationError(f"context_terms may not contain stop words: {stop}")
        if record.best_confidence is not None and not 0.0 <= record.best_confidence <= 1.0:
            raise ValidationError("best_confidence must be in [0, 1]")
        with self._locks["questions"]:
            if record.question_id in self.questions:
                raise ConflictError(f"question id {record.question_id!r} already exists")
            self.questions[record.question_id] = record
            self._write("questions", record.question_id, record)
        return record.question_id

    def get_question(self, question_id: str) -> StoredQuestion:
        try:
            return self.questions[question_id]
        except KeyError:
            raise NotFoundError(f"no stored question {question_id!r}") from None

    def set_question_satisfaction(self, question_id: str, value: Satisfaction | str) -> StoredQuestion:
        value = Satisfaction(value)
        with self._locks["questions"]:
            record = self.get_question(question_id)
            record.user_satisfaction = value
            self._write("questions", question_id, record)
        return record

    def find_questions_by_context(self, context_terms: list[str], limit: int
                                  ) -> list[tuple[StoredQuestion, float]]:
        """Stored questions sharing at least one term, by Jaccard similarity."""
        self._check_context_query(context_terms, limit)
        query = set(context_terms)
        scored = []
        for record in self.questions.values():
            sim = jaccard(query, record.context_terms)
            if sim > 0.0:
                scored.append((record, sim))
        scored.sort(key=lambda item: (-item[1], item[0].asked_at, item[0].question_id))
        return scored[:limit]

    # ------------------------------------------------------------------
    # ideas repository

    def store_idea(self, record: StoredIdea) -> str:
        if not record.title.strip():
            raise ValidationError("idea title must be non-empty")
        if not record.context_terms:
            raise ValidationError("context_terms must be non-empty")
        if record.composite_score is not None and not 0.0 <= record.composite_score <= 1.0:
            raise ValidationError("composite_score must be in [0, 1]")
        with self._locks["ideas"]:
            if record.idea_id in self.ideas:
                raise ConflictError(f"idea id {record.idea_id!r} already exists")
            self.ideas[record.idea_id] = record
            self._write("ideas", record.idea_id, record)
        return record.idea_id

    def get_idea(self, idea_id: str) -> StoredIdea:
        try:
            return self.ideas[idea_id]
        except KeyError:
            raise NotFoundError(f"no stored idea {idea_id!r}") from None

    def find_ideas_by_context(self, context_terms: list[str], limit: int
                              ) -> list[tuple[StoredIdea, float]]:
        """Same contract as find_questions_by_context, over StoredIdea records."""
        self._check_context_query(context_terms, limit)
        query = set(context_terms)
        scored = []
        for record in self.ideas.values():
            sim = jaccard(query, record.context_terms)
            if sim > 0.0:
                scored.append((record, sim))
        scored.sort(key=lambda item: (-item[1], item[0].idea_id))
        return scored[:limit]

    @staticmethod
    def _check_context_query(context_terms: list[str], limit: int) -> None:
        if not context_terms:
            raise ValidationError("context_terms must be non-empty")
        if limit < 1:
            raise ValidationError("limit must be >= 1")
