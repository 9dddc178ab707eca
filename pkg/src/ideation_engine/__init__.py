"""Ideation support engine.

Knowledge repositories with a local QA pipeline, a human-steered session
workflow, multi-criteria idea evaluation, ontology export, and visualization
payloads, served over HTTP or used directly as a library.
"""
from .backends import LocalBackend, MockBackend, QABackend
from .config import ServiceConfig, load_config
from .errors import (
    BackendError,
    ConfigError,
    ConflictError,
    IdeationError,
    IngestionError,
    IntegrityError,
    NotFoundError,
    OntologyParseError,
    ReplayError,
    StateError,
    ValidationError,
)
from .evaluation import (
    CriterionScores,
    IdeaEvaluation,
    WeightVector,
    aggregate_subscores,
    evaluate_idea,
    rank_ideas,
)
from .ontology import (
    IdeaOntologyGraph,
    build_idea_ontology,
    parse_ontology,
    serialize_ontology,
)
from .qa import (
    CandidateAnswer,
    ExtractedKnowledge,
    QuestionAnalysis,
    analyze_question,
    answer_question,
    extract_concepts,
    extract_relations,
)
from .retrieval import Passage, RetrievalIndex, build_index, rank_passages, score_passage
from .session import (
    ClosureReport,
    Phase,
    SessionEngine,
    SessionState,
    read_operation_log,
    snapshot_digest,
)
from .stimuli import Stimulus, StimulusKind, generate_search_cues
from .store import (
    DocFormat,
    Document,
    IdeaType,
    KnowledgeStore,
    SourceTag,
    StoredIdea,
    StoredQuestion,
)
from .viz import NetworkMap, WordCloud, answer_cloud, concept_cloud, concept_network, export_dot

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
