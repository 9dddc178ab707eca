"""Exception hierarchy shared by all engine layers.

Every error carries a short machine-readable ``code`` so the HTTP layer can
mirror module error cases without string matching.
"""
from __future__ import annotations


class IdeationError(Exception):
    """Base class for all engine errors."""

    code = "error"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class ValidationError(IdeationError):
    """A precondition or value-range violation."""

    code = "validation"


class StateError(IdeationError):
    """Operation not legal in the current session/index state."""

    code = "state"


class NotFoundError(IdeationError):
    """Referenced record or session does not exist."""

    code = "not_found"


class ConflictError(IdeationError):
    """Duplicate identifier on a store write."""

    code = "conflict"


class IngestionError(IdeationError):
    """Raw content could not be decoded or normalized to a document."""

    code = "ingestion"


class BackendError(IdeationError):
    """The QA backend is unavailable or returned a malformed response."""

    code = "backend"


class IntegrityError(IdeationError):
    """Cross-record reference is dangling (e.g. idea -> deleted concept)."""

    code = "integrity"


class OntologyParseError(IdeationError):
    """Serialized ontology text is malformed; carries line/column position."""

    code = "parse"

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ConfigError(IdeationError):
    """Service configuration outside documented ranges."""

    code = "config"


class ReplayError(IdeationError):
    """Operation-log replay diverged from the recorded result digests."""

    code = "replay"
