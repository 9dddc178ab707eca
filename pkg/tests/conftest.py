from __future__ import annotations

from datetime import datetime, timedelta, timezone

import pytest

from ideation_engine.backends import MockBackend
from ideation_engine.session import SessionEngine
from ideation_engine.store import KnowledgeStore


class FixedClock:
    """Deterministic one-minute tick clock for tests."""

    def __init__(self):
        self.now = datetime(2022, 3, 1, 8, 0, 0, tzinfo=timezone.utc)

    def __call__(self):
        current = self.now
        self.now = self.now + timedelta(seconds=60)
        return current


MOCK_FIXTURE = {
    "What helps the gadget?": [
        {"text": "A sensor helps the gadget run cooler.", "confidence": 0.9, "source_tag": "internal_kms"},
        {"text": "The gadget sensor battery lasts longer with firmware tuning.", "confidence": 0.6, "source_tag": "external"},
    ],
    "Does the widget fail?": [
        {"text": "The widget casing cracks near the hinge screw.", "confidence": 0.7, "source_tag": "external"},
    ],
}


@pytest.fixture
def clock():
    return FixedClock()


@pytest.fixture
def memory_store(clock):
    return KnowledgeStore(root=None, clock=clock)


@pytest.fixture
def disk_store(tmp_path, clock):
    return KnowledgeStore(root=tmp_path / "store", clock=clock)


@pytest.fixture
def mock_backend():
    return MockBackend(dict(MOCK_FIXTURE))


@pytest.fixture
def engine(memory_store, mock_backend, clock):
    return SessionEngine(memory_store, mock_backend, data_dir=None, clock=clock)


def start_session(engine, session_id="s1", decomposition=("features", "drawbacks")):
    return engine.create_session(
        "improve the gadget product line", list(decomposition),
        participants=[("alex", "engineering"), ("kim", "marketing")],
        time="2022-03-01 08:00", place="lab", session_id=session_id,
    )


def reach_ideation(engine, session_id="s1"):
    """Create a session, mine one question, approve everything, enter ideation."""
    start_session(engine, session_id)
    engine.ask_question(session_id, "What helps the gadget?")
    round_ = engine.sessions[session_id].current_round
    engine.approve_knowledge(
        session_id,
        [c.concept_id for c in round_.pending_concepts()],
        [r.relation_id for r in round_.relations if not r.approved])
    engine.declare_sufficient(session_id)
    return engine.sessions[session_id]
