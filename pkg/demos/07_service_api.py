"""Driving the HTTP service end to end with an in-process test client.

The same endpoints serve the browser console; run `ideation-engine serve
--config config.json` for a real socket.
"""
import json
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from ideation_engine.api import create_app
from ideation_engine.config import load_config

workdir = Path(tempfile.mkdtemp())
fixture = workdir / "fixture.json"
fixture.write_text(json.dumps({
    "What slows the app?": [
        {"text": "Cold caches slow the app every morning.", "confidence": 0.8},
        {"text": "The app database misses an index on lookups.", "confidence": 0.7},
    ],
}))
(workdir / "config.json").write_text(json.dumps({
    "data_dir": str(workdir / "data"),
    "listen": "127.0.0.1:8080",
    "backend": "mock",
    "fixture_path": str(fixture),
}))

config = load_config(workdir / "config.json")
client = TestClient(create_app(config))

print("health:", client.get("/health").json())

client.post("/sessions", json={
    "problem_statement": "speed up the app",
    "decomposition_concepts": ["caches", "queries"],
    "session_id": "api-demo"})

asked = client.post("/sessions/api-demo/questions",
                    json={"question": "What slows the app?"}).json()
print("answers:", [a["text"] for a in asked["answers"]])

pending = asked["pending_knowledge"]
client.post("/sessions/api-demo/knowledge/approvals", json={
    "concept_ids": [c["concept_id"] for c in pending["concepts"]],
    "relation_ids": [r["relation_id"] for r in pending["relations"]]})
client.post("/sessions/api-demo/sufficient")

state = client.get("/sessions/api-demo").json()["state"]
approved = [c["concept_id"] for r in state["rounds"]
            for c in r["concepts"] if c["approved"]]
idea = client.post("/sessions/api-demo/ideas", json={
    "title": "Warm the cache at boot", "idea_type": "process",
    "concept_refs": approved[:2]}).json()["idea"]

client.post(f"/sessions/api-demo/ideas/{idea['idea_id']}/evaluation", json={
    "scores": {"novelty": 0.4, "usefulness": 0.9, "quality": 0.8,
               "surprisingness": 0.2},
    "weights": {"novelty": 1, "usefulness": 3, "quality": 2, "surprisingness": 1}})
print("ranking:", client.get("/sessions/api-demo/ideas/ranking").json())

network = client.get("/sessions/api-demo/visualization",
                     params={"mode": "network"}).json()["network"]
print(f"network payload: {len(network['nodes'])} nodes, {len(network['edges'])} edges")

report = client.post("/sessions/api-demo/close").json()["report"]
print("exports:", [e["artifact_id"] for e in report["exports"]])
