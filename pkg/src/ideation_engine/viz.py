"""Visualization payloads computed from session snapshots.

All functions are pure over the snapshot dict returned by
``SessionEngine.get_state``; layout is left to consumers (the console runs a
client-side force layout, DOT output goes to external renderers).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .retrieval import RetrievalIndex
from .text import content_terms

CLOUD_LIMIT = 50


@dataclass
class NetworkMap:
    nodes: list[dict] = field(default_factory=list)
    edges: list[dict] = field(default_factory=list)


@dataclass
class WordCloud:
    entries: list[dict] = field(default_factory=list)


def concept_network(snapshot: dict, include_pending: bool = False) -> NetworkMap:
    """Concept/idea/question nodes with relation and provenance edges."""
    network = NetworkMap()
    for round_ in snapshot["rounds"]:
        for concept in round_["concepts"]:
            if concept["approved"] or include_pending:
                network.nodes.append({
                    "id": concept["concept_id"], "label": concept["label"],
                    "kind": "concept", "weight": concept["weight"],
                })
        for relation in round_["relations"]:
            if relation["approved"]:
                network.edges.append({
                    "source": relation["from_concept"], "target": relation["to_concept"],
                    "label": relation["label"], "weight": relation["weight"],
                })
    for idea in snapshot["idea_set"]:
        network.nodes.append({
            "id": idea["idea_id"], "label": idea["title"],
            "kind": "idea", "weight": 1.0,
        })
        for concept_id in idea["concept_refs"]:
            network.edges.append({
                "source": idea["idea_id"], "target": concept_id,
                "label": "built_from_concept", "weight": 1.0,
            })
        for question_id in idea["stimulus_question_refs"]:
            network.edges.append({
                "source": idea["idea_id"], "target": question_id,
                "label": "stimulated_by", "weight": 1.0,
            })
    for question in snapshot["question_log"]:
        network.nodes.append({
            "id": question["question_id"], "label": question["text"],
            "kind": "question", "weight": 1.0,
        })
    return network


def concept_cloud(snapshot: dict, limit: int = CLOUD_LIMIT) -> WordCloud:
    """Approved concept labels weighted by their (summed) concept weights."""
    weights: dict[str, float] = {}
    for round_ in snapshot["rounds"]:
        for concept in round_["concepts"]:
            if concept["approved"]:
                weights[concept["label"]] = weights.get(concept["label"], 0.0) + concept["weight"]
    entries = sorted(weights.items(), key=lambda item: (-item[1], item[0]))[:limit]
    return WordCloud(entries=[{"term": term, "weight": weight} for term, weight in entries])


def answer_cloud(texts: list[str], index: Optional[RetrievalIndex] = None,
                 limit: int = CLOUD_LIMIT) -> WordCloud:
    """tf-idf weighted terms of a batch of answer snippets."""
    counts: dict[str, int] = {}
    for text in texts:
        for term in content_terms(text):
            counts[term] = counts.get(term, 0) + 1
    entries = []
    for term, tf in counts.items():
        idf = 1.0
        if index is not None and term in index.doc_freq:
            idf = index.idf(term)
        weight = tf * idf
        if weight > 0.0:
            entries.append((term, weight))
    entries.sort(key=lambda item: (-item[1], item[0]))
    return WordCloud(entries=[{"term": term, "weight": weight}
                              for term, weight in entries[:limit]])


def _dot_escape(value: str) -> str:
    return value.replace("\\", "\\\\").replace('"', '\\"')


def export_dot(network: NetworkMap) -> str:
    """Deterministic DOT digraph for the network map."""
    lines = ["digraph ideation {"]
    for node in sorted(network.nodes, key=lambda n: n["id"]):
        lines.append(
            f'  "{_dot_escape(node["id"])}" '
            f'[label="{_dot_escape(node["label"])}", kind="{node["kind"]}", '
            f'weight={node["weight"]:g}];'
        )
    for edge in sorted(network.edges,
                       key=lambda e: (e["source"], e["target"], e["label"])):
        lines.append(
            f'  "{_dot_escape(edge["source"])}" -> "{_dot_escape(edge["target"])}" '
            f'[label="{_dot_escape(edge["label"])}", weight={edge["weight"]:g}];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
