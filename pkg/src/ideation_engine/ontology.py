"""Idea ontology graphs: construction, validation, and round-trip serialization.

A graph captures one selected idea together with the session entities that
contributed to it (type, session, departments, resources, stimulus questions,
concepts, relations, evaluation result). Edges come from a fixed vocabulary
and always radiate from the single idea node, so every valid graph is
connected through it.

Two wire formats share the same IRIs under the project namespace: JSON-LD
(fixed @context) and a restricted Turtle subset. Serialization is canonical
(nodes, properties and edge targets sorted), so structurally equal graphs
produce identical bytes, and ``parse(serialize(g))`` reproduces ``g``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence
from urllib.parse import quote, unquote

from .errors import IntegrityError, OntologyParseError, ValidationError

NAMESPACE = "https://ideation-engine.dev/ns#"

EDGE_VOCABULARY = frozenset({
    "has_type", "generated_in", "involved_department", "requires_resource",
    "stimulated_by", "built_from_concept", "uses_relation", "evaluated_as",
})

NODE_KINDS = frozenset({
    "Idea", "IdeaType", "Session", "Department", "Resource",
    "Question", "Concept", "Relation", "Evaluation",
})

JSONLD_CONTEXT: dict = {"@vocab": NAMESPACE}
JSONLD_CONTEXT.update({
    label: {"@id": NAMESPACE + label, "@type": "@id"}
    for label in sorted(EDGE_VOCABULARY)
})

_PROP_NAME_RE = re.compile(r"^[a-z][a-z0-9_]*$")

Scalar = str | int | float


@dataclass(frozen=True)
class OntologyNode:
    node_id: str
    kind: str
    props: dict[str, Scalar] = field(default_factory=dict)


@dataclass
class IdeaOntologyGraph:
    nodes: dict[str, OntologyNode] = field(default_factory=dict)
    edges: set[tuple[str, str, str]] = field(default_factory=set)  # (source, label, target)

    def add_node(self, node_id: str, kind: str, props: Optional[dict[str, Scalar]] = None) -> None:
        self.nodes[node_id] = OntologyNode(node_id, kind, dict(props or {}))

    def add_edge(self, source: str, label: str, target: str) -> None:
        self.edges.add((source, label, target))

    def idea_node(self) -> OntologyNode:
        ideas = [n for n in self.nodes.values() if n.kind == "Idea"]
        if len(ideas) != 1:
            raise ValidationError(f"graph must contain exactly one Idea node, found {len(ideas)}")
        return ideas[0]

    def structurally_equal(self, other: "IdeaOntologyGraph") -> bool:
        return self.nodes == other.nodes and self.edges == other.edges

    def __eq__(self, other):
        return isinstance(other, IdeaOntologyGraph) and self.structurally_equal(other)


def validate_graph(graph: IdeaOntologyGraph) -> None:
    """Check vocabulary, endpoint existence and connectivity through the idea."""
    idea = graph.idea_node()
    for node in graph.nodes.values():
        if node.kind not in NODE_KINDS:
            raise ValidationError(f"unknown node kind {node.kind!r}")
        for name, value in node.props.items():
            if not _PROP_NAME_RE.match(name) or name in EDGE_VOCABULARY:
                raise ValidationError(f"illegal property name {name!r}")
            if not isinstance(value, (str, int, float)) or isinstance(value, bool):
                raise ValidationError(f"property {name!r} must be a string or number")
    for source, label, target in graph.edges:
        if label not in EDGE_VOCABULARY:
            raise ValidationError(f"edge label {label!r} not in the fixed vocabulary")
        if source not in graph.nodes or target not in graph.nodes:
            raise ValidationError(f"edge ({source}, {label}, {target}) has a missing endpoint")

    # undirected reachability from the idea node must cover every node
    adjacency: dict[str, set[str]] = {node_id: set() for node_id in graph.nodes}
    for source, _, target in graph.edges:
        adjacency[source].add(target)
        adjacency[target].add(source)
    seen = {idea.node_id}
    frontier = [idea.node_id]
    while frontier:
        for neighbor in adjacency[frontier.pop()]:
            if neighbor not in seen:
                seen.add(neighbor)
                frontier.append(neighbor)
    if seen != set(graph.nodes):
        unreachable = sorted(set(graph.nodes) - seen)
        raise ValidationError(f"graph not connected through the idea node: {unreachable}")


# ----------------------------------------------------------------------
# construction from session state

def build_idea_ontology(session, idea, evaluation, resources: Sequence[str] = ()
                        ) -> IdeaOntologyGraph:
    """Assemble the entity graph for one idea of a session.

    Concepts and relations are restricted to those the idea references;
    questions are the idea's stimulus questions. Dangling references raise an
    integrity error.
    """
    concept_by_id = {}
    relations = []
    for round_ in session.rounds:
        for concept in round_.concepts:
            concept_by_id[concept.concept_id] = concept
        relations.extend(round_.relations)
    questions_by_id = {q.question_id: q for q in session.question_log}

    missing = [cid for cid in idea.concept_refs if cid not in concept_by_id]
    if missing:
        raise IntegrityError(f"idea {idea.idea_id!r} references unknown concept(s): {missing}")
    missing_q = [qid for qid in idea.stimulus_question_refs if qid not in questions_by_id]
    if missing_q:
        raise IntegrityError(f"idea {idea.idea_id!r} references unknown question(s): {missing_q}")
    if evaluation is None:
        raise ValidationError("an evaluation is required to build the ontology")
    if evaluation.idea_ref != idea.idea_id:
        raise IntegrityError("evaluation does not belong to this idea")

    graph = IdeaOntologyGraph()
    idea_node = f"idea:{idea.idea_id}"
    graph.add_node(idea_node, "Idea", {
        "title": idea.title,
        "description": idea.description,
    })

    type_node = f"type:{idea.idea_type.value}"
    graph.add_node(type_node, "IdeaType", {"name": idea.idea_type.value})
    graph.add_edge(idea_node, "has_type", type_node)

    session_node = f"session:{session.session_id}"
    graph.add_node(session_node, "Session", {
        "time": session.time,
        "place": session.place,
        "context": " ".join(session.context_terms),
    })
    graph.add_edge(idea_node, "generated_in", session_node)

    for department in sorted({dept for _, dept in session.participants if dept}):
        node_id = f"department:{department}"
        graph.add_node(node_id, "Department", {"name": department})
        graph.add_edge(idea_node, "involved_department", node_id)

    for resource in sorted(set(resources)):
        node_id = f"resource:{resource}"
        graph.add_node(node_id, "Resource", {"name": resource})
        graph.add_edge(idea_node, "requires_resource", node_id)

    for question_id in idea.stimulus_question_refs:
        node_id = f"question:{question_id}"
        graph.add_node(node_id, "Question", {"text": questions_by_id[question_id].text})
        graph.add_edge(idea_node, "stimulated_by", node_id)

    referenced = set(idea.concept_refs)
    for concept_id in idea.concept_refs:
        concept = concept_by_id[concept_id]
        node_id = f"concept:{concept_id}"
        graph.add_node(node_id, "Concept", {"label": concept.label, "weight": concept.weight})
        graph.add_edge(idea_node, "built_from_concept", node_id)

    for relation in relations:
        if relation.from_concept in referenced and relation.to_concept in referenced:
            node_id = f"relation:{relation.relation_id}"
            graph.add_node(node_id, "Relation", {
                "label": relation.label,
                "from_label": concept_by_id[relation.from_concept].label,
                "to_label": concept_by_id[relation.to_concept].label,
                "weight": relation.weight,
            })
            graph.add_edge(idea_node, "uses_relation", node_id)

    evaluation_node = f"evaluation:{idea.idea_id}"
    graph.add_node(evaluation_node, "Evaluation", {
        "composite": evaluation.composite,
        "novelty": evaluation.scores.novelty,
        "usefulness": evaluation.scores.usefulness,
        "quality": evaluation.scores.quality,
        "surprisingness": evaluation.scores.surprisingness,
        "weight_novelty": evaluation.weights.novelty,
        "weight_usefulness": evaluation.weights.usefulness,
        "weight_quality": evaluation.weights.quality,
        "weight_surprisingness": evaluation.weights.surprisingness,
    })
    graph.add_edge(idea_node, "evaluated_as", evaluation_node)

    validate_graph(graph)
    return graph


# ----------------------------------------------------------------------
# shared IRI helpers

def _node_iri(node_id: str) -> str:
    return NAMESPACE + "node/" + quote(node_id, safe="")

def _kind_iri(kind: str) -> str:
    return NAMESPACE + "kind/" + kind

def _node_id_from_iri(iri: str, where: str) -> str:
    prefix = NAMESPACE + "node/"
    if not iri.startswith(prefix):
        raise OntologyParseError(f"{where}: {iri!r} is not a node IRI", 1, 1)
    return unquote(iri[len(prefix):])


# ----------------------------------------------------------------------
# JSON-LD

def serialize_jsonld(graph: IdeaOntologyGraph) -> str:
    validate_graph(graph)
    entries = []
    for node_id in sorted(graph.nodes):
        node = graph.nodes[node_id]
        entry: dict = {"@id": _node_iri(node_id), "@type": _kind_iri(node.kind)}
        for name in sorted(node.props):
            entry[name] = node.props[name]
        outgoing: dict[str, list[str]] = {}
        for source, label, target in graph.edges:
            if source == node_id:
                outgoing.setdefault(label, []).append(_node_iri(target))
        for label in sorted(outgoing):
            entry[label] = sorted(outgoing[label])
        entries.append(entry)
    document = {"@context": JSONLD_CONTEXT, "@graph": entries}
    return json.dumps(document, ensure_ascii=False, sort_keys=True, indent=2) + "\n"


def parse_jsonld(text: str) -> IdeaOntologyGraph:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise OntologyParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from exc
    if not isinstance(document, dict) or "@graph" not in document:
        raise OntologyParseError("document must be an object with an @graph array", 1, 1)
    if document.get("@context") != JSONLD_CONTEXT:
        raise OntologyParseError("unexpected @context (not this project's vocabulary)", 1, 1)

    graph = IdeaOntologyGraph()
    pending_edges = []
    for entry in document["@graph"]:
        if not isinstance(entry, dict) or "@id" not in entry or "@type" not in entry:
            raise OntologyParseError("@graph entries need @id and @type", 1, 1)
        node_id = _node_id_from_iri(entry["@id"], "@id")
        kind_iri = entry["@type"]
        if not kind_iri.startswith(NAMESPACE + "kind/"):
            raise OntologyParseError(f"@type {kind_iri!r} is not a kind IRI", 1, 1)
        kind = kind_iri[len(NAMESPACE + "kind/"):]
        props: dict[str, Scalar] = {}
        for key, value in entry.items():
            if key in ("@id", "@type"):
                continue
            if key in EDGE_VOCABULARY:
                targets = value if isinstance(value, list) else [value]
                for target in targets:
                    pending_edges.append((node_id, key, _node_id_from_iri(target, key)))
            else:
                props[key] = value
        graph.add_node(node_id, kind, props)
    for source, label, target in pending_edges:
        graph.add_edge(source, label, target)
    validate_graph(graph)
    return graph


# ----------------------------------------------------------------------
# Turtle (restricted subset: absolute IRIs, 'a' for rdf:type, literals)

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}
_UNESCAPES = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t"}


def _turtle_literal(value: Scalar) -> str:
    if isinstance(value, str):
        escaped = "".join(_ESCAPES.get(ch, ch) for ch in value)
        return f'"{escaped}"'
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    return repr(float(value))


def serialize_turtle(graph: IdeaOntologyGraph) -> str:
    validate_graph(graph)
    blocks = []
    for node_id in sorted(graph.nodes):
        node = graph.nodes[node_id]
        lines = [f"<{_node_iri(node_id)}> a <{_kind_iri(node.kind)}>"]
        for name in sorted(node.props):
            lines.append(f"    <{NAMESPACE}{name}> {_turtle_literal(node.props[name])}")
        targets = sorted((label, target) for source, label, target in graph.edges
                         if source == node_id)
        for label, target in targets:
            lines.append(f"    <{NAMESPACE}{label}> <{_node_iri(target)}>")
        blocks.append(" ;\n".join(lines) + " .\n")
    return "\n".join(blocks)


class _TurtleTokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message: str) -> OntologyParseError:
        return OntologyParseError(message, self.line, self.col)

    def _advance(self, count: int) -> None:
        for _ in range(count):
            if self.pos < len(self.text) and self.text[self.pos] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1

    def _skip_space(self) -> None:
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch in " \t\r\n":
                self._advance(1)
            elif ch == "#":
                while self.pos < len(self.text) and self.text[self.pos] != "\n":
                    self._advance(1)
            else:
                return

    def next(self) -> Optional[tuple[str, object]]:
        """Returns (kind, value) with kind in iri|string|number|a|semi|dot."""
        self._skip_space()
        if self.pos >= len(self.text):
            return None
        ch = self.text[self.pos]
        if ch == "<":
            end = self.text.find(">", self.pos + 1)
            if end == -1:
                raise self.error("unterminated IRI")
            iri = self.text[self.pos + 1:end]
            self._advance(end + 1 - self.pos)
            return ("iri", iri)
        if ch == '"':
            out = []
            index = self.pos + 1
            while True:
                if index >= len(self.text):
                    raise self.error("unterminated string literal")
                current = self.text[index]
                if current == "\\":
                    if index + 1 >= len(self.text):
                        raise self.error("dangling escape in string literal")
                    escape = self.text[index + 1]
                    if escape not in _UNESCAPES:
                        raise self.error(f"unsupported escape \\{escape}")
                    out.append(_UNESCAPES[escape])
                    index += 2
                elif current == '"':
                    break
                else:
                    out.append(current)
                    index += 1
            self._advance(index + 1 - self.pos)
            return ("string", "".join(out))
        if ch == ";":
            self._advance(1)
            return ("semi", ";")
        if ch == ".":
            self._advance(1)
            return ("dot", ".")
        match = re.match(r"[+-]?\d[\d._eE+-]*", self.text[self.pos:])
        if match:
            token = match.group(0)
            self._advance(len(token))
            try:
                value: Scalar = int(token)
            except ValueError:
                try:
                    value = float(token)
                except ValueError:
                    raise self.error(f"malformed number {token!r}") from None
            return ("number", value)
        if self.text[self.pos] == "a" and (
                self.pos + 1 >= len(self.text) or self.text[self.pos + 1] in " \t\r\n"):
            self._advance(1)
            return ("a", "a")
        raise self.error(f"unexpected character {ch!r}")


def parse_turtle(text: str) -> IdeaOntologyGraph:
    tokenizer = _TurtleTokenizer(text)
    graph = IdeaOntologyGraph()
    pending_edges = []

    def expect(kinds: tuple[str, ...]) -> tuple[str, object]:
        token = tokenizer.next()
        if token is None:
            raise tokenizer.error(f"unexpected end of input, expected {'/'.join(kinds)}")
        if token[0] not in kinds:
            raise tokenizer.error(f"expected {'/'.join(kinds)}, got {token[0]}")
        return token

    while True:
        token = tokenizer.next()
        if token is None:
            break
        if token[0] != "iri":
            raise tokenizer.error("expected a subject IRI")
        node_id = _node_id_from_iri(str(token[1]), "subject")
        expect(("a",))
        kind_token = expect(("iri",))
        kind_iri = str(kind_token[1])
        if not kind_iri.startswith(NAMESPACE + "kind/"):
            raise tokenizer.error(f"{kind_iri!r} is not a kind IRI")
        kind = kind_iri[len(NAMESPACE + "kind/"):]
        props: dict[str, Scalar] = {}

        while True:
            separator = expect(("semi", "dot"))
            if separator[0] == "dot":
                break
            predicate = expect(("iri",))
            predicate_iri = str(predicate[1])
            if not predicate_iri.startswith(NAMESPACE):
                raise tokenizer.error(f"predicate {predicate_iri!r} outside project namespace")
            name = predicate_iri[len(NAMESPACE):]
            obj = expect(("iri", "string", "number"))
            if name in EDGE_VOCABULARY:
                if obj[0] != "iri":
                    raise tokenizer.error(f"edge {name} requires a node IRI object")
                pending_edges.append((node_id, name, _node_id_from_iri(str(obj[1]), name)))
            else:
                if obj[0] == "iri":
                    raise tokenizer.error(f"property {name} requires a literal object")
                props[name] = obj[1]  # type: ignore[assignment]
        graph.add_node(node_id, kind, props)

    for source, label, target in pending_edges:
        if source not in graph.nodes or target not in graph.nodes:
            raise OntologyParseError(
                f"edge ({source}, {label}, {target}) references a missing node", 1, 1)
        graph.add_edge(source, label, target)
    validate_graph(graph)
    return graph


# ----------------------------------------------------------------------
# format dispatch

def serialize_ontology(graph: IdeaOntologyGraph, fmt: str) -> str:
    if fmt == "jsonld":
        return serialize_jsonld(graph)
    if fmt == "turtle":
        return serialize_turtle(graph)
    raise ValidationError(f"unknown ontology format {fmt!r} (expected jsonld or turtle)")


def parse_ontology(text: str, fmt: str) -> IdeaOntologyGraph:
    if fmt == "jsonld":
        return parse_jsonld(text)
    if fmt == "turtle":
        return parse_turtle(text)
    raise ValidationError(f"unknown ontology format {fmt!r} (expected jsonld or turtle)")
