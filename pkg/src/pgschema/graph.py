"""Property graph instance model, JSONL ingestion, and conformance checking."""

from __future__ import annotations

import datetime
import json
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Mapping, Optional, Union

from .model import DataType, SchemaGraph, display_labels, is_subtype

# A property value is exactly one of five kinds; absence of a key means absence
# of the value (there is no null).
PropertyValue = Union[str, int, float, bool, datetime.date]

_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")
_INT64_MIN = -(2**63)
_INT64_MAX = 2**63 - 1


def kind_of(value: PropertyValue) -> DataType:
    """Datatype kind of an in-memory property value.

    bool is checked before int because Python bools are ints.
    """
    if isinstance(value, bool):
        return DataType.BOOLEAN
    if isinstance(value, int):
        return DataType.INTEGER
    if isinstance(value, float):
        return DataType.FLOAT
    if isinstance(value, datetime.date):
        return DataType.DATE
    if isinstance(value, str):
        return DataType.STRING
    raise TypeError(f"not a property value: {value!r}")


class GraphIntegrityError(ValueError):
    """A graph value violates referential integrity or id uniqueness."""


class GraphLoadError(ValueError):
    """One or more problems found while loading a graph stream.

    Collects every problem before failing; ``issues`` is a list of
    (line_number, message) pairs.
    """

    def __init__(self, issues: list[tuple[int, str]]):
        self.issues = list(issues)
        super().__init__("\n".join(f"line {ln}: {msg}" for ln, msg in self.issues))


@dataclass(frozen=True)
class GraphNode:
    id: str
    labels: frozenset[str] = frozenset()
    properties: Mapping[str, PropertyValue] = field(default_factory=dict)


@dataclass(frozen=True)
class GraphEdge:
    id: str
    src: str
    dst: str
    labels: frozenset[str] = frozenset()
    properties: Mapping[str, PropertyValue] = field(default_factory=dict)


@dataclass(frozen=True)
class PropertyGraph:
    """Immutable instance graph; node and edge id namespaces are independent."""

    nodes: Mapping[str, GraphNode] = field(default_factory=dict)
    edges: Mapping[str, GraphEdge] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for node_id, node in self.nodes.items():
            if node_id != node.id:
                raise GraphIntegrityError(f"node keyed {node_id!r} has id {node.id!r}")
            if not node.id:
                raise GraphIntegrityError("empty node id")
        for edge_id, edge in self.edges.items():
            if edge_id != edge.id:
                raise GraphIntegrityError(f"edge keyed {edge_id!r} has id {edge.id!r}")
            if edge.src not in self.nodes:
                raise GraphIntegrityError(f"edge {edge.id!r}: unknown source node {edge.src!r}")
            if edge.dst not in self.nodes:
                raise GraphIntegrityError(f"edge {edge.id!r}: unknown target node {edge.dst!r}")


class ViolationKind(Enum):
    UNKNOWN_TYPE = "unknown-type"
    MISSING_REQUIRED_PROPERTY = "missing-required-property"
    WRONG_DATATYPE = "wrong-datatype"
    UNKNOWN_PROPERTY = "unknown-property"
    ENDPOINT_MISMATCH = "endpoint-mismatch"
    CARDINALITY_VIOLATION = "cardinality-violation"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Violation:
    element_id: str
    kind: ViolationKind
    message: str


@dataclass(frozen=True)
class ConformanceReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "violations": [
                {"elementId": v.element_id, "kind": v.kind.value, "message": v.message}
                for v in self.violations
            ],
        }


def _convert_json_value(raw: Any) -> PropertyValue:
    """Map a JSON scalar to a property value per the graph file format.

    Raises ValueError for null, arrays, and objects.
    """
    if isinstance(raw, bool):
        return raw
    if isinstance(raw, int):
        if _INT64_MIN <= raw <= _INT64_MAX:
            return raw
        return float(raw)
    if isinstance(raw, float):
        if raw.is_integer() and _INT64_MIN <= raw <= _INT64_MAX:
            return int(raw)
        return raw
    if isinstance(raw, str):
        if _DATE_RE.match(raw):
            try:
                return datetime.date.fromisoformat(raw)
            except ValueError:
                return raw  # date-shaped but not a real calendar date
        return raw
    raise ValueError(f"unsupported property value {raw!r} (null, arrays and objects are rejected)")


def _parse_properties(raw: Any) -> dict[str, PropertyValue]:
    if not isinstance(raw, dict):
        raise ValueError("'properties' must be an object")
    out: dict[str, PropertyValue] = {}
    for key, value in raw.items():
        if not key:
            raise ValueError("empty property key")
        out[key] = _convert_json_value(value)
    return out


def _parse_labels(raw: Any) -> frozenset[str]:
    if not isinstance(raw, list) or not all(isinstance(x, str) for x in raw):
        raise ValueError("'labels' must be an array of strings")
    return frozenset(raw)


def _require_str(obj: dict, key: str) -> str:
    value = obj.get(key)
    if not isinstance(value, str) or not value:
        raise ValueError(f"'{key}' must be a non-empty string")
    return value


def load_graph(source: Union[str, Iterable[str]]) -> PropertyGraph:
    """Load a graph from line-oriented JSON (one node or edge object per line).

    All problems are collected (malformed lines, duplicate ids, dangling edge
    endpoints) and raised together as a single GraphLoadError.
    """
    lines = source.splitlines() if isinstance(source, str) else source
    issues: list[tuple[int, str]] = []
    nodes: dict[str, GraphNode] = {}
    edges: dict[str, GraphEdge] = {}
    pending_edges: list[tuple[int, GraphEdge]] = []

    for line_no, line in enumerate(lines, start=1):
        text = line.strip()
        if not text:
            continue
        try:
            obj = json.loads(text, parse_constant=_reject_constant)
        except ValueError as exc:
            issues.append((line_no, f"malformed line: {exc}"))
            continue
        if not isinstance(obj, dict):
            issues.append((line_no, "malformed line: expected a JSON object"))
            continue
        try:
            kind = obj.get("kind")
            if kind == "node":
                node = GraphNode(
                    id=_require_str(obj, "id"),
                    labels=_parse_labels(obj.get("labels", [])),
                    properties=_parse_properties(obj.get("properties", {})),
                )
                if node.id in nodes:
                    issues.append((line_no, f"duplicate node id {node.id!r}"))
                else:
                    nodes[node.id] = node
            elif kind == "edge":
                edge = GraphEdge(
                    id=_require_str(obj, "id"),
                    src=_require_str(obj, "src"),
                    dst=_require_str(obj, "dst"),
                    labels=_parse_labels(obj.get("labels", [])),
                    properties=_parse_properties(obj.get("properties", {})),
                )
                if edge.id in edges or any(e.id == edge.id for _, e in pending_edges):
                    issues.append((line_no, f"duplicate edge id {edge.id!r}"))
                else:
                    pending_edges.append((line_no, edge))
            else:
                issues.append((line_no, f"malformed line: 'kind' must be 'node' or 'edge', got {kind!r}"))
        except ValueError as exc:
            issues.append((line_no, f"malformed line: {exc}"))

    # endpoints may be declared after the edge, so resolve once all lines are read
    for line_no, edge in pending_edges:
        missing = [nid for nid in (edge.src, edge.dst) if nid not in nodes]
        if missing:
            for nid in missing:
                issues.append((line_no, f"edge {edge.id!r} references unknown node id {nid!r}"))
        else:
            edges[edge.id] = edge

    if issues:
        raise GraphLoadError(sorted(issues))
    return PropertyGraph(nodes=nodes, edges=edges)


def _reject_constant(name: str) -> Any:
    raise ValueError(f"non-finite number {name} is not allowed")


def load_graph_file(path) -> PropertyGraph:
    with open(path, "r", encoding="utf-8") as f:
        return load_graph(f)


def dump_graph(g: PropertyGraph) -> str:
    """Serialize a graph back to the line-oriented JSON format (nodes first)."""
    out = []
    for node in sorted(g.nodes.values(), key=lambda n: n.id):
        out.append(
            json.dumps(
                {
                    "kind": "node",
                    "id": node.id,
                    "labels": sorted(node.labels),
                    "properties": {k: _value_json(v) for k, v in sorted(node.properties.items())},
                },
                ensure_ascii=False,
            )
        )
    for edge in sorted(g.edges.values(), key=lambda e: e.id):
        out.append(
            json.dumps(
                {
                    "kind": "edge",
                    "id": edge.id,
                    "src": edge.src,
                    "dst": edge.dst,
                    "labels": sorted(edge.labels),
                    "properties": {k: _value_json(v) for k, v in sorted(edge.properties.items())},
                },
                ensure_ascii=False,
            )
        )
    return "\n".join(out) + ("\n" if out else "")


def _value_json(v: PropertyValue) -> Any:
    if isinstance(v, datetime.date):
        return v.isoformat()
    return v


def validate_conformance(
    graph: PropertyGraph, schema: SchemaGraph, *, open_world: bool = False
) -> ConformanceReport:
    """Check an instance graph against a schema.

    A node matches the node type whose label set equals its own exactly; an edge
    matches the edge type with the same label display and endpoint types.
    Undeclared properties are violations unless ``open_world`` is set.
    """
    violations: list[Violation] = []
    type_by_labels = {nt.labels: nt for nt in schema.node_types}
    node_type_of: dict[str, Optional[str]] = {}

    for node in sorted(graph.nodes.values(), key=lambda n: n.id):
        nt = type_by_labels.get(node.labels)
        node_type_of[node.id] = None if nt is None else nt.id
        if nt is None:
            violations.append(
                Violation(
                    node.id,
                    ViolationKind.UNKNOWN_TYPE,
                    f"node {node.id!r}: no node type with labels {display_labels(node.labels)!r}",
                )
            )
            continue
        violations.extend(_check_properties(node.id, f"node {node.id!r}", node.properties, nt, open_world))

    edges_by_label: dict[str, list] = {}
    for et in schema.edge_types:
        edges_by_label.setdefault(et.label, []).append(et)

    edge_instances: dict[str, list[GraphEdge]] = {}  # edge type id -> matched edges
    for edge in sorted(graph.edges.values(), key=lambda e: e.id):
        label = display_labels(edge.labels)
        candidates = edges_by_label.get(label)
        if not candidates:
            violations.append(
                Violation(
                    edge.id,
                    ViolationKind.UNKNOWN_TYPE,
                    f"edge {edge.id!r}: no edge type with label {label!r}",
                )
            )
            continue
        src_type = node_type_of.get(edge.src)
        dst_type = node_type_of.get(edge.dst)
        if src_type is None or dst_type is None:
            violations.append(
                Violation(
                    edge.id,
                    ViolationKind.ENDPOINT_MISMATCH,
                    f"edge {edge.id!r}: endpoint node has no matching node type",
                )
            )
            continue
        match = next((et for et in candidates if et.src == src_type and et.dst == dst_type), None)
        if match is None:
            violations.append(
                Violation(
                    edge.id,
                    ViolationKind.ENDPOINT_MISMATCH,
                    f"edge {edge.id!r}: no edge type {label!r} from "
                    f"{schema.node_display(src_type)!r} to {schema.node_display(dst_type)!r}",
                )
            )
            continue
        edge_instances.setdefault(match.id, []).append(edge)
        violations.extend(_check_properties(edge.id, f"edge {edge.id!r}", edge.properties, match, open_world))

    # cardinality: counts per endpoint instance of the declared endpoint types
    nodes_by_type: dict[str, list[GraphNode]] = {}
    for node in graph.nodes.values():
        nt = type_by_labels.get(node.labels)
        if nt is not None:
            nodes_by_type.setdefault(nt.id, []).append(node)

    for et in schema.edge_types:
        matched = edge_instances.get(et.id, [])
        out_counts: dict[str, int] = {}
        in_counts: dict[str, int] = {}
        for edge in matched:
            out_counts[edge.src] = out_counts.get(edge.src, 0) + 1
            in_counts[edge.dst] = in_counts.get(edge.dst, 0) + 1
        display = schema.edge_display(et)
        for node in sorted(nodes_by_type.get(et.src, []), key=lambda n: n.id):
            n = out_counts.get(node.id, 0)
            if not et.out_card.contains(n):
                violations.append(
                    Violation(
                        node.id,
                        ViolationKind.CARDINALITY_VIOLATION,
                        f"node {node.id!r}: {n} outgoing {display} edges, expected {et.out_card}",
                    )
                )
        for node in sorted(nodes_by_type.get(et.dst, []), key=lambda n: n.id):
            n = in_counts.get(node.id, 0)
            if not et.in_card.contains(n):
                violations.append(
                    Violation(
                        node.id,
                        ViolationKind.CARDINALITY_VIOLATION,
                        f"node {node.id!r}: {n} incoming {display} edges, expected {et.in_card}",
                    )
                )

    return ConformanceReport(tuple(violations))


def _check_properties(element_id, where, properties, owner_type, open_world) -> list[Violation]:
    out: list[Violation] = []
    declared = {p.name: p for p in owner_type.properties}
    for p in owner_type.properties:
        if p.required and p.name not in properties:
            out.append(
                Violation(
                    element_id,
                    ViolationKind.MISSING_REQUIRED_PROPERTY,
                    f"{where}: missing required property {p.name!r}",
                )
            )
    for key in sorted(properties):
        p = declared.get(key)
        if p is None:
            if not open_world:
                out.append(
                    Violation(
                        element_id,
                        ViolationKind.UNKNOWN_PROPERTY,
                        f"{where}: undeclared property {key!r}",
                    )
                )
            continue
        actual = kind_of(properties[key])
        if not is_subtype(actual, p.datatype):
            out.append(
                Violation(
                    element_id,
                    ViolationKind.WRONG_DATATYPE,
                    f"{where}: property {key!r} is {actual.value} but declared {p.datatype.value}",
                )
            )
    return out
