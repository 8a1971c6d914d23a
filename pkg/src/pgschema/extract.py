"""Schema extraction: infer a schema that the instance graph is guaranteed to match.

Typing discriminator is the full label set: one node type per distinct node
label set, one edge type per distinct (label set, source type, target type)
triple. Property datatypes are the least common supertype of the observed
values; a property is required exactly when every instance carries it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .graph import PropertyGraph, PropertyValue, kind_of
from .model import (
    IDENT_RE,
    UNLABELED,
    Cardinality,
    DataType,
    DEFAULT_CARDINALITY,
    EdgeType,
    NodeType,
    PropertyDef,
    SchemaGraph,
    display_labels,
    least_common_supertype,
)


class ExtractionError(ValueError):
    """The instance data cannot be represented in the schema model."""


@dataclass(frozen=True)
class ExtractionOptions:
    infer_cardinality: bool = True
    infer_subtypes: bool = False
    open_world: bool = False  # kept for pairing with validate_conformance


def infer_property_type(values: Iterable[PropertyValue]) -> DataType:
    """Fold of least_common_supertype over the kinds of the given values."""
    result: DataType | None = None
    for value in values:
        kind = kind_of(value)
        result = kind if result is None else least_common_supertype(result, kind)
    if result is None:
        raise ValueError("cannot infer a datatype from no values")
    return result


def _check_representable(labels: frozenset[str], what: str) -> None:
    for label in labels:
        if not IDENT_RE.match(label) or label == UNLABELED:
            raise ExtractionError(f"{what} label {label!r} cannot be represented in the schema DSL")


def _infer_properties(instances: list, what: str) -> tuple[PropertyDef, ...]:
    values_by_key: dict[str, list[PropertyValue]] = {}
    counts: dict[str, int] = {}
    for inst in instances:
        for key, value in inst.properties.items():
            if not IDENT_RE.match(key):
                raise ExtractionError(f"{what} property key {key!r} cannot be represented in the schema DSL")
            values_by_key.setdefault(key, []).append(value)
            counts[key] = counts.get(key, 0) + 1
    return tuple(
        PropertyDef(key, infer_property_type(values), required=counts[key] == len(instances))
        for key, values in sorted(values_by_key.items())
    )


def extract_schema(g: PropertyGraph, opts: ExtractionOptions = ExtractionOptions()) -> SchemaGraph:
    """Extract a schema from an instance graph; the graph always conforms to it."""
    node_groups: dict[frozenset[str], list] = {}
    for node in g.nodes.values():
        node_groups.setdefault(node.labels, []).append(node)

    node_types: dict[frozenset[str], NodeType] = {}
    for labels in sorted(node_groups, key=display_labels):
        _check_representable(labels, "node")
        node_types[labels] = NodeType(
            labels=labels, properties=_infer_properties(node_groups[labels], "node")
        )

    edge_groups: dict[tuple[str, frozenset[str], frozenset[str]], list] = {}
    for edge in g.edges.values():
        _check_representable(edge.labels, "edge")
        key = (display_labels(edge.labels), g.nodes[edge.src].labels, g.nodes[edge.dst].labels)
        edge_groups.setdefault(key, []).append(edge)

    edge_types: list[EdgeType] = []
    for label, src_labels, dst_labels in sorted(
        edge_groups, key=lambda k: (k[0], display_labels(k[1]), display_labels(k[2]))
    ):
        edges = edge_groups[(label, src_labels, dst_labels)]
        if opts.infer_cardinality:
            out_card = _observed_card(edges, node_groups[src_labels], side="src")
            in_card = _observed_card(edges, node_groups[dst_labels], side="dst")
        else:
            out_card = in_card = DEFAULT_CARDINALITY
        edge_types.append(
            EdgeType(
                label=label,
                src=node_types[src_labels].id,
                dst=node_types[dst_labels].id,
                properties=_infer_properties(edges, "edge"),
                out_card=out_card,
                in_card=in_card,
            )
        )

    schema = SchemaGraph(tuple(node_types.values()), tuple(edge_types))
    if opts.infer_subtypes:
        schema = infer_subtypes(schema)
    return schema


def _observed_card(edges: list, endpoint_nodes: list, side: str) -> Cardinality:
    """Tightest (min, max) of edge counts per endpoint instance; maxima are finite."""
    counts = {node.id: 0 for node in endpoint_nodes}
    for edge in edges:
        counts[getattr(edge, side)] += 1
    values = counts.values()
    return Cardinality(min(values), max(values))


def infer_subtypes(s: SchemaGraph) -> SchemaGraph:
    """Link each type to the most specific type whose label set and required
    property names are both subsets of its own. Existing links are preserved;
    strict subset ordering keeps the result acyclic."""
    def required_names(nt: NodeType) -> set[str]:
        return {p.name for p in nt.properties if p.required}

    updated: list[NodeType] = []
    for nt in s.node_types:
        if nt.supertype is not None:
            updated.append(nt)
            continue
        candidates = [
            other
            for other in s.node_types
            if other.labels < nt.labels and required_names(other) <= required_names(nt)
        ]
        if not candidates:
            updated.append(nt)
            continue
        best = max(candidates, key=lambda c: (len(c.labels), c.display_name))
        updated.append(
            NodeType(labels=nt.labels, properties=nt.properties, supertype=best.id, id=nt.id)
        )
    return SchemaGraph(tuple(updated), s.edge_types)
