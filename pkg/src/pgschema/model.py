"""Schema graph model: node/edge types, property definitions, and the datatype lattice."""

from __future__ import annotations

import re
import uuid
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Iterable, Optional

IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

# Display name of the synthetic type for elements with an empty label set.
UNLABELED = "_Unlabeled"


class DataType(Enum):
    STRING = "STRING"
    INTEGER = "INTEGER"
    FLOAT = "FLOAT"
    BOOLEAN = "BOOLEAN"
    DATE = "DATE"
    ANY = "ANY"

    def __str__(self) -> str:
        return self.value


def is_subtype(a: DataType, b: DataType) -> bool:
    """True iff a value of type ``a`` is acceptable where ``b`` is declared.

    The lattice: INTEGER below FLOAT, everything below ANY, reflexive otherwise.
    """
    if a is b or b is DataType.ANY:
        return True
    return a is DataType.INTEGER and b is DataType.FLOAT


def least_common_supertype(a: DataType, b: DataType) -> DataType:
    """Least upper bound of two datatypes in the lattice."""
    if a is b:
        return a
    if {a, b} == {DataType.INTEGER, DataType.FLOAT}:
        return DataType.FLOAT
    return DataType.ANY


class SchemaIntegrityError(ValueError):
    """A schema value violates a structural invariant (dangling refs, name clashes...)."""


class UnknownElementError(ValueError):
    """Lookup of a schema element that does not exist."""


def new_id() -> str:
    """Fresh opaque element id; only meaningful within a session."""
    return uuid.uuid4().hex[:12]


def display_labels(labels: frozenset[str]) -> str:
    """Public display name for a label set: sorted labels joined by '&'."""
    return "&".join(sorted(labels)) if labels else UNLABELED


@dataclass(frozen=True)
class PropertyDef:
    name: str
    datatype: DataType
    required: bool = True


@dataclass(frozen=True)
class Cardinality:
    """Closed interval of edge counts; ``max_count`` of None means unbounded."""

    min_count: int = 0
    max_count: Optional[int] = None

    UNBOUNDED = None

    def contains(self, n: int) -> bool:
        return n >= self.min_count and (self.max_count is None or n <= self.max_count)

    def __str__(self) -> str:
        hi = "*" if self.max_count is None else str(self.max_count)
        return f"{self.min_count}..{hi}"


DEFAULT_CARDINALITY = Cardinality(0, None)


@dataclass(frozen=True)
class NodeType:
    labels: frozenset[str]
    properties: tuple[PropertyDef, ...] = ()
    supertype: Optional[str] = None  # id of another NodeType
    id: str = field(default_factory=new_id)

    @property
    def display_name(self) -> str:
        return display_labels(self.labels)

    def property_by_name(self, name: str) -> Optional[PropertyDef]:
        for p in self.properties:
            if p.name == name:
                return p
        return None


@dataclass(frozen=True)
class EdgeType:
    label: str
    src: str  # NodeType id
    dst: str  # NodeType id
    properties: tuple[PropertyDef, ...] = ()
    out_card: Cardinality = DEFAULT_CARDINALITY  # edges per source node
    in_card: Cardinality = DEFAULT_CARDINALITY  # edges per target node
    id: str = field(default_factory=new_id)

    def property_by_name(self, name: str) -> Optional[PropertyDef]:
        for p in self.properties:
            if p.name == name:
                return p
        return None


@dataclass(frozen=True)
class SchemaGraph:
    """An immutable schema value; construction validates all structural invariants."""

    node_types: tuple[NodeType, ...] = ()
    edge_types: tuple[EdgeType, ...] = ()

    def __post_init__(self) -> None:
        _validate(self)

    # -- lookups (by public display identity and by session-internal id) --

    def node_by_name(self, display_name: str) -> Optional[NodeType]:
        for nt in self.node_types:
            if nt.display_name == display_name:
                return nt
        return None

    def node_by_id(self, type_id: str) -> Optional[NodeType]:
        for nt in self.node_types:
            if nt.id == type_id:
                return nt
        return None

    def node_by_labels(self, labels: frozenset[str]) -> Optional[NodeType]:
        for nt in self.node_types:
            if nt.labels == labels:
                return nt
        return None

    def edge_by_id(self, type_id: str) -> Optional[EdgeType]:
        for et in self.edge_types:
            if et.id == type_id:
                return et
        return None

    def edge_by_triple(self, label: str, src_name: str, dst_name: str) -> Optional[EdgeType]:
        for et in self.edge_types:
            if (
                et.label == label
                and self.node_display(et.src) == src_name
                and self.node_display(et.dst) == dst_name
            ):
                return et
        return None

    def node_display(self, type_id: str) -> str:
        nt = self.node_by_id(type_id)
        if nt is None:
            raise SchemaIntegrityError(f"no node type with id {type_id!r}")
        return nt.display_name

    def edge_display(self, et: EdgeType) -> str:
        """Arrow-form display identity, e.g. ``(Person)-[WORKS_AT]->(Company)``."""
        return f"({self.node_display(et.src)})-[{et.label}]->({self.node_display(et.dst)})"

    @property
    def is_empty(self) -> bool:
        return not self.node_types and not self.edge_types


def _check_property_list(owner: str, props: Iterable[PropertyDef]) -> None:
    seen: set[str] = set()
    for p in props:
        if not p.name or not IDENT_RE.match(p.name):
            raise SchemaIntegrityError(f"{owner}: invalid property name {p.name!r}")
        if p.name in seen:
            raise SchemaIntegrityError(f"{owner}: duplicate property {p.name!r}")
        if not isinstance(p.datatype, DataType):
            raise SchemaIntegrityError(f"{owner}.{p.name}: datatype must be a DataType")
        seen.add(p.name)


def _check_cardinality(owner: str, which: str, c: Cardinality) -> None:
    if c.min_count < 0:
        raise SchemaIntegrityError(f"{owner}: {which} cardinality min must be >= 0")
    if c.max_count is not None and c.max_count < 1:
        raise SchemaIntegrityError(f"{owner}: {which} cardinality max must be >= 1")
    if c.max_count is not None and c.min_count > c.max_count:
        raise SchemaIntegrityError(f"{owner}: {which} cardinality min {c.min_count} > max {c.max_count}")


def _validate(s: SchemaGraph) -> None:
    # The single construction-time check every operation relies on: no operation
    # can hand out a schema with dangling references or colliding identities.
    ids: set[str] = set()
    names: set[str] = set()
    by_id: dict[str, NodeType] = {}
    for nt in s.node_types:
        if nt.id in ids:
            raise SchemaIntegrityError(f"duplicate node type id {nt.id!r}")
        ids.add(nt.id)
        for label in nt.labels:
            if not IDENT_RE.match(label):
                raise SchemaIntegrityError(f"label {label!r} is not a valid identifier")
            if label == UNLABELED:
                raise SchemaIntegrityError(f"label {UNLABELED!r} is reserved for the empty label set")
        name = nt.display_name
        if name in names:
            raise SchemaIntegrityError(f"duplicate node type {name!r}")
        names.add(name)
        _check_property_list(name, nt.properties)
        by_id[nt.id] = nt

    for nt in s.node_types:
        if nt.supertype is not None and nt.supertype not in by_id:
            raise SchemaIntegrityError(f"{nt.display_name}: unknown supertype id {nt.supertype!r}")

    # supertype chains must be acyclic
    for nt in s.node_types:
        seen_chain = {nt.id}
        cur = nt.supertype
        while cur is not None:
            if cur in seen_chain:
                raise SchemaIntegrityError(f"supertype cycle through {nt.display_name!r}")
            seen_chain.add(cur)
            cur = by_id[cur].supertype

    edge_ids: set[str] = set()
    triples: set[tuple[str, str, str]] = set()
    for et in s.edge_types:
        if et.id in edge_ids:
            raise SchemaIntegrityError(f"duplicate edge type id {et.id!r}")
        edge_ids.add(et.id)
        # the label is the display form of a label set; UNLABELED stands for the empty set
        if et.label != UNLABELED:
            parts = et.label.split("&")
            if parts != sorted(set(parts)):
                raise SchemaIntegrityError(f"edge label {et.label!r} must be sorted unique labels")
            for part in parts:
                if not IDENT_RE.match(part) or part == UNLABELED:
                    raise SchemaIntegrityError(f"edge label {et.label!r} is not a valid label set")
        if et.src not in by_id:
            raise SchemaIntegrityError(f"edge {et.label!r}: unknown source type id {et.src!r}")
        if et.dst not in by_id:
            raise SchemaIntegrityError(f"edge {et.label!r}: unknown target type id {et.dst!r}")
        triple = (et.label, et.src, et.dst)
        if triple in triples:
            raise SchemaIntegrityError(
                f"duplicate edge type ({by_id[et.src].display_name})-[{et.label}]->({by_id[et.dst].display_name})"
            )
        triples.add(triple)
        owner = f"({by_id[et.src].display_name})-[{et.label}]->({by_id[et.dst].display_name})"
        _check_property_list(owner, et.properties)
        _check_cardinality(owner, "out", et.out_card)
        _check_cardinality(owner, "in", et.in_card)


def _sorted_props(props: tuple[PropertyDef, ...]) -> tuple[PropertyDef, ...]:
    return tuple(sorted(props, key=lambda p: p.name))


def canonicalize(s: SchemaGraph) -> SchemaGraph:
    """Deterministic ordering: node types by display name, edge types by
    (label, source name, target name), properties by name."""
    nodes = tuple(
        replace(nt, properties=_sorted_props(nt.properties))
        for nt in sorted(s.node_types, key=lambda nt: nt.display_name)
    )
    edges = tuple(
        replace(et, properties=_sorted_props(et.properties))
        for et in sorted(
            s.edge_types,
            key=lambda et: (et.label, s.node_display(et.src), s.node_display(et.dst)),
        )
    )
    return SchemaGraph(nodes, edges)


def _canonical_key(s: SchemaGraph) -> tuple:
    c = canonicalize(s)
    nodes = tuple(
        (
            nt.display_name,
            None if nt.supertype is None else c.node_display(nt.supertype),
            tuple((p.name, p.datatype.value, p.required) for p in nt.properties),
        )
        for nt in c.node_types
    )
    edges = tuple(
        (
            et.label,
            c.node_display(et.src),
            c.node_display(et.dst),
            (et.out_card.min_count, et.out_card.max_count),
            (et.in_card.min_count, et.in_card.max_count),
            tuple((p.name, p.datatype.value, p.required) for p in et.properties),
        )
        for et in c.edge_types
    )
    return (nodes, edges)


def schema_equal(a: SchemaGraph, b: SchemaGraph) -> bool:
    """Structural equality by canonical form, ignoring session-internal ids."""
    return _canonical_key(a) == _canonical_key(b)


def _card_json(c: Cardinality) -> list:
    return [c.min_count, c.max_count]


def _props_json(props: tuple[PropertyDef, ...]) -> list[dict[str, Any]]:
    return [
        {"name": p.name, "type": p.datatype.value, "required": p.required}
        for p in _sorted_props(props)
    ]


def schema_to_json(s: SchemaGraph, *, include_ids: bool = False) -> dict[str, Any]:
    """JSON rendering of a schema (the export format; ids only for session use)."""
    c = canonicalize(s)
    node_types = []
    for nt in c.node_types:
        entry: dict[str, Any] = {
            "labels": sorted(nt.labels),
            "supertype": None if nt.supertype is None else c.node_display(nt.supertype),
            "properties": _props_json(nt.properties),
        }
        if include_ids:
            entry["id"] = nt.id
            entry["displayName"] = nt.display_name
        node_types.append(entry)
    edge_types = []
    for et in c.edge_types:
        entry = {
            "label": et.label,
            "src": c.node_display(et.src),
            "dst": c.node_display(et.dst),
            "outCard": _card_json(et.out_card),
            "inCard": _card_json(et.in_card),
            "properties": _props_json(et.properties),
        }
        if include_ids:
            entry["id"] = et.id
            entry["displayName"] = c.edge_display(et)
        edge_types.append(entry)
    return {"nodeTypes": node_types, "edgeTypes": edge_types}
