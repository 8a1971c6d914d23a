"""Schema diffing: typed change records, patching, semantic sentences, and
visual annotations.

Matching is by public identity: node types by display name, properties by key,
edge types by (label, src, dst) with a fallback that pairs a uniquely-labeled
edge across both sides so endpoint changes are reported as changes rather than
remove+add. Renames therefore appear as remove+add by design.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Any

from .model import (
    Cardinality,
    DataType,
    EdgeType,
    NodeType,
    PropertyDef,
    SchemaGraph,
    SchemaIntegrityError,
    canonicalize,
)


class ChangeKind(Enum):
    ADDED_NODE_TYPE = "AddedNodeType"
    REMOVED_NODE_TYPE = "RemovedNodeType"
    ADDED_EDGE_TYPE = "AddedEdgeType"
    REMOVED_EDGE_TYPE = "RemovedEdgeType"
    ADDED_PROPERTY = "AddedProperty"
    REMOVED_PROPERTY = "RemovedProperty"
    CHANGED_PROPERTY_TYPE = "ChangedPropertyType"
    CHANGED_PROPERTY_REQUIRED = "ChangedPropertyRequired"
    CHANGED_CARDINALITY = "ChangedCardinality"
    CHANGED_SUPERTYPE = "ChangedSupertype"
    CHANGED_EDGE_ENDPOINTS = "ChangedEdgeEndpoints"

    def __str__(self) -> str:
        return self.value


_REMOVALS = {ChangeKind.REMOVED_NODE_TYPE, ChangeKind.REMOVED_EDGE_TYPE, ChangeKind.REMOVED_PROPERTY}
_ADDITIONS = {ChangeKind.ADDED_NODE_TYPE, ChangeKind.ADDED_EDGE_TYPE, ChangeKind.ADDED_PROPERTY}


@dataclass(frozen=True)
class ChangeRecord:
    kind: ChangeKind
    subject: str
    before: Any = None
    after: Any = None

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind.value, "subject": self.subject, "before": self.before, "after": self.after}


@dataclass(frozen=True)
class SchemaDiff:
    records: tuple[ChangeRecord, ...] = ()

    @property
    def is_empty(self) -> bool:
        return not self.records

    def to_json(self) -> list[dict[str, Any]]:
        return [r.to_json() for r in self.records]


class DiffConflictError(ValueError):
    """A diff record cannot be applied to the base schema."""


def _dtype_str(dt: DataType) -> str:
    return dt.value.lower()


def _card_json(c: Cardinality) -> list:
    return [c.min_count, c.max_count]


def _prop_payload(p: PropertyDef) -> dict[str, Any]:
    return {"name": p.name, "type": _dtype_str(p.datatype), "required": p.required}


def _node_payload(s: SchemaGraph, nt: NodeType) -> dict[str, Any]:
    return {
        "labels": sorted(nt.labels),
        "supertype": None if nt.supertype is None else s.node_display(nt.supertype),
        "properties": [_prop_payload(p) for p in nt.properties],
    }


def _edge_payload(s: SchemaGraph, et: EdgeType) -> dict[str, Any]:
    return {
        "label": et.label,
        "src": s.node_display(et.src),
        "dst": s.node_display(et.dst),
        "outCard": _card_json(et.out_card),
        "inCard": _card_json(et.in_card),
        "properties": [_prop_payload(p) for p in et.properties],
    }


def _arrow(label: str, src: str, dst: str) -> str:
    return f"({src})-[{label}]->({dst})"


_ARROW_RE = re.compile(r"^\((?P<src>[^)]+)\)-\[(?P<label>[^\]]+)\]->\((?P<dst>[^)]+)\)$")


def _diff_properties(owner: str, old: tuple[PropertyDef, ...], new: tuple[PropertyDef, ...]) -> list[ChangeRecord]:
    records: list[ChangeRecord] = []
    old_by_name = {p.name: p for p in old}
    new_by_name = {p.name: p for p in new}
    for name, p in old_by_name.items():
        if name not in new_by_name:
            records.append(ChangeRecord(ChangeKind.REMOVED_PROPERTY, f"{owner}.{name}", before=_prop_payload(p)))
    for name, p in new_by_name.items():
        if name not in old_by_name:
            records.append(ChangeRecord(ChangeKind.ADDED_PROPERTY, f"{owner}.{name}", after=_prop_payload(p)))
    for name in old_by_name.keys() & new_by_name.keys():
        before, after = old_by_name[name], new_by_name[name]
        if before.datatype is not after.datatype:
            records.append(
                ChangeRecord(
                    ChangeKind.CHANGED_PROPERTY_TYPE,
                    f"{owner}.{name}",
                    before=_dtype_str(before.datatype),
                    after=_dtype_str(after.datatype),
                )
            )
        if before.required != after.required:
            records.append(
                ChangeRecord(
                    ChangeKind.CHANGED_PROPERTY_REQUIRED,
                    f"{owner}.{name}",
                    before=before.required,
                    after=after.required,
                )
            )
    return records


def _phase(kind: ChangeKind) -> int:
    if kind in _REMOVALS:
        return 0
    if kind in _ADDITIONS:
        return 1
    return 2


def compute_diff(old: SchemaGraph, new: SchemaGraph) -> SchemaDiff:
    """Ordered change records; applying them to ``old`` reproduces ``new``."""
    co, cn = canonicalize(old), canonicalize(new)
    records: list[ChangeRecord] = []

    old_nodes = {nt.display_name: nt for nt in co.node_types}
    new_nodes = {nt.display_name: nt for nt in cn.node_types}
    for name, nt in old_nodes.items():
        if name not in new_nodes:
            records.append(ChangeRecord(ChangeKind.REMOVED_NODE_TYPE, name, before=_node_payload(co, nt)))
    for name, nt in new_nodes.items():
        if name not in old_nodes:
            records.append(ChangeRecord(ChangeKind.ADDED_NODE_TYPE, name, after=_node_payload(cn, nt)))
    for name in old_nodes.keys() & new_nodes.keys():
        before, after = old_nodes[name], new_nodes[name]
        records.extend(_diff_properties(name, before.properties, after.properties))
        before_super = None if before.supertype is None else co.node_display(before.supertype)
        after_super = None if after.supertype is None else cn.node_display(after.supertype)
        if before_super != after_super:
            records.append(
                ChangeRecord(ChangeKind.CHANGED_SUPERTYPE, name, before=before_super, after=after_super)
            )

    old_edges = {(et.label, co.node_display(et.src), co.node_display(et.dst)): et for et in co.edge_types}
    new_edges = {(et.label, cn.node_display(et.src), cn.node_display(et.dst)): et for et in cn.edge_types}

    def _edge_changes(subject: str, before: EdgeType, after: EdgeType) -> list[ChangeRecord]:
        out = _diff_properties(subject, before.properties, after.properties)
        if before.out_card != after.out_card or before.in_card != after.in_card:
            out.append(
                ChangeRecord(
                    ChangeKind.CHANGED_CARDINALITY,
                    subject,
                    before={"out": _card_json(before.out_card), "in": _card_json(before.in_card)},
                    after={"out": _card_json(after.out_card), "in": _card_json(after.in_card)},
                )
            )
        return out

    removed_triples = [t for t in old_edges if t not in new_edges]
    added_triples = [t for t in new_edges if t not in old_edges]
    for triple in old_edges.keys() & new_edges.keys():
        records.extend(_edge_changes(_arrow(*triple), old_edges[triple], new_edges[triple]))

    # a label appearing exactly once among the leftovers of both sides is the
    # same edge with moved endpoints, not a remove+add
    removed_by_label: dict[str, list[tuple[str, str, str]]] = {}
    added_by_label: dict[str, list[tuple[str, str, str]]] = {}
    for triple in removed_triples:
        removed_by_label.setdefault(triple[0], []).append(triple)
    for triple in added_triples:
        added_by_label.setdefault(triple[0], []).append(triple)

    for triple in removed_triples:
        label = triple[0]
        olds = removed_by_label[label]
        news = added_by_label.get(label, [])
        if len(olds) == 1 and len(news) == 1:
            old_et, new_et = old_edges[triple], new_edges[news[0]]
            records.append(
                ChangeRecord(
                    ChangeKind.CHANGED_EDGE_ENDPOINTS,
                    label,
                    before={"src": triple[1], "dst": triple[2]},
                    after={"src": news[0][1], "dst": news[0][2]},
                )
            )
            records.extend(_edge_changes(_arrow(*triple), old_et, new_et))
        else:
            records.append(
                ChangeRecord(ChangeKind.REMOVED_EDGE_TYPE, _arrow(*triple), before=_edge_payload(co, old_edges[triple]))
            )
    for triple in added_triples:
        label = triple[0]
        if len(removed_by_label.get(label, [])) == 1 and len(added_by_label[label]) == 1:
            continue  # reported as ChangedEdgeEndpoints above
        records.append(
            ChangeRecord(ChangeKind.ADDED_EDGE_TYPE, _arrow(*triple), after=_edge_payload(cn, new_edges[triple]))
        )

    records.sort(key=lambda r: (_phase(r.kind), r.subject, r.kind.value))
    return SchemaDiff(tuple(records))


# --------------------------------------------------------------------- apply

class _Draft:
    """Mutable working copy keyed by public identity; validated on build."""

    def __init__(self, base: SchemaGraph):
        c = canonicalize(base)
        self.nodes: dict[str, dict] = {}
        self.edges: dict[tuple[str, str, str], dict] = {}
        for nt in c.node_types:
            self.nodes[nt.display_name] = {
                "labels": nt.labels,
                "supertype": None if nt.supertype is None else c.node_display(nt.supertype),
                "props": {p.name: (p.datatype, p.required) for p in nt.properties},
            }
        for et in c.edge_types:
            key = (et.label, c.node_display(et.src), c.node_display(et.dst))
            self.edges[key] = {
                "props": {p.name: (p.datatype, p.required) for p in et.properties},
                "out": et.out_card,
                "in": et.in_card,
            }

    def owner_props(self, owner: str, record: ChangeRecord) -> dict:
        m = _ARROW_RE.match(owner)
        if m:
            key = (m.group("label"), m.group("src"), m.group("dst"))
            if key not in self.edges:
                raise DiffConflictError(f"{record.kind}: no edge type {owner}")
            return self.edges[key]["props"]
        if owner not in self.nodes:
            raise DiffConflictError(f"{record.kind}: no node type {owner!r}")
        return self.nodes[owner]["props"]

    def build(self) -> SchemaGraph:
        node_types: dict[str, NodeType] = {
            name: NodeType(labels=data["labels"]) for name, data in self.nodes.items()
        }
        nodes = []
        for name, data in self.nodes.items():
            supertype = data["supertype"]
            if supertype is not None and supertype not in node_types:
                raise DiffConflictError(f"supertype {supertype!r} of {name!r} does not exist")
            nodes.append(
                NodeType(
                    labels=data["labels"],
                    properties=tuple(PropertyDef(k, dt, req) for k, (dt, req) in sorted(data["props"].items())),
                    supertype=None if supertype is None else node_types[supertype].id,
                    id=node_types[name].id,
                )
            )
        edges = []
        for (label, src, dst), data in self.edges.items():
            if src not in node_types or dst not in node_types:
                raise DiffConflictError(f"edge {_arrow(label, src, dst)} references a missing node type")
            edges.append(
                EdgeType(
                    label=label,
                    src=node_types[src].id,
                    dst=node_types[dst].id,
                    properties=tuple(PropertyDef(k, dt, req) for k, (dt, req) in sorted(data["props"].items())),
                    out_card=data["out"],
                    in_card=data["in"],
                )
            )
        try:
            return SchemaGraph(tuple(nodes), tuple(edges))
        except SchemaIntegrityError as exc:
            raise DiffConflictError(str(exc)) from exc


def _to_dtype(raw: str) -> DataType:
    try:
        return DataType[raw.upper()]
    except KeyError:
        raise DiffConflictError(f"unknown datatype {raw!r}") from None


def _to_card(raw: Any) -> Cardinality:
    return Cardinality(raw[0], raw[1])


_APPLY_ORDER = [
    ChangeKind.REMOVED_PROPERTY,
    ChangeKind.REMOVED_EDGE_TYPE,
    ChangeKind.REMOVED_NODE_TYPE,
    ChangeKind.ADDED_NODE_TYPE,
    ChangeKind.ADDED_EDGE_TYPE,
    ChangeKind.ADDED_PROPERTY,
    ChangeKind.CHANGED_PROPERTY_TYPE,
    ChangeKind.CHANGED_PROPERTY_REQUIRED,
    ChangeKind.CHANGED_CARDINALITY,
    ChangeKind.CHANGED_SUPERTYPE,
    ChangeKind.CHANGED_EDGE_ENDPOINTS,
]


def apply_diff(base: SchemaGraph, d: SchemaDiff) -> SchemaGraph:
    """Patch ``base`` with the diff; raises DiffConflictError on the first
    record that does not resolve."""
    draft = _Draft(base)
    by_kind: dict[ChangeKind, list[ChangeRecord]] = {}
    for record in d.records:
        by_kind.setdefault(record.kind, []).append(record)

    for kind in _APPLY_ORDER:
        for record in by_kind.get(kind, []):
            _apply_record(draft, record)
    return draft.build()


def _split_subject(subject: str) -> tuple[str, str]:
    owner, _, key = subject.rpartition(".")
    return owner, key


def _apply_record(draft: _Draft, record: ChangeRecord) -> None:
    kind = record.kind
    if kind is ChangeKind.REMOVED_PROPERTY:
        owner, key = _split_subject(record.subject)
        props = draft.owner_props(owner, record)
        if key not in props:
            raise DiffConflictError(f"{kind}: {record.subject} does not exist")
        del props[key]
    elif kind is ChangeKind.REMOVED_EDGE_TYPE:
        m = _ARROW_RE.match(record.subject)
        key = (m.group("label"), m.group("src"), m.group("dst")) if m else None
        if key is None or key not in draft.edges:
            raise DiffConflictError(f"{kind}: no edge type {record.subject}")
        del draft.edges[key]
    elif kind is ChangeKind.REMOVED_NODE_TYPE:
        if record.subject not in draft.nodes:
            raise DiffConflictError(f"{kind}: no node type {record.subject!r}")
        del draft.nodes[record.subject]
    elif kind is ChangeKind.ADDED_NODE_TYPE:
        if record.subject in draft.nodes:
            raise DiffConflictError(f"{kind}: node type {record.subject!r} already exists")
        payload = record.after
        draft.nodes[record.subject] = {
            "labels": frozenset(payload["labels"]),
            "supertype": payload.get("supertype"),
            "props": {p["name"]: (_to_dtype(p["type"]), p["required"]) for p in payload["properties"]},
        }
    elif kind is ChangeKind.ADDED_EDGE_TYPE:
        payload = record.after
        key = (payload["label"], payload["src"], payload["dst"])
        if key in draft.edges:
            raise DiffConflictError(f"{kind}: edge type {record.subject} already exists")
        draft.edges[key] = {
            "props": {p["name"]: (_to_dtype(p["type"]), p["required"]) for p in payload["properties"]},
            "out": _to_card(payload["outCard"]),
            "in": _to_card(payload["inCard"]),
        }
    elif kind is ChangeKind.ADDED_PROPERTY:
        owner, key = _split_subject(record.subject)
        props = draft.owner_props(owner, record)
        if key in props:
            raise DiffConflictError(f"{kind}: {record.subject} already exists")
        props[key] = (_to_dtype(record.after["type"]), record.after["required"])
    elif kind is ChangeKind.CHANGED_PROPERTY_TYPE:
        owner, key = _split_subject(record.subject)
        props = draft.owner_props(owner, record)
        if key not in props:
            raise DiffConflictError(f"{kind}: {record.subject} does not exist")
        props[key] = (_to_dtype(record.after), props[key][1])
    elif kind is ChangeKind.CHANGED_PROPERTY_REQUIRED:
        owner, key = _split_subject(record.subject)
        props = draft.owner_props(owner, record)
        if key not in props:
            raise DiffConflictError(f"{kind}: {record.subject} does not exist")
        props[key] = (props[key][0], bool(record.after))
    elif kind is ChangeKind.CHANGED_CARDINALITY:
        m = _ARROW_RE.match(record.subject)
        key = (m.group("label"), m.group("src"), m.group("dst")) if m else None
        if key is None or key not in draft.edges:
            raise DiffConflictError(f"{kind}: no edge type {record.subject}")
        draft.edges[key]["out"] = _to_card(record.after["out"])
        draft.edges[key]["in"] = _to_card(record.after["in"])
    elif kind is ChangeKind.CHANGED_SUPERTYPE:
        if record.subject not in draft.nodes:
            raise DiffConflictError(f"{kind}: no node type {record.subject!r}")
        draft.nodes[record.subject]["supertype"] = record.after
    elif kind is ChangeKind.CHANGED_EDGE_ENDPOINTS:
        old_key = (record.subject, record.before["src"], record.before["dst"])
        new_key = (record.subject, record.after["src"], record.after["dst"])
        if old_key not in draft.edges:
            raise DiffConflictError(f"{kind}: no edge type {_arrow(*old_key)}")
        if new_key in draft.edges:
            raise DiffConflictError(f"{kind}: edge type {_arrow(*new_key)} already exists")
        draft.edges[new_key] = draft.edges.pop(old_key)
    else:  # pragma: no cover
        raise DiffConflictError(f"unknown change kind {kind!r}")


# ------------------------------------------------------------------ rendering

def _card_str(raw: list) -> str:
    hi = "*" if raw[1] is None else str(raw[1])
    return f"{raw[0]}..{hi}"


def render_semantic(d: SchemaDiff) -> list[str]:
    """One deterministic English sentence per change record."""
    out = []
    for r in d.records:
        kind = r.kind
        if kind is ChangeKind.ADDED_NODE_TYPE:
            out.append(f"Added node {r.subject}")
        elif kind is ChangeKind.REMOVED_NODE_TYPE:
            out.append(f"Removed node {r.subject}")
        elif kind is ChangeKind.ADDED_EDGE_TYPE:
            p = r.after
            out.append(f"Added edge {p['label']} from {p['src']} to {p['dst']}")
        elif kind is ChangeKind.REMOVED_EDGE_TYPE:
            p = r.before
            out.append(f"Removed edge {p['label']} from {p['src']} to {p['dst']}")
        elif kind is ChangeKind.ADDED_PROPERTY:
            out.append(f"Added property {r.subject}: {r.after['type']}")
        elif kind is ChangeKind.REMOVED_PROPERTY:
            out.append(f"Removed property {r.subject}")
        elif kind is ChangeKind.CHANGED_PROPERTY_TYPE:
            out.append(f"Changed property type {r.subject} from {r.before} to {r.after}")
        elif kind is ChangeKind.CHANGED_PROPERTY_REQUIRED:
            out.append(f"Changed property {r.subject} to {'required' if r.after else 'optional'}")
        elif kind is ChangeKind.CHANGED_CARDINALITY:
            out.append(
                f"Changed cardinality of {r.subject} from out {_card_str(r.before['out'])} "
                f"in {_card_str(r.before['in'])} to out {_card_str(r.after['out'])} "
                f"in {_card_str(r.after['in'])}"
            )
        elif kind is ChangeKind.CHANGED_SUPERTYPE:
            out.append(
                f"Changed supertype of {r.subject} from {r.before or 'none'} to {r.after or 'none'}"
            )
        elif kind is ChangeKind.CHANGED_EDGE_ENDPOINTS:
            out.append(
                f"Changed endpoints of {r.subject} from ({r.before['src']})->({r.before['dst']}) "
                f"to ({r.after['src']})->({r.after['dst']})"
            )
    return out


# ------------------------------------------------------------------ visual

@dataclass(frozen=True)
class ElementStatus:
    status: str  # added | removed | modified | unchanged
    symbol: str  # + | - | ~ | empty string


_SYMBOLS = {"added": "+", "removed": "-", "modified": "~", "unchanged": ""}


def _status(name: str) -> ElementStatus:
    return ElementStatus(name, _SYMBOLS[name])


# element display name -> status; the symbol always accompanies the status so
# color is never the only channel
VisualAnnotation = dict[str, ElementStatus]


def annotate_visual(old: SchemaGraph, new: SchemaGraph, d: SchemaDiff) -> VisualAnnotation:
    co, cn = canonicalize(old), canonicalize(new)
    old_names = {nt.display_name for nt in co.node_types} | {co.edge_display(et) for et in co.edge_types}
    new_names = {nt.display_name for nt in cn.node_types} | {cn.edge_display(et) for et in cn.edge_types}

    touched: set[str] = set()
    for r in d.records:
        if r.kind in (ChangeKind.ADDED_PROPERTY, ChangeKind.REMOVED_PROPERTY,
                      ChangeKind.CHANGED_PROPERTY_TYPE, ChangeKind.CHANGED_PROPERTY_REQUIRED):
            touched.add(_split_subject(r.subject)[0])
        elif r.kind is ChangeKind.CHANGED_EDGE_ENDPOINTS:
            touched.add(_arrow(r.subject, r.before["src"], r.before["dst"]))
            touched.add(_arrow(r.subject, r.after["src"], r.after["dst"]))
        else:
            touched.add(r.subject)

    annotations: VisualAnnotation = {}
    for name in sorted(old_names | new_names):
        if name not in new_names:
            annotations[name] = _status("removed")
        elif name not in old_names:
            annotations[name] = _status("added")
        elif name in touched:
            annotations[name] = _status("modified")
        else:
            annotations[name] = _status("unchanged")
    return annotations
