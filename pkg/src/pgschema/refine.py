"""Schema refinement operations: pure transformations from schema to schema.

Elements are addressed by public identity: node types by display name, edge
types by their (label, source name, target name) triple or a session-internal
id. Every operation returns a new schema; the construction-time integrity
check guards them all.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Any, Optional, Union

from .model import (
    UNLABELED,
    Cardinality,
    DataType,
    DEFAULT_CARDINALITY,
    EdgeType,
    NodeType,
    PropertyDef,
    SchemaGraph,
    UnknownElementError,
    display_labels,
    least_common_supertype,
    new_id,
)


class EditError(ValueError):
    """An edit cannot be applied to the given schema."""


class DuplicateNameError(EditError):
    """The edit would introduce a colliding type name."""


@dataclass(frozen=True)
class EdgeRef:
    """Public identity of an edge type."""

    label: str
    src: str
    dst: str

    def __str__(self) -> str:
        return f"({self.src})-[{self.label}]->({self.dst})"


# an edge may also be addressed by its session-internal id
EdgeSel = Union[EdgeRef, str]
Owner = Union[str, EdgeRef]


def labels_from_name(name: str) -> frozenset[str]:
    """Parse a display name back into a label set (``_Unlabeled`` means empty)."""
    if name == UNLABELED:
        return frozenset()
    return frozenset(name.split("&"))


# ---------------------------------------------------------------- basic edits

@dataclass(frozen=True)
class AddNodeType:
    labels: frozenset[str]


@dataclass(frozen=True)
class RemoveNodeType:
    name: str


@dataclass(frozen=True)
class AddEdgeType:
    label: str
    src: str
    dst: str


@dataclass(frozen=True)
class RemoveEdgeType:
    label: str
    src: str
    dst: str


@dataclass(frozen=True)
class AddProperty:
    owner: Owner
    prop: PropertyDef


@dataclass(frozen=True)
class RemoveProperty:
    owner: Owner
    name: str


@dataclass(frozen=True)
class SetPropertyType:
    owner: Owner
    name: str
    datatype: DataType


@dataclass(frozen=True)
class SetPropertyRequired:
    owner: Owner
    name: str
    required: bool


@dataclass(frozen=True)
class FlipEdgeDirection:
    edge: EdgeSel


@dataclass(frozen=True)
class SetCardinality:
    edge: EdgeSel
    out_card: Cardinality
    in_card: Cardinality


@dataclass(frozen=True)
class SetSupertype:
    name: str
    supertype: Optional[str]  # display name, None clears


@dataclass(frozen=True)
class RenameType:
    target: Union[str, EdgeRef]  # node display name or edge ref
    new_name: str  # new display name (node) or label (edge)


BasicEdit = Union[
    AddNodeType,
    RemoveNodeType,
    AddEdgeType,
    RemoveEdgeType,
    AddProperty,
    RemoveProperty,
    SetPropertyType,
    SetPropertyRequired,
    FlipEdgeDirection,
    SetCardinality,
    SetSupertype,
    RenameType,
]


# ------------------------------------------------------------------ resolvers

def _node(s: SchemaGraph, name: str) -> NodeType:
    nt = s.node_by_name(name)
    if nt is None:
        raise UnknownElementError(f"no node type {name!r}")
    return nt


def _edge(s: SchemaGraph, sel: EdgeSel) -> EdgeType:
    if isinstance(sel, EdgeRef):
        et = s.edge_by_triple(sel.label, sel.src, sel.dst)
        if et is None:
            raise UnknownElementError(f"no edge type {sel}")
        return et
    et = s.edge_by_id(sel)
    if et is None:
        raise UnknownElementError(f"no edge type with id {sel!r}")
    return et


def _owner(s: SchemaGraph, owner: Owner) -> Union[NodeType, EdgeType]:
    if isinstance(owner, EdgeRef):
        return _edge(s, owner)
    return _node(s, owner)


def _replace_node(s: SchemaGraph, updated: NodeType) -> SchemaGraph:
    return SchemaGraph(
        tuple(updated if nt.id == updated.id else nt for nt in s.node_types), s.edge_types
    )


def _replace_edge(s: SchemaGraph, updated: EdgeType) -> SchemaGraph:
    return SchemaGraph(
        s.node_types, tuple(updated if et.id == updated.id else et for et in s.edge_types)
    )


def _replace_owner(s: SchemaGraph, owner: Union[NodeType, EdgeType], props: tuple[PropertyDef, ...]) -> SchemaGraph:
    updated = replace(owner, properties=props)
    if isinstance(owner, NodeType):
        return _replace_node(s, updated)
    return _replace_edge(s, updated)


def _owner_display(s: SchemaGraph, owner: Union[NodeType, EdgeType]) -> str:
    return owner.display_name if isinstance(owner, NodeType) else s.edge_display(owner)


# ------------------------------------------------------------------ apply

def apply_basic_edit(s: SchemaGraph, edit: BasicEdit) -> SchemaGraph:
    """Apply one basic edit; removals cascade to incident edge types."""
    if isinstance(edit, AddNodeType):
        name = display_labels(edit.labels)
        if s.node_by_name(name) is not None:
            raise DuplicateNameError(f"node type {name!r} already exists")
        return SchemaGraph(s.node_types + (NodeType(labels=edit.labels),), s.edge_types)

    if isinstance(edit, RemoveNodeType):
        nt = _node(s, edit.name)
        nodes = tuple(
            replace(other, supertype=None) if other.supertype == nt.id else other
            for other in s.node_types
            if other.id != nt.id
        )
        edges = tuple(et for et in s.edge_types if nt.id not in (et.src, et.dst))
        return SchemaGraph(nodes, edges)

    if isinstance(edit, AddEdgeType):
        src = _node(s, edit.src)
        dst = _node(s, edit.dst)
        if s.edge_by_triple(edit.label, edit.src, edit.dst) is not None:
            raise DuplicateNameError(f"edge type ({edit.src})-[{edit.label}]->({edit.dst}) already exists")
        return SchemaGraph(s.node_types, s.edge_types + (EdgeType(label=edit.label, src=src.id, dst=dst.id),))

    if isinstance(edit, RemoveEdgeType):
        et = _edge(s, EdgeRef(edit.label, edit.src, edit.dst))
        return SchemaGraph(s.node_types, tuple(e for e in s.edge_types if e.id != et.id))

    if isinstance(edit, AddProperty):
        owner = _owner(s, edit.owner)
        if owner.property_by_name(edit.prop.name) is not None:
            raise DuplicateNameError(
                f"{_owner_display(s, owner)} already has property {edit.prop.name!r}"
            )
        return _replace_owner(s, owner, owner.properties + (edit.prop,))

    if isinstance(edit, RemoveProperty):
        owner = _owner(s, edit.owner)
        if owner.property_by_name(edit.name) is None:
            raise UnknownElementError(f"{_owner_display(s, owner)} has no property {edit.name!r}")
        return _replace_owner(s, owner, tuple(p for p in owner.properties if p.name != edit.name))

    if isinstance(edit, SetPropertyType):
        owner = _owner(s, edit.owner)
        if owner.property_by_name(edit.name) is None:
            raise UnknownElementError(f"{_owner_display(s, owner)} has no property {edit.name!r}")
        props = tuple(
            replace(p, datatype=edit.datatype) if p.name == edit.name else p for p in owner.properties
        )
        return _replace_owner(s, owner, props)

    if isinstance(edit, SetPropertyRequired):
        owner = _owner(s, edit.owner)
        if owner.property_by_name(edit.name) is None:
            raise UnknownElementError(f"{_owner_display(s, owner)} has no property {edit.name!r}")
        props = tuple(
            replace(p, required=edit.required) if p.name == edit.name else p for p in owner.properties
        )
        return _replace_owner(s, owner, props)

    if isinstance(edit, FlipEdgeDirection):
        et = _edge(s, edit.edge)
        collision = s.edge_by_triple(et.label, s.node_display(et.dst), s.node_display(et.src))
        if collision is not None and collision.id != et.id:
            raise DuplicateNameError(f"flipping would collide with {s.edge_display(collision)}")
        flipped = replace(et, src=et.dst, dst=et.src, out_card=et.in_card, in_card=et.out_card)
        return _replace_edge(s, flipped)

    if isinstance(edit, SetCardinality):
        et = _edge(s, edit.edge)
        return _replace_edge(s, replace(et, out_card=edit.out_card, in_card=edit.in_card))

    if isinstance(edit, SetSupertype):
        nt = _node(s, edit.name)
        super_id = None if edit.supertype is None else _node(s, edit.supertype).id
        return _replace_node(s, replace(nt, supertype=super_id))

    if isinstance(edit, RenameType):
        return _rename(s, edit)

    raise TypeError(f"not a basic edit: {edit!r}")


def _rename(s: SchemaGraph, edit: RenameType) -> SchemaGraph:
    if isinstance(edit.target, EdgeRef):
        et = _edge(s, edit.target)
        src_name = s.node_display(et.src)
        dst_name = s.node_display(et.dst)
        new_label = display_labels(labels_from_name(edit.new_name))
        collision = s.edge_by_triple(new_label, src_name, dst_name)
        if collision is not None and collision.id != et.id:
            raise DuplicateNameError(
                f"edge type ({src_name})-[{new_label}]->({dst_name}) already exists"
            )
        return _replace_edge(s, replace(et, label=new_label))
    nt = _node(s, edit.target)
    labels = labels_from_name(edit.new_name)
    collision = s.node_by_labels(labels)
    if collision is not None and collision.id != nt.id:
        raise DuplicateNameError(f"node type {display_labels(labels)!r} already exists")
    return _replace_node(s, replace(nt, labels=labels))


def apply_edits(s: SchemaGraph, edits: list) -> SchemaGraph:
    for edit in edits:
        s = apply_basic_edit(s, edit)
    return s


# ------------------------------------------------------------- merge / split

def _union_props(sides: list[tuple[PropertyDef, ...]]) -> tuple[PropertyDef, ...]:
    """Union by key: shared keys widen and AND their required flags, one-sided
    keys become optional."""
    keys: list[str] = []
    for props in sides:
        for p in props:
            if p.name not in keys:
                keys.append(p.name)
    out = []
    for key in sorted(keys):
        present = [p for props in sides for p in props if p.name == key]
        dt = present[0].datatype
        for p in present[1:]:
            dt = least_common_supertype(dt, p.datatype)
        required = len(present) == len(sides) and all(p.required for p in present)
        out.append(PropertyDef(key, dt, required))
    return tuple(out)


def _widen_card(cards: list[Cardinality]) -> Cardinality:
    lo = min(c.min_count for c in cards)
    maxes = [c.max_count for c in cards]
    hi = None if any(m is None for m in maxes) else max(maxes)
    return Cardinality(lo, hi)


def merge_union(s: SchemaGraph, a: str, b: str, new_labels: Union[frozenset[str], str]) -> SchemaGraph:
    """Replace two node types by one that allows the properties of both."""
    if a == b:
        raise EditError("cannot merge a type with itself")
    nt_a = _node(s, a)
    nt_b = _node(s, b)
    labels = labels_from_name(new_labels) if isinstance(new_labels, str) else new_labels
    name = display_labels(labels)
    collision = s.node_by_labels(labels)
    if collision is not None and collision.id not in (nt_a.id, nt_b.id):
        raise DuplicateNameError(f"node type {name!r} already exists")

    if nt_a.supertype == nt_b.supertype and nt_a.supertype not in (nt_a.id, nt_b.id):
        supertype = nt_a.supertype
    else:
        supertype = None
    merged = NodeType(
        labels=labels,
        properties=_union_props([nt_a.properties, nt_b.properties]),
        supertype=supertype,
    )

    old_ids = {nt_a.id, nt_b.id}
    nodes = []
    for nt in s.node_types:
        if nt.id in old_ids:
            continue
        if nt.supertype in old_ids:
            nt = replace(nt, supertype=merged.id)
        nodes.append(nt)
    nodes.append(merged)

    repointed = [
        replace(
            et,
            src=merged.id if et.src in old_ids else et.src,
            dst=merged.id if et.dst in old_ids else et.dst,
        )
        for et in s.edge_types
    ]
    groups: dict[tuple[str, str, str], list[EdgeType]] = {}
    for et in repointed:
        groups.setdefault((et.label, et.src, et.dst), []).append(et)
    edges = []
    for group in groups.values():
        if len(group) == 1:
            edges.append(group[0])
        else:
            edges.append(
                EdgeType(
                    label=group[0].label,
                    src=group[0].src,
                    dst=group[0].dst,
                    properties=_union_props([et.properties for et in group]),
                    out_card=_widen_card([et.out_card for et in group]),
                    in_card=_widen_card([et.in_card for et in group]),
                )
            )
    return SchemaGraph(tuple(nodes), tuple(edges))


def merge_intersection(
    s: SchemaGraph, names: list[str], new_labels: Union[frozenset[str], str]
) -> SchemaGraph:
    """Add a maximal common supertype carrying the properties shared by all inputs."""
    if len(names) < 2 or len(set(names)) != len(names):
        raise EditError("merge-intersection needs at least two distinct types")
    types = [_node(s, name) for name in names]
    labels = labels_from_name(new_labels) if isinstance(new_labels, str) else new_labels
    name = display_labels(labels)
    if s.node_by_labels(labels) is not None:
        raise DuplicateNameError(f"node type {name!r} already exists")

    shared = set(p.name for p in types[0].properties)
    for nt in types[1:]:
        shared &= {p.name for p in nt.properties}
    props = []
    for key in sorted(shared):
        defs = [nt.property_by_name(key) for nt in types]
        dt = defs[0].datatype
        for d in defs[1:]:
            dt = least_common_supertype(dt, d.datatype)
        props.append(PropertyDef(key, dt, required=all(d.required for d in defs)))

    common = NodeType(labels=labels, properties=tuple(props))
    member_ids = {nt.id for nt in types}
    nodes = tuple(
        replace(nt, supertype=common.id) if nt.id in member_ids and nt.supertype is None else nt
        for nt in s.node_types
    )
    return SchemaGraph(nodes + (common,), s.edge_types)


def split_node_type(
    s: SchemaGraph,
    name: str,
    discriminator: str,
    with_name: Union[frozenset[str], str],
    without_name: Union[frozenset[str], str],
) -> SchemaGraph:
    """Split a type on an optional property: one half requires it, the other drops it."""
    nt = _node(s, name)
    prop = nt.property_by_name(discriminator)
    if prop is None:
        raise UnknownElementError(f"{name} has no property {discriminator!r}")
    if prop.required:
        raise EditError(f"discriminator {discriminator!r} is required; nothing to split on")

    with_labels = labels_from_name(with_name) if isinstance(with_name, str) else with_name
    without_labels = labels_from_name(without_name) if isinstance(without_name, str) else without_name
    if with_labels == without_labels:
        raise DuplicateNameError("the two halves need distinct names")
    for labels in (with_labels, without_labels):
        collision = s.node_by_labels(labels)
        if collision is not None and collision.id != nt.id:
            raise DuplicateNameError(f"node type {display_labels(labels)!r} already exists")

    with_type = NodeType(
        labels=with_labels,
        properties=tuple(
            replace(p, required=True) if p.name == discriminator else p for p in nt.properties
        ),
        supertype=nt.supertype,
    )
    without_type = NodeType(
        labels=without_labels,
        properties=tuple(p for p in nt.properties if p.name != discriminator),
        supertype=nt.supertype,
    )

    nodes = []
    for other in s.node_types:
        if other.id == nt.id:
            continue
        if other.supertype == nt.id:
            other = replace(other, supertype=None)
        nodes.append(other)
    nodes.extend([with_type, without_type])

    edges: list[EdgeType] = []
    for et in s.edge_types:
        if nt.id not in (et.src, et.dst):
            edges.append(et)
            continue
        src_ids = [with_type.id, without_type.id] if et.src == nt.id else [et.src]
        dst_ids = [with_type.id, without_type.id] if et.dst == nt.id else [et.dst]
        for src in src_ids:
            for dst in dst_ids:
                edges.append(replace(et, src=src, dst=dst, id=new_id()))
    return SchemaGraph(tuple(nodes), tuple(edges))


def duplicate_type(s: SchemaGraph, target: Union[str, EdgeRef], new_name: str) -> SchemaGraph:
    """Copy a type under a new name; node copies take no incident edges."""
    if isinstance(target, EdgeRef):
        et = _edge(s, target)
        label = display_labels(labels_from_name(new_name))
        if s.edge_by_triple(label, target.src, target.dst) is not None:
            raise DuplicateNameError(
                f"edge type ({target.src})-[{label}]->({target.dst}) already exists"
            )
        return SchemaGraph(s.node_types, s.edge_types + (replace(et, label=label, id=new_id()),))
    nt = _node(s, target)
    labels = labels_from_name(new_name)
    if s.node_by_labels(labels) is not None:
        raise DuplicateNameError(f"node type {display_labels(labels)!r} already exists")
    return SchemaGraph(s.node_types + (replace(nt, labels=labels, id=new_id()),), s.edge_types)


def escalate_property(
    s: SchemaGraph,
    name: str,
    key: str,
    node_labels: Union[frozenset[str], str],
    edge_label: str,
) -> SchemaGraph:
    """Promote a property to its own node type linked by a new edge type."""
    nt = _node(s, name)
    prop = nt.property_by_name(key)
    if prop is None:
        raise UnknownElementError(f"{name} has no property {key!r}")
    labels = labels_from_name(node_labels) if isinstance(node_labels, str) else node_labels
    if s.node_by_labels(labels) is not None:
        raise DuplicateNameError(f"node type {display_labels(labels)!r} already exists")

    value_node = NodeType(labels=labels, properties=(PropertyDef("value", prop.datatype, True),))
    stripped = replace(nt, properties=tuple(p for p in nt.properties if p.name != key))
    out_card = Cardinality(1, 1) if prop.required else Cardinality(0, 1)
    link = EdgeType(
        label=display_labels(labels_from_name(edge_label)),
        src=nt.id,
        dst=value_node.id,
        out_card=out_card,
        in_card=DEFAULT_CARDINALITY,
    )
    nodes = tuple(stripped if n.id == nt.id else n for n in s.node_types) + (value_node,)
    return SchemaGraph(nodes, s.edge_types + (link,))


# -------------------------------------------------------------- JSON commands

class EditCommandError(ValueError):
    """A JSON edit command is malformed."""


def _cmd_str(command: dict, key: str) -> str:
    value = command.get(key)
    if not isinstance(value, str) or not value:
        raise EditCommandError(f"'{key}' must be a non-empty string")
    return value


def _cmd_labels(command: dict, *, name_key: str = "name", labels_key: str = "labels") -> frozenset[str]:
    if labels_key in command:
        raw = command[labels_key]
        if not isinstance(raw, list) or not all(isinstance(x, str) for x in raw):
            raise EditCommandError(f"'{labels_key}' must be an array of strings")
        return frozenset(raw)
    return labels_from_name(_cmd_str(command, name_key))


def _cmd_owner(command: dict, key: str = "owner") -> Owner:
    raw = command.get(key)
    if isinstance(raw, str) and raw:
        return raw
    if isinstance(raw, dict):
        return EdgeRef(_cmd_str(raw, "label"), _cmd_str(raw, "src"), _cmd_str(raw, "dst"))
    raise EditCommandError(f"'{key}' must be a type name or an edge object")


def _cmd_edge(command: dict, key: str = "edge") -> EdgeSel:
    raw = command.get(key)
    if isinstance(raw, str) and raw:
        return raw  # session-internal id
    if isinstance(raw, dict):
        return EdgeRef(_cmd_str(raw, "label"), _cmd_str(raw, "src"), _cmd_str(raw, "dst"))
    raise EditCommandError(f"'{key}' must be an edge id or an edge object")


def _cmd_datatype(command: dict, key: str = "type") -> DataType:
    raw = _cmd_str(command, key)
    try:
        return DataType[raw.upper()]
    except KeyError:
        raise EditCommandError(f"unknown datatype {raw!r}") from None


def _cmd_card(raw: Any, existing: Cardinality) -> Cardinality:
    if raw is None:
        return existing
    if (
        not isinstance(raw, list)
        or len(raw) != 2
        or not isinstance(raw[0], int)
        or not (raw[1] is None or isinstance(raw[1], int))
    ):
        raise EditCommandError("cardinality must be [min, max] with max null for unbounded")
    return Cardinality(raw[0], raw[1])


def apply_edit_command(s: SchemaGraph, command: dict) -> SchemaGraph:
    """Apply one JSON edit command (the wire format used by the CLI and HTTP API)."""
    if not isinstance(command, dict):
        raise EditCommandError("edit command must be a JSON object")
    op = command.get("op")
    if op == "add-node":
        return apply_basic_edit(s, AddNodeType(_cmd_labels(command)))
    if op == "remove-node":
        return apply_basic_edit(s, RemoveNodeType(_cmd_str(command, "type")))
    if op == "add-edge":
        return apply_basic_edit(
            s, AddEdgeType(_cmd_str(command, "label"), _cmd_str(command, "src"), _cmd_str(command, "dst"))
        )
    if op == "remove-edge":
        return apply_basic_edit(
            s, RemoveEdgeType(_cmd_str(command, "label"), _cmd_str(command, "src"), _cmd_str(command, "dst"))
        )
    if op == "add-property":
        prop = PropertyDef(
            _cmd_str(command, "name"), _cmd_datatype(command), bool(command.get("required", False))
        )
        return apply_basic_edit(s, AddProperty(_cmd_owner(command), prop))
    if op == "remove-property":
        return apply_basic_edit(s, RemoveProperty(_cmd_owner(command), _cmd_str(command, "name")))
    if op == "set-property-type":
        return apply_basic_edit(
            s, SetPropertyType(_cmd_owner(command), _cmd_str(command, "name"), _cmd_datatype(command))
        )
    if op == "set-property-required":
        required = command.get("required")
        if not isinstance(required, bool):
            raise EditCommandError("'required' must be a boolean")
        return apply_basic_edit(
            s, SetPropertyRequired(_cmd_owner(command), _cmd_str(command, "name"), required)
        )
    if op == "flip-edge":
        return apply_basic_edit(s, FlipEdgeDirection(_cmd_edge(command)))
    if op == "set-cardinality":
        sel = _cmd_edge(command)
        existing = _edge(s, sel)
        return apply_basic_edit(
            s,
            SetCardinality(
                sel,
                _cmd_card(command.get("out"), existing.out_card),
                _cmd_card(command.get("in"), existing.in_card),
            ),
        )
    if op == "set-supertype":
        supertype = command.get("supertype")
        if supertype is not None and not isinstance(supertype, str):
            raise EditCommandError("'supertype' must be a string or null")
        return apply_basic_edit(s, SetSupertype(_cmd_str(command, "type"), supertype))
    if op == "rename":
        if "edge" in command:
            return apply_basic_edit(
                s, RenameType(_cmd_edge_ref(command), _cmd_str(command, "label"))
            )
        return apply_basic_edit(
            s,
            RenameType(
                _cmd_str(command, "type"), display_labels(_cmd_labels(command))
            ),
        )
    if op == "split":
        return split_node_type(
            s,
            _cmd_str(command, "type"),
            _cmd_str(command, "discriminator"),
            _cmd_str(command, "with"),
            _cmd_str(command, "without"),
        )
    if op == "merge-union":
        return merge_union(
            s, _cmd_str(command, "a"), _cmd_str(command, "b"), _cmd_labels(command)
        )
    if op == "merge-intersection":
        raw = command.get("types")
        if not isinstance(raw, list) or not all(isinstance(x, str) for x in raw):
            raise EditCommandError("'types' must be an array of type names")
        return merge_intersection(s, raw, _cmd_labels(command))
    if op == "duplicate":
        if "edge" in command:
            return duplicate_type(s, _cmd_edge_ref(command), _cmd_str(command, "label"))
        return duplicate_type(s, _cmd_str(command, "type"), display_labels(_cmd_labels(command)))
    if op == "escalate":
        return escalate_property(
            s,
            _cmd_str(command, "type"),
            _cmd_str(command, "property"),
            _cmd_labels(command),
            _cmd_str(command, "edge"),
        )
    raise EditCommandError(f"unknown op {op!r}")


def _cmd_edge_ref(command: dict) -> EdgeRef:
    sel = _cmd_edge(command)
    if not isinstance(sel, EdgeRef):
        raise EditCommandError("this op needs an edge object with label/src/dst")
    return sel
