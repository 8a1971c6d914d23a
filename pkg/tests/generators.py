"""Seeded random generators for instance graphs, schemas, and edit sequences.

Everything takes an explicit random.Random so tests stay reproducible; the
hypothesis strategies wrap the same builders via a drawn seed.
"""

from __future__ import annotations

import json
import random

from hypothesis import strategies as st

from pgschema import (
    Cardinality,
    DataType,
    EdgeType,
    NodeType,
    PropertyDef,
    SchemaGraph,
)

NODE_LABELS = ["Person", "Employee", "Guest", "Company", "City", "Order", "Product", "Team"]
EDGE_LABELS = ["KNOWS", "WORKS_AT", "LIVES_IN", "OWNS", "PART_OF", "KNOWS&LIKES"]
PROPERTY_KEYS = ["name", "age", "active", "since", "score", "email", "city", "code"]
STRING_WORDS = ["alpha", "beta", "gamma", "delta", "kappa", "omega"]

VALUE_KINDS = ["STRING", "INTEGER", "FLOAT", "BOOLEAN", "DATE"]
# some keys deliberately mix kinds across instances to exercise widening
MIXED_KINDS = [["INTEGER", "FLOAT"], ["STRING", "BOOLEAN"], ["DATE", "STRING"]]


def random_value(rng: random.Random, kind: str):
    if kind == "STRING":
        return rng.choice(STRING_WORDS)
    if kind == "INTEGER":
        return rng.randint(-1000, 1000)
    if kind == "FLOAT":
        return rng.randint(-1000, 1000) + 0.5
    if kind == "BOOLEAN":
        return rng.random() < 0.5
    if kind == "DATE":
        return f"{rng.randint(2000, 2024):04d}-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}"
    raise ValueError(kind)


def _random_label_sets(rng: random.Random, max_sets: int) -> list[frozenset[str]]:
    count = rng.randint(1, max_sets)
    sets: set[frozenset[str]] = set()
    attempts = 0
    while len(sets) < count and attempts < 50:
        attempts += 1
        size = rng.choice([0, 1, 1, 1, 2])
        sets.add(frozenset(rng.sample(NODE_LABELS, size)))
    return sorted(sets, key=lambda s: "&".join(sorted(s)))


def _random_profile(rng: random.Random, keys: list[str]) -> dict[str, tuple[float, list[str]]]:
    """Per key: (probability of presence, pool of value kinds)."""
    chosen = rng.sample(keys, rng.randint(0, min(4, len(keys))))
    profile = {}
    for key in chosen:
        presence = rng.choice([1.0, 1.0, 0.6, 0.3])
        kinds = rng.choice([[rng.choice(VALUE_KINDS)]] * 3 + MIXED_KINDS)
        profile[key] = (presence, kinds)
    return profile


def random_graph_lines(
    rng: random.Random,
    *,
    max_nodes: int = 50,
    max_label_sets: int = 5,
    max_keys: int = 8,
    max_edges: int = 60,
) -> list[str]:
    """One JSON object per line; nodes first, then edges."""
    keys = PROPERTY_KEYS[:max_keys]
    label_sets = _random_label_sets(rng, max_label_sets)
    profiles = {labels: _random_profile(rng, keys) for labels in label_sets}

    lines: list[str] = []
    node_ids: list[str] = []
    n_nodes = rng.randint(1, max_nodes)
    for i in range(n_nodes):
        labels = rng.choice(label_sets)
        props = {}
        for key, (presence, kinds) in profiles[labels].items():
            if rng.random() < presence:
                props[key] = random_value(rng, rng.choice(kinds))
        node_id = f"n{i}"
        node_ids.append(node_id)
        lines.append(
            json.dumps(
                {"kind": "node", "id": node_id, "labels": sorted(labels), "properties": props}
            )
        )

    edge_labels = rng.sample(EDGE_LABELS[:5], rng.randint(1, 3))
    edge_profiles = {label: _random_profile(rng, keys[:4]) for label in edge_labels}
    for j in range(rng.randint(0, max_edges)):
        label = rng.choice(edge_labels)
        props = {}
        for key, (presence, kinds) in edge_profiles[label].items():
            if rng.random() < presence:
                props[key] = random_value(rng, rng.choice(kinds))
        lines.append(
            json.dumps(
                {
                    "kind": "edge",
                    "id": f"e{j}",
                    "src": rng.choice(node_ids),
                    "dst": rng.choice(node_ids),
                    "labels": [label],
                    "properties": props,
                }
            )
        )
    return lines


# ------------------------------------------------------------------ schemas

_DATATYPES = list(DataType)


def _random_props(rng: random.Random, max_props: int = 5) -> tuple[PropertyDef, ...]:
    names = rng.sample(PROPERTY_KEYS, rng.randint(0, max_props))
    return tuple(
        PropertyDef(name, rng.choice(_DATATYPES), rng.random() < 0.6) for name in sorted(names)
    )


def random_schema(rng: random.Random, *, max_types: int = 6, max_edges: int = 6) -> SchemaGraph:
    """A structurally valid random schema with supertypes, cards, and edge props."""
    label_sets = _random_label_sets(rng, max_types) if rng.random() > 0.05 else []
    nodes: list[NodeType] = []
    for labels in label_sets:
        supertype = None
        if nodes and rng.random() < 0.3:
            supertype = rng.choice(nodes).id  # earlier types only: stays acyclic
        nodes.append(NodeType(labels=labels, properties=_random_props(rng), supertype=supertype))

    edges: list[EdgeType] = []
    triples: set[tuple[str, str, str]] = set()
    if nodes:
        for _ in range(rng.randint(0, max_edges)):
            label = rng.choice(EDGE_LABELS + ["_Unlabeled"])
            src = rng.choice(nodes)
            dst = rng.choice(nodes)
            if (label, src.id, dst.id) in triples:
                continue
            triples.add((label, src.id, dst.id))
            edges.append(
                EdgeType(
                    label=label,
                    src=src.id,
                    dst=dst.id,
                    properties=_random_props(rng, max_props=3),
                    out_card=_random_card(rng),
                    in_card=_random_card(rng),
                )
            )
    return SchemaGraph(tuple(nodes), tuple(edges))


def _random_card(rng: random.Random) -> Cardinality:
    if rng.random() < 0.5:
        return Cardinality(0, None)
    lo = rng.randint(0, 2)
    if rng.random() < 0.3:
        return Cardinality(lo, None)
    return Cardinality(lo, rng.randint(max(lo, 1), 6))


def mutate_via_edits(rng: random.Random, s: SchemaGraph, steps: int = 4) -> SchemaGraph:
    """A related schema produced by a few random additive and breaking edits."""
    from pgschema import apply_edit_command

    current = s
    for _ in range(steps):
        try:
            if rng.random() < 0.5:
                command = breaking_command(rng, current)
            else:
                batch = additive_commands(rng, current, 1)
                command = batch[0] if batch else None
            if command is None:
                continue
            current = apply_edit_command(current, command)
        except ValueError:
            continue
    return current


# -------------------------------------------------------------- edit batches

def additive_commands(rng: random.Random, base: SchemaGraph, count: int) -> list[dict]:
    """Edit commands that only ever add optional things."""
    commands: list[dict] = []
    existing = [nt.display_name for nt in base.node_types]
    fresh = [f"Extra{i}" for i in range(64)]
    added: list[str] = []
    prop_pool = [f"extra_{i}" for i in range(20)]
    used_props = 0
    added_edges: set[tuple[str, str, str]] = set()
    for _ in range(count):
        choice = rng.random()
        names = existing + added
        if choice < 0.4 or not names:
            name = fresh[len(added)]
            added.append(name)
            commands.append({"op": "add-node", "labels": [name]})
        elif choice < 0.7 and len(names) >= 1:
            src, dst = rng.choice(names), rng.choice(names)
            label = f"REL_{used_props}_{rng.randint(0, 999)}"
            triple = (label, src, dst)
            existing_triples = {
                (et.label, base.node_display(et.src), base.node_display(et.dst))
                for et in base.edge_types
            }
            if triple in added_edges or triple in existing_triples:
                continue
            added_edges.add(triple)
            commands.append({"op": "add-edge", "label": label, "src": src, "dst": dst})
        else:
            owner = rng.choice(names)
            commands.append(
                {
                    "op": "add-property",
                    "owner": owner,
                    "name": prop_pool[used_props % len(prop_pool)] + str(used_props // len(prop_pool)),
                    "type": rng.choice(["STRING", "INTEGER", "FLOAT", "BOOLEAN", "DATE"]),
                    "required": False,
                }
            )
            used_props += 1
    return commands


def breaking_command(rng: random.Random, base: SchemaGraph) -> dict | None:
    """One command guaranteed to remove, narrow, or tighten something in ``base``.

    Returns None when the schema has nothing to break.
    """
    node_names = [nt.display_name for nt in base.node_types]
    options = []
    if node_names:
        options.append(lambda: {"op": "remove-node", "type": rng.choice(node_names)})
    props = [
        (nt.display_name, p)
        for nt in base.node_types
        for p in nt.properties
    ]
    if props:
        owner, p = rng.choice(props)
        options.append(lambda: {"op": "remove-property", "owner": owner, "name": p.name})
        if not p.required:
            options.append(
                lambda: {"op": "set-property-required", "owner": owner, "name": p.name, "required": True}
            )
        if p.datatype in (DataType.FLOAT, DataType.ANY):
            options.append(
                lambda: {"op": "set-property-type", "owner": owner, "name": p.name, "type": "INTEGER"}
            )
    if node_names:
        options.append(
            lambda: {
                "op": "add-property",
                "owner": rng.choice(node_names),
                "name": "forced_required",
                "type": "STRING",
                "required": True,
            }
        )
    for et in base.edge_types:
        ref = {
            "label": et.label,
            "src": base.node_display(et.src),
            "dst": base.node_display(et.dst),
        }
        # raising the out minimum by one always tightens and always differs
        lo = et.out_card.min_count + 1
        options.append(
            lambda ref=ref, lo=lo: {"op": "set-cardinality", "edge": ref, "out": [lo, lo], "in": None}
        )
        break
    if not options:
        return None
    return rng.choice(options)()


# ---------------------------------------------------------------- hypothesis

def seeded(builder, **kwargs):
    """Strategy over the seeded builders; shrinks on the seed."""
    return st.integers(min_value=0, max_value=2**32 - 1).map(
        lambda seed: builder(random.Random(seed), **kwargs)
    )


schema_graphs = seeded(random_schema)
graph_line_lists = seeded(random_graph_lines, max_nodes=20, max_edges=15)
