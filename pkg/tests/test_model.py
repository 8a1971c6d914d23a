from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pgschema import (
    Cardinality,
    DataType,
    EdgeType,
    NodeType,
    PropertyDef,
    SchemaGraph,
    SchemaIntegrityError,
    canonicalize,
    display_labels,
    is_subtype,
    least_common_supertype,
    schema_equal,
    schema_to_json,
)

datatypes = st.sampled_from(list(DataType))


class TestLattice:
    def test_idempotent(self):
        assert least_common_supertype(DataType.INTEGER, DataType.INTEGER) is DataType.INTEGER

    def test_integer_float(self):
        assert least_common_supertype(DataType.INTEGER, DataType.FLOAT) is DataType.FLOAT

    def test_unrelated_kinds_meet_at_any(self):
        assert least_common_supertype(DataType.STRING, DataType.BOOLEAN) is DataType.ANY

    @given(datatypes, datatypes)
    def test_commutative(self, a, b):
        assert least_common_supertype(a, b) is least_common_supertype(b, a)

    @given(datatypes, datatypes, datatypes)
    def test_associative(self, a, b, c):
        lcs = least_common_supertype
        assert lcs(lcs(a, b), c) is lcs(a, lcs(b, c))

    @given(datatypes, datatypes)
    def test_upper_bound(self, a, b):
        up = least_common_supertype(a, b)
        assert is_subtype(a, up) and is_subtype(b, up)

    @given(datatypes)
    def test_any_is_top(self, a):
        assert is_subtype(a, DataType.ANY)
        assert least_common_supertype(a, DataType.ANY) is DataType.ANY


def _person_schema(order: str = "ab") -> SchemaGraph:
    a = NodeType(labels=frozenset({"A"}), properties=(PropertyDef("x", DataType.STRING),))
    b = NodeType(labels=frozenset({"B"}))
    nodes = (a, b) if order == "ab" else (b, a)
    return SchemaGraph(nodes)


class TestCanonicalize:
    def test_empty(self):
        assert canonicalize(SchemaGraph()) == SchemaGraph()

    def test_sorts_types_by_display_name(self):
        s = _person_schema(order="ba")
        assert [nt.display_name for nt in canonicalize(s).node_types] == ["A", "B"]

    def test_idempotent(self):
        s = _person_schema(order="ba")
        once = canonicalize(s)
        assert canonicalize(once) == once


class TestSchemaEqual:
    def test_reflexive(self):
        s = _person_schema()
        assert schema_equal(s, s)

    def test_insertion_order_irrelevant(self):
        assert schema_equal(_person_schema("ab"), _person_schema("ba"))

    def test_required_flag_matters(self):
        a = SchemaGraph((NodeType(frozenset({"A"}), (PropertyDef("x", DataType.STRING, True),)),))
        b = SchemaGraph((NodeType(frozenset({"A"}), (PropertyDef("x", DataType.STRING, False),)),))
        assert not schema_equal(a, b)

    def test_ids_ignored(self):
        a = SchemaGraph((NodeType(frozenset({"A"}), id="one"),))
        b = SchemaGraph((NodeType(frozenset({"A"}), id="two"),))
        assert schema_equal(a, b)


class TestIntegrity:
    def test_duplicate_display_name_rejected(self):
        with pytest.raises(SchemaIntegrityError):
            SchemaGraph((NodeType(frozenset({"A"})), NodeType(frozenset({"A"}))))

    def test_dangling_edge_endpoint_rejected(self):
        with pytest.raises(SchemaIntegrityError):
            SchemaGraph((), (EdgeType(label="L", src="nope", dst="nope"),))

    def test_supertype_cycle_rejected(self):
        a = NodeType(frozenset({"A"}), id="a", supertype="b")
        b = NodeType(frozenset({"B"}), id="b", supertype="a")
        with pytest.raises(SchemaIntegrityError):
            SchemaGraph((a, b))

    def test_duplicate_property_rejected(self):
        props = (PropertyDef("x", DataType.STRING), PropertyDef("x", DataType.INTEGER))
        with pytest.raises(SchemaIntegrityError):
            SchemaGraph((NodeType(frozenset({"A"}), props),))

    def test_bad_cardinality_rejected(self):
        a = NodeType(frozenset({"A"}), id="a")
        with pytest.raises(SchemaIntegrityError):
            SchemaGraph((a,), (EdgeType(label="L", src="a", dst="a", out_card=Cardinality(3, 1)),))

    def test_reserved_label_rejected(self):
        with pytest.raises(SchemaIntegrityError):
            SchemaGraph((NodeType(frozenset({"_Unlabeled"})),))

    def test_empty_label_set_displays_as_unlabeled(self):
        assert display_labels(frozenset()) == "_Unlabeled"
        assert display_labels(frozenset({"B", "A"})) == "A&B"


def test_json_export_shape():
    a = NodeType(frozenset({"A"}), (PropertyDef("x", DataType.DATE, False),), id="a")
    e = EdgeType(label="L", src="a", dst="a", out_card=Cardinality(1, 1), in_card=Cardinality(0, None))
    payload = schema_to_json(SchemaGraph((a,), (e,)))
    assert payload == {
        "nodeTypes": [
            {
                "labels": ["A"],
                "supertype": None,
                "properties": [{"name": "x", "type": "DATE", "required": False}],
            }
        ],
        "edgeTypes": [
            {
                "label": "L",
                "src": "A",
                "dst": "A",
                "outCard": [1, 1],
                "inCard": [0, None],
                "properties": [],
            }
        ],
    }
