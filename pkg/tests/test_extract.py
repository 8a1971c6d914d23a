from __future__ import annotations

import random
from dataclasses import replace

import pytest

import generators
from pgschema import (
    Cardinality,
    DataType,
    ExtractionError,
    ExtractionOptions,
    SchemaGraph,
    display_labels,
    extract_schema,
    infer_property_type,
    infer_subtypes,
    load_graph,
    schema_equal,
    validate_conformance,
)


class TestInferPropertyType:
    def test_single_integer(self):
        assert infer_property_type([42]) is DataType.INTEGER

    def test_integer_and_float_widen(self):
        assert infer_property_type([42, 3.5]) is DataType.FLOAT

    def test_unrelated_kinds_widen_to_any(self):
        assert infer_property_type(["a", True]) is DataType.ANY

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            infer_property_type([])


class TestExtract:
    def test_empty_graph_yields_empty_schema(self):
        assert extract_schema(load_graph("")).is_empty

    def test_parking_spot_becomes_optional(self, parking_lot_graph):
        schema = extract_schema(parking_lot_graph)
        person = schema.node_by_name("Person")
        spot = person.property_by_name("parkingSpot")
        assert spot.datatype is DataType.STRING and not spot.required
        assert person.property_by_name("name").required
        # the soundness oracle confirms the result
        assert validate_conformance(parking_lot_graph, schema).ok

    def test_mixed_numeric_ages_widen_to_float(self):
        lines = [
            '{"kind":"node","id":"a","labels":["Person"],"properties":{"age":41}}',
            '{"kind":"node","id":"b","labels":["Person"],"properties":{"age":41.5}}',
        ]
        g = load_graph("\n".join(lines))
        schema = extract_schema(g)
        assert schema.node_by_name("Person").property_by_name("age").datatype is DataType.FLOAT
        assert validate_conformance(g, schema).ok

    def test_propertyless_type_still_extracted(self):
        g = load_graph('{"kind":"node","id":"a","labels":["Team"],"properties":{}}')
        schema = extract_schema(g)
        assert schema.node_by_name("Team").properties == ()

    def test_unrepresentable_label_rejected(self):
        g = load_graph('{"kind":"node","id":"a","labels":["has space"],"properties":{}}')
        with pytest.raises(ExtractionError):
            extract_schema(g)

    def test_shuffling_input_lines_does_not_change_result(self):
        rng = random.Random(3)
        lines = generators.random_graph_lines(rng, max_nodes=20, max_edges=15)
        baseline = extract_schema(load_graph("\n".join(lines)))
        for _ in range(5):
            shuffled = list(lines)
            rng.shuffle(shuffled)
            assert schema_equal(extract_schema(load_graph("\n".join(shuffled))), baseline)

    def test_required_iff_universally_present(self):
        lines = generators.random_graph_lines(random.Random(5), max_nodes=30, max_edges=0)
        g = load_graph("\n".join(lines))
        schema = extract_schema(g)
        # brute-force oracle: presence counts per (label set, key)
        for nt in schema.node_types:
            members = [n for n in g.nodes.values() if n.labels == nt.labels]
            for p in nt.properties:
                present_everywhere = all(p.name in n.properties for n in members)
                assert p.required == present_everywhere

    def test_cardinality_defaults_when_inference_off(self):
        lines = [
            '{"kind":"node","id":"a","labels":["Person"],"properties":{}}',
            '{"kind":"node","id":"b","labels":["Person"],"properties":{}}',
            '{"kind":"edge","id":"e","src":"a","dst":"b","labels":["KNOWS"],"properties":{}}',
        ]
        g = load_graph("\n".join(lines))
        schema = extract_schema(g, ExtractionOptions(infer_cardinality=False))
        et = schema.edge_types[0]
        assert et.out_card == Cardinality(0, None)
        assert et.in_card == Cardinality(0, None)

    def test_inferred_cardinalities_are_tight(self):
        lines = generators.random_graph_lines(random.Random(9), max_nodes=15, max_edges=25)
        g = load_graph("\n".join(lines))
        schema = extract_schema(g)
        assert validate_conformance(g, schema).ok
        for et in schema.edge_types:
            for attr in ("out_card", "in_card"):
                card: Cardinality = getattr(et, attr)
                assert card.max_count is not None  # inference never produces unbounded
                tighter = []
                if card.min_count + 1 <= card.max_count:
                    tighter.append(Cardinality(card.min_count + 1, card.max_count))
                if card.max_count - 1 >= max(card.min_count, 1):
                    tighter.append(Cardinality(card.min_count, card.max_count - 1))
                for tightened in tighter:
                    edited = SchemaGraph(
                        schema.node_types,
                        tuple(
                            replace(e, **{attr: tightened}) if e.id == et.id else e
                            for e in schema.edge_types
                        ),
                    )
                    assert not validate_conformance(g, edited).ok


class TestInferSubtypes:
    def _brute_force_links(self, schema):
        links = {}
        for nt in schema.node_types:
            required = {p.name for p in nt.properties if p.required}
            candidates = [
                other
                for other in schema.node_types
                if other.labels < nt.labels
                and {p.name for p in other.properties if p.required} <= required
            ]
            if candidates:
                best = max(candidates, key=lambda c: (len(c.labels), display_labels(c.labels)))
                links[nt.display_name] = best.display_name
        return links

    def test_subset_label_sets_get_linked(self):
        lines = [
            '{"kind":"node","id":"a","labels":["Person"],"properties":{"name":"x"}}',
            '{"kind":"node","id":"b","labels":["Person","Employee"],"properties":{"name":"y","badge":"z"}}',
        ]
        g = load_graph("\n".join(lines))
        schema = infer_subtypes(extract_schema(g))
        sub = schema.node_by_name("Employee&Person")
        assert schema.node_display(sub.supertype) == "Person"

    def test_links_match_brute_force_over_all_pairs(self):
        lines = generators.random_graph_lines(random.Random(21), max_nodes=40, max_edges=0)
        schema = extract_schema(load_graph("\n".join(lines)))
        linked = infer_subtypes(schema)
        expected = self._brute_force_links(schema)
        actual = {
            nt.display_name: linked.node_display(nt.supertype)
            for nt in linked.node_types
            if nt.supertype is not None
        }
        assert actual == expected

    def test_single_type_unchanged(self):
        g = load_graph('{"kind":"node","id":"a","labels":["Person"],"properties":{}}')
        schema = extract_schema(g)
        assert schema_equal(infer_subtypes(schema), schema)

    def test_disjoint_label_sets_unchanged(self):
        lines = [
            '{"kind":"node","id":"a","labels":["Person"],"properties":{}}',
            '{"kind":"node","id":"b","labels":["Company"],"properties":{}}',
        ]
        schema = extract_schema(load_graph("\n".join(lines)))
        assert schema_equal(infer_subtypes(schema), schema)
