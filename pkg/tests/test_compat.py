from __future__ import annotations

import random

import generators
from pgschema import (
    SchemaDiff,
    apply_edit_command,
    check_compat,
    compute_diff,
    parse_schema,
)

BASE = """
NODE Person { name: STRING, nickname: STRING?, score: FLOAT }
NODE Company { city: STRING? }
EDGE (Person) -[WORKS_AT <0..2>]-> <0..1> (Company)
"""


def _diff_for(command: dict):
    old = parse_schema(BASE)
    new = apply_edit_command(old, command)
    return compute_diff(old, new)


class TestRules:
    def test_empty_diff_compatible(self):
        assert check_compat(SchemaDiff()).compatible

    def test_identity_diff_compatible(self):
        s = parse_schema(BASE)
        assert check_compat(compute_diff(s, s)).compatible

    def test_pure_addition_compatible(self):
        report = check_compat(_diff_for({"op": "add-node", "labels": ["Employee"]}))
        assert report.compatible

    def test_removed_property_is_one_violation(self):
        report = check_compat(_diff_for({"op": "remove-property", "owner": "Person", "name": "name"}))
        assert not report.compatible
        assert len(report.violations) == 1

    def test_removed_node_type_violates(self):
        assert not check_compat(_diff_for({"op": "remove-node", "type": "Company"})).compatible

    def test_widening_datatype_compatible(self):
        report = check_compat(
            _diff_for({"op": "set-property-type", "owner": "Person", "name": "name", "type": "ANY"})
        )
        assert report.compatible

    def test_narrowing_datatype_violates(self):
        report = check_compat(
            _diff_for({"op": "set-property-type", "owner": "Person", "name": "score", "type": "INTEGER"})
        )
        assert not report.compatible

    def test_required_to_optional_compatible(self):
        report = check_compat(
            _diff_for({"op": "set-property-required", "owner": "Person", "name": "name", "required": False})
        )
        assert report.compatible

    def test_optional_to_required_violates(self):
        report = check_compat(
            _diff_for({"op": "set-property-required", "owner": "Person", "name": "nickname", "required": True})
        )
        assert not report.compatible

    def test_adding_required_property_violates(self):
        report = check_compat(
            _diff_for({"op": "add-property", "owner": "Person", "name": "ssn", "type": "STRING", "required": True})
        )
        assert not report.compatible

    def test_adding_optional_property_compatible(self):
        report = check_compat(
            _diff_for({"op": "add-property", "owner": "Person", "name": "ssn", "type": "STRING", "required": False})
        )
        assert report.compatible

    def test_cardinality_loosening_compatible(self):
        edge = {"label": "WORKS_AT", "src": "Person", "dst": "Company"}
        report = check_compat(
            _diff_for({"op": "set-cardinality", "edge": edge, "out": [0, None], "in": [0, None]})
        )
        assert report.compatible

    def test_cardinality_tightening_violates(self):
        edge = {"label": "WORKS_AT", "src": "Person", "dst": "Company"}
        report = check_compat(
            _diff_for({"op": "set-cardinality", "edge": edge, "out": [1, 2], "in": None})
        )
        assert not report.compatible

    def test_endpoint_change_violates(self):
        report = check_compat(
            _diff_for({"op": "flip-edge", "edge": {"label": "WORKS_AT", "src": "Person", "dst": "Company"}})
        )
        assert not report.compatible

    def test_supertype_change_passes(self):
        # the supertype relation carries no conformance semantics
        report = check_compat(
            _diff_for({"op": "set-supertype", "type": "Person", "supertype": "Company"})
        )
        assert report.compatible


class TestSequences:
    def test_additive_sequences_always_pass(self):
        base = parse_schema(BASE)
        rng = random.Random(31)
        for _ in range(25):
            current = base
            for command in generators.additive_commands(rng, base, rng.randint(1, 8)):
                current = apply_edit_command(current, command)
            assert check_compat(compute_diff(base, current)).compatible

    def test_sequences_with_a_breaking_edit_always_fail(self):
        base = parse_schema(BASE)
        rng = random.Random(32)
        for _ in range(25):
            current = base
            for command in generators.additive_commands(rng, base, rng.randint(0, 5)):
                current = apply_edit_command(current, command)
            current = apply_edit_command(current, generators.breaking_command(rng, base))
            report = check_compat(compute_diff(base, current))
            assert not report.compatible and len(report.violations) >= 1

    def test_monotonicity_of_additive_subsequences(self):
        base = parse_schema(BASE)
        rng = random.Random(33)
        current = base
        for command in generators.additive_commands(rng, base, 6):
            current = apply_edit_command(current, command)
        d = compute_diff(base, current)
        assert check_compat(d).compatible
        additive = [r for r in d.records if r.kind.value.startswith("Added")]
        for k in range(len(additive) + 1):
            assert check_compat(SchemaDiff(tuple(additive[:k]))).compatible
