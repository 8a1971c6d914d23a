from __future__ import annotations

import json

from pgschema import parse_schema, schema_equal, serialize_schema
from pgschema.cli import run_cli


def _write_graph(tmp_path, lines):
    path = tmp_path / "graph.jsonl"
    path.write_text("\n".join(lines) + "\n")
    return path


class TestExtractValidate:
    def test_extract_then_validate_is_sound_end_to_end(self, tmp_path, parking_lot_lines, capsys):
        graph = _write_graph(tmp_path, parking_lot_lines)
        schema = tmp_path / "schema.pgs"
        assert run_cli(["extract", "--graph", str(graph), "--out", str(schema)]) == 0
        assert "parkingSpot: STRING?" in schema.read_text()
        assert run_cli(["validate", "--graph", str(graph), "--schema", str(schema)]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["ok"] is True

    def test_extract_to_stdout(self, tmp_path, parking_lot_lines, capsys):
        graph = _write_graph(tmp_path, parking_lot_lines)
        assert run_cli(["extract", "--graph", str(graph)]) == 0
        assert "NODE Person" in capsys.readouterr().out

    def test_validate_nonconforming_exits_2(self, tmp_path, parking_lot_lines, capsys):
        graph = _write_graph(tmp_path, parking_lot_lines)
        schema = tmp_path / "schema.pgs"
        schema.write_text("NODE Person { name: STRING, parkingSpot: STRING }\n")
        assert run_cli(["validate", "--graph", str(graph), "--schema", str(schema)]) == 2
        report = json.loads(capsys.readouterr().out)
        assert report["ok"] is False

    def test_bad_graph_file_exits_2(self, tmp_path, capsys):
        graph = _write_graph(tmp_path, ["{nope"])
        assert run_cli(["extract", "--graph", str(graph)]) == 2
        assert "line 1" in capsys.readouterr().err

    def test_usage_error_exits_1(self):
        assert run_cli(["extract"]) == 1
        assert run_cli(["frobnicate"]) == 1


class TestFmt:
    def test_canonicalizes_in_place(self, tmp_path):
        path = tmp_path / "schema.pgs"
        path.write_text("NODE B{}\nNODE A { y : INTEGER , x : STRING }")
        assert run_cli(["fmt", str(path)]) == 0
        assert path.read_text() == "NODE A { x: STRING, y: INTEGER }\nNODE B {}\n"

    def test_parse_errors_exit_2(self, tmp_path, capsys):
        path = tmp_path / "schema.pgs"
        path.write_text("NODE A { x: WAT }")
        assert run_cli(["fmt", str(path)]) == 2
        assert "WAT" in capsys.readouterr().err


class TestEdit:
    def test_edit_in_place(self, tmp_path):
        path = tmp_path / "schema.pgs"
        path.write_text("NODE Person { name: STRING }\n")
        command = json.dumps({"op": "add-property", "owner": "Person", "name": "age", "type": "INTEGER"})
        assert run_cli(["edit", "--schema", str(path), "--json", command]) == 0
        assert "age: INTEGER?" in path.read_text()

    def test_compat_guard_exits_3_and_leaves_file_alone(self, tmp_path, capsys):
        path = tmp_path / "schema.pgs"
        original = "NODE Person { name: STRING }\n"
        path.write_text(original)
        command = json.dumps({"op": "remove-property", "owner": "Person", "name": "name"})
        assert run_cli(["edit", "--schema", str(path), "--check-compat", "--json", command]) == 3
        report = json.loads(capsys.readouterr().out)
        assert report["compatible"] is False and report["violations"]
        assert path.read_text() == original

    def test_unknown_element_exits_2(self, tmp_path, capsys):
        path = tmp_path / "schema.pgs"
        path.write_text("NODE Person {}\n")
        command = json.dumps({"op": "remove-node", "type": "Ghost"})
        assert run_cli(["edit", "--schema", str(path), "--json", command]) == 2


class TestDiff:
    def test_semantic_diff_prints_template(self, tmp_path, capsys):
        a = tmp_path / "a.pgs"
        b = tmp_path / "b.pgs"
        a.write_text("NODE Person {}\n")
        b.write_text("NODE Person {}\nNODE Employee {}\n")
        assert run_cli(["diff", str(a), str(b), "--semantic"]) == 0
        assert capsys.readouterr().out == "Added node Employee\n"

    def test_raw_diff_is_unified(self, tmp_path, capsys):
        a = tmp_path / "a.pgs"
        b = tmp_path / "b.pgs"
        a.write_text("NODE Person {}\n")
        b.write_text("NODE Person {}\nNODE Employee {}\n")
        assert run_cli(["diff", str(a), str(b), "--raw"]) == 0
        out = capsys.readouterr().out
        assert "+NODE Employee {}" in out

    def test_visual_diff_carries_symbols(self, tmp_path, capsys):
        a = tmp_path / "a.pgs"
        b = tmp_path / "b.pgs"
        a.write_text("NODE Person {}\n")
        b.write_text("NODE Employee {}\n")
        assert run_cli(["diff", str(a), str(b), "--visual"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["Employee"] == {"status": "added", "symbol": "+"}
        assert payload["Person"] == {"status": "removed", "symbol": "-"}


class TestWorkspaceFlow:
    def test_commit_log_diff_export(self, tmp_path, parking_lot_lines, capsys):
        graph = _write_graph(tmp_path, parking_lot_lines)
        ws = str(tmp_path / "ws")
        assert run_cli(["extract", "--graph", str(graph), "--workspace", ws]) == 0
        assert run_cli(["commit", "--workspace", ws, "-m", "extracted"]) == 0
        command = json.dumps(
            {"op": "split", "type": "Person", "discriminator": "parkingSpot", "with": "Employee", "without": "Guest"}
        )
        assert run_cli(["edit", "--workspace", ws, "--json", command]) == 0
        assert run_cli(["commit", "--workspace", ws, "-m", "split"]) == 0
        capsys.readouterr()

        assert run_cli(["log", "--workspace", ws]) == 0
        log = json.loads(capsys.readouterr().out)
        assert [v["id"] for v in log["versions"]] == [1, 2]

        assert run_cli(["diff", "--workspace", ws, "--from", "1", "--to", "2"]) == 0
        sentences = capsys.readouterr().out.splitlines()
        assert "Removed node Person" in sentences
        assert "Added node Employee" in sentences
        assert "Added node Guest" in sentences

        out = tmp_path / "export.json"
        assert run_cli(["export", "--workspace", ws, "--format", "json", "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        names = {"&".join(nt["labels"]) for nt in payload["nodeTypes"]}
        assert names == {"Employee", "Guest"}

    def test_exported_pgs_matches_head(self, tmp_path, parking_lot_lines):
        graph = _write_graph(tmp_path, parking_lot_lines)
        ws = tmp_path / "ws"
        run_cli(["extract", "--graph", str(graph), "--workspace", str(ws)])
        out = tmp_path / "export.pgs"
        assert run_cli(["export", "--workspace", str(ws), "--format", "pgs", "--out", str(out)]) == 0
        from pgschema import Workspace

        head = Workspace(ws).head
        assert schema_equal(parse_schema(out.read_text()), head)
        assert out.read_text() == serialize_schema(head).text
