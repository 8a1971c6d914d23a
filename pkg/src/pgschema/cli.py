"""Command-line front door for extraction, validation, editing, diffing,
history, and export.

Exit codes: 0 success, 1 usage error, 2 input error (including a graph that
does not conform on `validate`), 3 compatibility violation.
"""

from __future__ import annotations

import argparse
import difflib
import json
import sys
from pathlib import Path
from typing import Optional

from .compat import check_compat
from .diff import annotate_visual, compute_diff, render_semantic
from .dsl import SchemaParseError, parse_schema, serialize_schema
from .extract import ExtractionError, ExtractionOptions, extract_schema
from .graph import GraphLoadError, load_graph_file, validate_conformance
from .model import SchemaGraph
from .workspace import Workspace, WorkspaceError, export_text

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_INCOMPATIBLE = 3


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):  # exit 1 instead of argparse's default 2
        raise _UsageError(message)


class CliInputError(Exception):
    pass


def _read_schema(path: str) -> SchemaGraph:
    try:
        return parse_schema(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise CliInputError(f"{path}: {exc}") from exc
    except SchemaParseError as exc:
        lines = "\n".join(f"{path}:{e}" for e in exc.errors)
        raise CliInputError(lines) from exc


def _read_graph(path: str):
    try:
        return load_graph_file(path)
    except OSError as exc:
        raise CliInputError(f"{path}: {exc}") from exc
    except GraphLoadError as exc:
        lines = "\n".join(f"{path}: line {ln}: {msg}" for ln, msg in exc.issues)
        raise CliInputError(lines) from exc


def _open_workspace(root: str) -> Workspace:
    try:
        return Workspace(root)
    except WorkspaceError as exc:
        raise CliInputError(str(exc)) from exc


def _print_json(payload) -> None:
    print(json.dumps(payload, indent=2))


# ---------------------------------------------------------------- commands

def _cmd_extract(args) -> int:
    graph = _read_graph(args.graph)
    try:
        schema = extract_schema(
            graph,
            ExtractionOptions(
                infer_cardinality=not args.no_cardinality,
                infer_subtypes=args.infer_subtypes,
            ),
        )
    except ExtractionError as exc:
        raise CliInputError(str(exc)) from exc
    text = serialize_schema(schema).text
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    if args.workspace:
        _open_workspace(args.workspace).set_head(schema)
    if not args.out and not args.workspace:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_validate(args) -> int:
    graph = _read_graph(args.graph)
    schema = _load_target_schema(args)
    report = validate_conformance(graph, schema, open_world=args.open_world)
    _print_json(report.to_json())
    return EXIT_OK if report.ok else EXIT_INPUT


def _cmd_fmt(args) -> int:
    schema = _read_schema(args.file)
    Path(args.file).write_text(serialize_schema(schema).text, encoding="utf-8")
    return EXIT_OK


def _load_target_schema(args) -> SchemaGraph:
    if getattr(args, "schema", None):
        return _read_schema(args.schema)
    if getattr(args, "workspace", None):
        return _open_workspace(args.workspace).head
    raise _UsageError("one of --schema or --workspace is required")


def _cmd_edit(args) -> int:
    from .refine import EditCommandError, apply_edit_command
    from .model import UnknownElementError

    try:
        command = json.loads(args.json)
    except ValueError as exc:
        raise CliInputError(f"invalid edit command JSON: {exc}") from exc

    old = _load_target_schema(args)
    try:
        new = apply_edit_command(old, command)
    except (EditCommandError, UnknownElementError, ValueError) as exc:
        raise CliInputError(str(exc)) from exc

    if args.check_compat:
        report = check_compat(compute_diff(old, new))
        if not report.compatible:
            _print_json(report.to_json())
            return EXIT_INCOMPATIBLE

    text = serialize_schema(new).text
    if args.workspace:
        _open_workspace(args.workspace).set_head(new)
    if args.schema:
        Path(args.out or args.schema).write_text(text, encoding="utf-8")
    elif args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    return EXIT_OK


def _cmd_diff(args) -> int:
    if args.files:
        if len(args.files) != 2:
            raise _UsageError("diff takes exactly two schema files (or --workspace with --from/--to)")
        old = _read_schema(args.files[0])
        new = _read_schema(args.files[1])
    else:
        if not args.workspace or args.from_id is None or args.to_id is None:
            raise _UsageError("diff needs two files, or --workspace with --from and --to")
        ws = _open_workspace(args.workspace)
        try:
            old = ws.schema_at(args.from_id)
            new = ws.schema_at(args.to_id)
        except WorkspaceError as exc:
            raise CliInputError(str(exc)) from exc

    d = compute_diff(old, new)
    if args.json:
        _print_json(d.to_json())
    elif args.raw:
        old_text = serialize_schema(old).text.splitlines(keepends=True)
        new_text = serialize_schema(new).text.splitlines(keepends=True)
        sys.stdout.writelines(difflib.unified_diff(old_text, new_text, fromfile="old", tofile="new"))
    elif args.visual:
        annotations = annotate_visual(old, new, d)
        _print_json({name: {"status": a.status, "symbol": a.symbol} for name, a in annotations.items()})
    else:
        for sentence in render_semantic(d):
            print(sentence)
    return EXIT_OK


def _cmd_commit(args) -> int:
    ws = _open_workspace(args.workspace)
    version = ws.commit(args.message)
    _print_json(version.to_json())
    return EXIT_OK


def _cmd_log(args) -> int:
    ws = _open_workspace(args.workspace)
    _print_json({"versions": [v.to_json() for v in ws.versions()]})
    return EXIT_OK


def _cmd_export(args) -> int:
    schema = _load_target_schema(args)
    try:
        text = export_text(schema, args.format)
    except WorkspaceError as exc:
        raise CliInputError(str(exc)) from exc
    try:
        Path(args.out).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CliInputError(f"{args.out}: {exc}") from exc
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(args.workspace)
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="pgschema", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="extract a schema from a graph file")
    p.add_argument("--graph", required=True, help="graph file (one JSON node/edge per line)")
    p.add_argument("--out", help="write the schema text here (stdout if omitted)")
    p.add_argument("--workspace", help="also set the workspace head")
    p.add_argument("--infer-subtypes", action="store_true")
    p.add_argument("--no-cardinality", action="store_true", help="default 0..* instead of observed bounds")
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("validate", help="check a graph against a schema")
    p.add_argument("--graph", required=True)
    p.add_argument("--schema", help="schema file (.pgs)")
    p.add_argument("--workspace", help="use the workspace head as schema")
    p.add_argument("--open-world", action="store_true", help="allow undeclared properties")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("fmt", help="canonicalize a schema file in place")
    p.add_argument("file")
    p.set_defaults(func=_cmd_fmt)

    p = sub.add_parser("edit", help="apply a JSON edit command")
    p.add_argument("--json", required=True, help="the edit command, e.g. '{\"op\":\"add-node\",...}'")
    p.add_argument("--schema", help="schema file to edit in place")
    p.add_argument("--workspace", help="edit the workspace head")
    p.add_argument("--out", help="write the result here instead of in place")
    p.add_argument("--check-compat", action="store_true", help="reject backwards-incompatible edits (exit 3)")
    p.set_defaults(func=_cmd_edit)

    p = sub.add_parser("diff", help="compare two schemas")
    p.add_argument("files", nargs="*", help="two .pgs files")
    p.add_argument("--workspace")
    p.add_argument("--from", dest="from_id", type=int)
    p.add_argument("--to", dest="to_id", type=int)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--semantic", action="store_true", help="natural-language sentences (default)")
    mode.add_argument("--raw", action="store_true", help="unified text diff")
    mode.add_argument("--visual", action="store_true", help="per-element status annotations")
    mode.add_argument("--json", action="store_true", help="change records as JSON")
    p.set_defaults(func=_cmd_diff)

    p = sub.add_parser("commit", help="commit the workspace head as a new version")
    p.add_argument("--workspace", required=True)
    p.add_argument("-m", "--message", required=True)
    p.set_defaults(func=_cmd_commit)

    p = sub.add_parser("log", help="list committed versions")
    p.add_argument("--workspace", required=True)
    p.set_defaults(func=_cmd_log)

    p = sub.add_parser("export", help="export a schema as .pgs or JSON")
    p.add_argument("--schema", help="schema file (.pgs)")
    p.add_argument("--workspace", help="use the workspace head")
    p.add_argument("--format", choices=["pgs", "json"], required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_export)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--workspace", required=True)
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(func=_cmd_serve)

    return parser


def run_cli(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CliInputError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    raise SystemExit(run_cli())


if __name__ == "__main__":
    main()
