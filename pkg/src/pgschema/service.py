"""HTTP service exposing the engine to the browser UI.

One workspace per service instance; mutations are serialized by a lock and a
rejected edit leaves the head untouched. Every endpoint is a thin wrapper over
the corresponding library call.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path
from typing import Any, Optional, Union

from fastapi import FastAPI, File, Form, HTTPException, Query, Request, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from .compat import check_compat
from .diff import annotate_visual, compute_diff, render_semantic
from .dsl import SchemaParseError, parse_schema, serialize_schema
from .extract import ExtractionError, ExtractionOptions, extract_schema
from .graph import GraphLoadError, load_graph, validate_conformance
from .model import SchemaGraph, UnknownElementError, schema_to_json
from .refine import EditCommandError, apply_edit_command
from .workspace import UnknownVersionError, Workspace, export_text

import difflib


class SessionState:
    """Workspace handle plus the UI session flags (the compat guard checkbox)."""

    def __init__(self, root: Union[str, Path]):
        self.workspace = Workspace(root)
        self.lock = threading.Lock()
        self.guard_compat = False
        self.last_report = None  # conformance of the most recent extraction


def _schema_payload(schema: SchemaGraph) -> dict[str, Any]:
    rendered = serialize_schema(schema)
    return {
        "text": rendered.text,
        "spans": [
            {"id": span.element_id, "start": span.start, "end": span.end} for span in rendered.spans
        ],
        "model": schema_to_json(schema, include_ids=True),
    }


def create_app(workspace_root: Union[str, Path]) -> FastAPI:
    app = FastAPI(title="pgschema", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    state = SessionState(workspace_root)
    app.state.session = state

    @app.post("/extract")
    async def extract(
        graph: UploadFile = File(...),
        infer_cardinality: bool = Form(True),
        infer_subtypes: bool = Form(False),
    ):
        raw = (await graph.read()).decode("utf-8", errors="replace")
        try:
            instance = load_graph(raw)
        except GraphLoadError as exc:
            return JSONResponse(
                status_code=422,
                content={"errors": [{"line": ln, "message": msg} for ln, msg in exc.issues]},
            )
        try:
            schema = extract_schema(
                instance,
                ExtractionOptions(infer_cardinality=infer_cardinality, infer_subtypes=infer_subtypes),
            )
        except ExtractionError as exc:
            return JSONResponse(status_code=422, content={"errors": [{"message": str(exc)}]})
        report = validate_conformance(instance, schema)
        with state.lock:
            state.workspace.set_head(schema)
            state.last_report = report
        payload = _schema_payload(schema)
        payload["conformance"] = report.to_json()
        return payload

    @app.get("/schema")
    def get_schema():
        return _schema_payload(state.workspace.head)

    @app.put("/schema")
    async def put_schema(request: Request):
        text = (await request.body()).decode("utf-8")
        try:
            schema = parse_schema(text)
        except SchemaParseError as exc:
            return JSONResponse(
                status_code=422,
                content={
                    "errors": [
                        {
                            "line": e.line,
                            "column": e.column,
                            "message": e.message,
                            "expected": e.expected,
                        }
                        for e in exc.errors
                    ]
                },
            )
        with state.lock:
            state.workspace.set_head(schema)
        return _schema_payload(schema)

    @app.post("/edits")
    async def post_edit(request: Request):
        try:
            command = json.loads((await request.body()).decode("utf-8"))
        except ValueError as exc:
            return JSONResponse(status_code=422, content={"error": f"invalid JSON: {exc}"})
        with state.lock:
            old = state.workspace.head
            try:
                new = apply_edit_command(old, command)
            except EditCommandError as exc:
                return JSONResponse(status_code=422, content={"error": str(exc)})
            except (UnknownElementError, ValueError) as exc:
                return JSONResponse(status_code=400, content={"error": str(exc)})
            if state.guard_compat:
                report = check_compat(compute_diff(old, new))
                if not report.compatible:
                    return JSONResponse(status_code=409, content=report.to_json())
            state.workspace.set_head(new)
            return _schema_payload(new)

    @app.post("/commit")
    async def post_commit(request: Request):
        try:
            body = json.loads((await request.body()).decode("utf-8") or "{}")
        except ValueError as exc:
            return JSONResponse(status_code=422, content={"error": f"invalid JSON: {exc}"})
        message = body.get("message", "")
        if not isinstance(message, str):
            return JSONResponse(status_code=422, content={"error": "'message' must be a string"})
        with state.lock:
            version = state.workspace.commit(message)
        return version.to_json()

    @app.get("/versions")
    def get_versions():
        return {"versions": [v.to_json() for v in state.workspace.versions()]}

    @app.get("/versions/{version_id}/schema")
    def get_version_schema(version_id: int):
        try:
            schema = state.workspace.schema_at(version_id)
        except UnknownVersionError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return _schema_payload(schema)

    @app.get("/diff")
    def get_diff(
        from_id: int = Query(alias="from"),
        to_id: int = Query(alias="to"),
        mode: str = "semantic",
    ):
        ws = state.workspace
        try:
            old = ws.schema_at(from_id)
            new = ws.schema_at(to_id)
        except UnknownVersionError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        d = compute_diff(old, new)
        payload: dict[str, Any] = {"from": from_id, "to": to_id, "mode": mode}
        if mode == "semantic":
            payload["sentences"] = render_semantic(d)
        elif mode == "raw":
            payload["diff"] = "".join(
                difflib.unified_diff(
                    serialize_schema(old).text.splitlines(keepends=True),
                    serialize_schema(new).text.splitlines(keepends=True),
                    fromfile=f"v{from_id}",
                    tofile=f"v{to_id}",
                )
            )
        elif mode == "visual":
            annotations = annotate_visual(old, new, d)
            payload["annotations"] = {
                name: {"status": a.status, "symbol": a.symbol} for name, a in annotations.items()
            }
        else:
            raise HTTPException(status_code=422, detail=f"unknown mode {mode!r}")
        payload["records"] = d.to_json()
        return payload

    @app.post("/export")
    async def post_export(request: Request):
        try:
            body = json.loads((await request.body()).decode("utf-8"))
        except ValueError as exc:
            return JSONResponse(status_code=422, content={"error": f"invalid JSON: {exc}"})
        fmt = body.get("format")
        if fmt not in ("pgs", "json"):
            return JSONResponse(status_code=422, content={"error": "'format' must be 'pgs' or 'json'"})
        content = export_text(state.workspace.head, fmt)
        path: Optional[str] = body.get("path")
        if path:
            try:
                Path(path).write_text(content, encoding="utf-8")
            except OSError as exc:
                return JSONResponse(status_code=400, content={"error": str(exc)})
            return {"path": path}
        media = "application/json" if fmt == "json" else "text/plain"
        return PlainTextResponse(
            content,
            media_type=media,
            headers={"Content-Disposition": f'attachment; filename="schema.{fmt}"'},
        )

    @app.get("/settings")
    def get_settings():
        return {"guard_compat": state.guard_compat}

    @app.put("/settings")
    async def put_settings(request: Request):
        try:
            body = json.loads((await request.body()).decode("utf-8"))
        except ValueError as exc:
            return JSONResponse(status_code=422, content={"error": f"invalid JSON: {exc}"})
        guard = body.get("guard_compat")
        if not isinstance(guard, bool):
            return JSONResponse(status_code=422, content={"error": "'guard_compat' must be a boolean"})
        state.guard_compat = guard
        return {"guard_compat": state.guard_compat}

    return app
