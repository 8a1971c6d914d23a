"""Versioned schema store: append-only commit history on plain files.

Layout under the workspace root:

    index.json          {"versions": [{"id": 1, "message": ..., "timestamp": ...}]}
    versions/<id>.pgs   canonical schema text per committed version
    head.pgs            current (possibly uncommitted) schema
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Union

from .diff import SchemaDiff, compute_diff
from .dsl import parse_schema, serialize_schema
from .model import SchemaGraph, schema_to_json


class WorkspaceError(ValueError):
    pass


class CorruptWorkspaceError(WorkspaceError):
    """The on-disk store is inconsistent; the message names the offending file."""


class UnknownVersionError(WorkspaceError):
    pass


@dataclass(frozen=True)
class Version:
    id: int
    message: str
    timestamp: int  # UTC seconds

    def to_json(self) -> dict[str, Any]:
        return {"id": self.id, "message": self.message, "timestamp": self.timestamp}


class Workspace:
    """One schema line of history; a single writer at a time."""

    def __init__(self, root: Union[str, Path]):
        self.root = Path(root)
        self._versions: list[Version] = []
        self._head = SchemaGraph()
        self._load()

    # ------------------------------------------------------------------ io

    @property
    def _index_path(self) -> Path:
        return self.root / "index.json"

    @property
    def _head_path(self) -> Path:
        return self.root / "head.pgs"

    def _version_path(self, version_id: int) -> Path:
        return self.root / "versions" / f"{version_id}.pgs"

    def _load(self) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        if self._index_path.exists():
            try:
                raw = json.loads(self._index_path.read_text(encoding="utf-8"))
                entries = raw["versions"]
                self._versions = [
                    Version(int(e["id"]), str(e["message"]), int(e["timestamp"])) for e in entries
                ]
            except (ValueError, KeyError, TypeError) as exc:
                raise CorruptWorkspaceError(f"{self._index_path}: unreadable index: {exc}") from exc
            for pos, version in enumerate(self._versions, start=1):
                if version.id != pos:
                    raise CorruptWorkspaceError(
                        f"{self._index_path}: version ids must be dense from 1, found {version.id} at {pos}"
                    )
                if not self._version_path(version.id).exists():
                    raise CorruptWorkspaceError(f"{self._version_path(version.id)}: missing version file")
        if self._head_path.exists():
            try:
                self._head = parse_schema(self._head_path.read_text(encoding="utf-8"))
            except ValueError as exc:
                raise CorruptWorkspaceError(f"{self._head_path}: {exc}") from exc

    def _write_index(self) -> None:
        payload = {"versions": [v.to_json() for v in self._versions]}
        tmp = self._index_path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        tmp.replace(self._index_path)

    # ------------------------------------------------------------- history

    @property
    def head(self) -> SchemaGraph:
        return self._head

    def set_head(self, schema: SchemaGraph) -> None:
        self._head = schema
        self._head_path.write_text(serialize_schema(schema).text, encoding="utf-8")

    def versions(self) -> list[Version]:
        return list(self._versions)

    def commit(self, message: str) -> Version:
        version = Version(len(self._versions) + 1, message, int(time.time()))
        path = self._version_path(version.id)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(serialize_schema(self._head).text, encoding="utf-8")
        self._versions.append(version)
        self._write_index()
        return version

    def version(self, version_id: int) -> Version:
        for v in self._versions:
            if v.id == version_id:
                return v
        raise UnknownVersionError(f"no version {version_id}")

    def schema_at(self, version_id: int) -> SchemaGraph:
        self.version(version_id)
        path = self._version_path(version_id)
        try:
            return parse_schema(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise CorruptWorkspaceError(f"{path}: {exc}") from exc
        except ValueError as exc:
            raise CorruptWorkspaceError(f"{path}: stored schema does not parse: {exc}") from exc

    def version_text(self, version_id: int) -> str:
        self.version(version_id)
        return self._version_path(version_id).read_text(encoding="utf-8")

    def diff_versions(self, from_id: int, to_id: int) -> SchemaDiff:
        return compute_diff(self.schema_at(from_id), self.schema_at(to_id))

    # -------------------------------------------------------------- export

    def export(self, fmt: str, path: Union[str, Path]) -> None:
        Path(path).write_text(export_text(self._head, fmt), encoding="utf-8")


def export_text(schema: SchemaGraph, fmt: str) -> str:
    if fmt == "pgs":
        return serialize_schema(schema).text
    if fmt == "json":
        return json.dumps(schema_to_json(schema), indent=2) + "\n"
    raise WorkspaceError(f"unknown export format {fmt!r} (expected 'pgs' or 'json')")


def load(root: Union[str, Path]) -> Workspace:
    """Open (or initialize) the workspace at ``root``, verifying index integrity."""
    return Workspace(root)
