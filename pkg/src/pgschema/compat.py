"""Backwards-compatibility gate: additions are fine, anything that removes or
narrows what existing consumers rely on is flagged."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .diff import ChangeKind, ChangeRecord, SchemaDiff
from .model import DataType, is_subtype


@dataclass(frozen=True)
class CompatViolation:
    record: ChangeRecord
    reason: str


@dataclass(frozen=True)
class CompatReport:
    violations: tuple[CompatViolation, ...] = ()

    @property
    def compatible(self) -> bool:
        return not self.violations

    def to_json(self) -> dict[str, Any]:
        return {
            "compatible": self.compatible,
            "violations": [
                {"record": v.record.to_json(), "reason": v.reason} for v in self.violations
            ],
        }


def _tightens(before: list, after: list) -> bool:
    lo_before, hi_before = before
    lo_after, hi_after = after
    if lo_after > lo_before:
        return True
    if hi_after is None:
        return False
    return hi_before is None or hi_after < hi_before


def check_compat(d: SchemaDiff) -> CompatReport:
    """A record violates compatibility iff it removes an element, narrows a
    datatype, makes an optional property required (or adds a required one),
    tightens a cardinality bound, or moves edge endpoints."""
    violations: list[CompatViolation] = []
    for r in d.records:
        kind = r.kind
        if kind is ChangeKind.REMOVED_NODE_TYPE:
            violations.append(CompatViolation(r, f"removes node type {r.subject}"))
        elif kind is ChangeKind.REMOVED_EDGE_TYPE:
            violations.append(CompatViolation(r, f"removes edge type {r.subject}"))
        elif kind is ChangeKind.REMOVED_PROPERTY:
            violations.append(CompatViolation(r, f"removes property {r.subject}"))
        elif kind is ChangeKind.ADDED_PROPERTY and r.after.get("required"):
            violations.append(
                CompatViolation(r, f"adds required property {r.subject}; existing data cannot satisfy it")
            )
        elif kind is ChangeKind.CHANGED_PROPERTY_TYPE:
            before = DataType[r.before.upper()]
            after = DataType[r.after.upper()]
            if not is_subtype(before, after):
                violations.append(
                    CompatViolation(r, f"narrows datatype of {r.subject} from {r.before} to {r.after}")
                )
        elif kind is ChangeKind.CHANGED_PROPERTY_REQUIRED and r.after:
            violations.append(CompatViolation(r, f"makes {r.subject} required"))
        elif kind is ChangeKind.CHANGED_CARDINALITY:
            if _tightens(r.before["out"], r.after["out"]) or _tightens(r.before["in"], r.after["in"]):
                violations.append(CompatViolation(r, f"tightens cardinality of {r.subject}"))
        elif kind is ChangeKind.CHANGED_EDGE_ENDPOINTS:
            violations.append(CompatViolation(r, f"changes endpoints of {r.subject}"))
    return CompatReport(tuple(violations))
