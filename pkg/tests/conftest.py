from __future__ import annotations

import pytest

from pgschema import load_graph

# The two-person fixture: one Person has a parkingSpot, the other does not.
PARKING_LOT_LINES = [
    '{"kind":"node","id":"p1","labels":["Person"],"properties":{"name":"Ada","parkingSpot":"A3"}}',
    '{"kind":"node","id":"p2","labels":["Person"],"properties":{"name":"Bob"}}',
]


@pytest.fixture
def parking_lot_graph():
    return load_graph("\n".join(PARKING_LOT_LINES))


@pytest.fixture
def parking_lot_lines():
    return list(PARKING_LOT_LINES)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = []
    for status, passed in (("passed", True), ("failed", False), ("error", False)):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance" in nodeid and getattr(report, "when", "call") in ("call", "setup"):
                name = nodeid.split("::")[-1]
                lines.append(f"{'PASS' if passed else 'FAIL'}  {name}")
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(set(lines), key=lambda l: l.split()[-1]):
            terminalreporter.write_line(line)
