#!/usr/bin/env python3
"""Capture real HTTP payloads from the pgschema service into test fixtures.

The frontend unit tests run against an in-memory API stub; every payload that
stub serves is recorded here, byte-for-byte, from the actual service so the
tests exercise the real wire format. Re-run after changing the API:

    python3 tools/make_fixtures.py
"""

from __future__ import annotations

import json
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from pgschema.service import create_app

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

FIVE_TYPE_SCHEMA = """\
NODE Person { name: STRING, age: INTEGER? }
NODE Employee : Person { badge: STRING }
NODE Guest { name: STRING }
NODE Company { city: STRING? }
EDGE (Person) -[WORKS_AT]-> <0..1> (Company)
"""

PARKING_LOT = "\n".join(
    [
        '{"kind":"node","id":"p1","labels":["Person"],"properties":{"name":"Ada","parkingSpot":"A3"}}',
        '{"kind":"node","id":"p2","labels":["Person"],"properties":{"name":"Bob"}}',
    ]
)

BROKEN_UPLOAD = "\n".join(
    [
        '{"kind":"node","id":"a","labels":["Person"],"properties":{}}',
        '{"kind":"node","id":"b","labels":["Person"],"properties":{}}',
        "{broken",
    ]
)


def dump(name: str, payload) -> None:
    path = FIXTURES / name
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {path.relative_to(FIXTURES.parent.parent)}")


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)

    with tempfile.TemporaryDirectory() as tmp:
        client = TestClient(create_app(Path(tmp) / "ws"))

        # edit screen: the five-type schema, its 409 guard rejection, and the
        # accepted removal
        response = client.put("/schema", content=FIVE_TYPE_SCHEMA)
        assert response.status_code == 200, response.text
        dump("five_type_schema.json", response.json())

        client.put("/settings", json={"guard_compat": True})
        rejected = client.post(
            "/edits", json={"op": "remove-property", "owner": "Person", "name": "name"}
        )
        assert rejected.status_code == 409, rejected.text
        dump("remove_property_409.json", rejected.json())

        client.put("/settings", json={"guard_compat": False})
        allowed = client.post(
            "/edits", json={"op": "remove-property", "owner": "Person", "name": "name"}
        )
        assert allowed.status_code == 200, allowed.text
        dump("after_remove_allowed.json", allowed.json())

        # schema text errors as PUT /schema reports them
        bad = client.put("/schema", content="NODE Person { name: WAT }")
        assert bad.status_code == 422
        dump("put_schema_422.json", bad.json())

    with tempfile.TemporaryDirectory() as tmp:
        client = TestClient(create_app(Path(tmp) / "ws"))

        # history screen: v1 -> v2 adds Employee and retypes Person.age
        client.put("/schema", content="NODE Person { age: STRING }\n")
        client.post("/commit", json={"message": "initial"})
        client.put("/schema", content="NODE Person { age: INTEGER }\nNODE Employee {}\n")
        client.post("/commit", json={"message": "add Employee, retype age"})

        dump("versions.json", client.get("/versions").json())
        dump("history_v1_schema.json", client.get("/versions/1/schema").json())
        dump("history_v2_schema.json", client.get("/versions/2/schema").json())
        for mode in ("semantic", "raw", "visual"):
            payload = client.get("/diff", params={"from": 1, "to": 2, "mode": mode}).json()
            dump(f"diff_{mode}.json", payload)

    with tempfile.TemporaryDirectory() as tmp:
        client = TestClient(create_app(Path(tmp) / "ws"))

        # extract screen: successful upload and a malformed line
        ok = client.post("/extract", files={"graph": ("g.jsonl", PARKING_LOT, "text/plain")})
        assert ok.status_code == 200, ok.text
        dump("extract_success.json", ok.json())

        broken = client.post("/extract", files={"graph": ("g.jsonl", BROKEN_UPLOAD, "text/plain")})
        assert broken.status_code == 422, broken.text
        dump("extract_error.json", broken.json())


if __name__ == "__main__":
    main()
