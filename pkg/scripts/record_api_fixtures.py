#!/usr/bin/env python3
"""Record control-service responses as JSON fixtures.

The files under frontend/fixtures/ are the shared API contract: the
browser tests render from them, and the Python suite asserts the live
service still matches their shape and values.  Re-run this script after
any wire-format change.
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from cavraman.service import create_app

FIXTURES = Path(__file__).resolve().parent.parent / "frontend" / "fixtures"

SESSION_CONFIG = {"config_file": "defaults-oh.cfg", "j_max": 8}
CONVERGED_STEPS = [
    ("v0-0:J8-6", 60), ("v0-0:J7-5", 60), ("v0-0:J6-4", 60),
    ("v0-0:J5-3", 60), ("v0-0:J4-2", 60), ("v0-0:J3-1", 60),
    ("v0-0:J2-0", 60),
]


def dump(name: str, payload) -> None:
    path = FIXTURES / name
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print(f"wrote {path}")


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    client = TestClient(create_app())

    fresh = client.post("/sessions", json=SESSION_CONFIG).json()
    dump("session_fresh.json", fresh)

    sid = fresh["id"]
    dump("spectrum.json", client.get(f"/sessions/{sid}/spectrum").json())

    stepped = None
    for label, ms in CONVERGED_STEPS:
        stepped = client.post(f"/sessions/{sid}/step",
                              json={"transition": label,
                                    "duration_ms": ms}).json()
    dump("session_converged.json", stepped)


if __name__ == "__main__":
    main()
