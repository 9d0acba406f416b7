"""Regenerate the frozen service payloads used by the frontend tests.

Run from the repository root:  python3 frontend/scripts/make_fixtures.py
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from dcopex.service import create_app

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def dump(name: str, payload) -> None:
    (OUT / name).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    client = TestClient(create_app())
    created = client.post("/sessions", json={"preset": "meeting-demo"}).json()
    sid = created["session_id"]
    solve = client.post(f"/sessions/{sid}/solve", json={"mode": "optimal"}).json()
    session = client.get(f"/sessions/{sid}").json()
    dump("session.json", session)
    dump("solve.json", solve)
    # The demo's contrastive question: why Afternoon/Evening rather than
    # Noon/Afternoon for the two meetings?
    query = {
        "asked_agent": 0,
        "original": {"0": 2, "1": 3},
        "alternative": {"0": 1, "1": 2},
    }
    for variant in ("base", "o1"):
        response = client.post(
            f"/sessions/{sid}/explain", json={"query": query, "variant": variant}
        )
        assert response.status_code == 200, response.text
        dump(f"explain_{variant}.json", response.json())


if __name__ == "__main__":
    main()
