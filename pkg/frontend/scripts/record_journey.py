"""Records the UI contract fixtures from a live gateway.

Drives the scripted journey (teleport, two pans, three steps, a jump,
chat open, three chat turns with one movement command) through the
real HTTP app and captures every request, response, and stream record
verbatim into test/fixtures/journey.json, plus the action metadata
into test/fixtures/actions.json. The browser tests replay these to
verify the client against the genuine wire contract without a server.

Run from the frontend directory with the streetnav package installed:

    python3 scripts/record_journey.py
"""
import json
import pathlib
import sys

from fastapi.testclient import TestClient

from streetnav.gateway import Gateway, create_app

JOURNEY = [
    {"action": "teleport", "query": "Gridville City Hall"},
    {"action": "pan", "direction": "Right"},
    {"action": "pan", "direction": "Right"},
    {"action": "step", "direction": "Forward"},
    {"action": "step", "direction": "Forward"},
    {"action": "step", "direction": "Forward"},
    {"action": "jump"},
    {"action": "chat_open", "mode": "typed"},
    {"action": "chat_turn", "input": "where is the city hall?"},
    {"action": "chat_turn", "input": "turn around"},
    {"action": "chat_turn", "input": "is there a cafe nearby?"},
]

CREATE_REQUEST = {"fixture": "grid-city", "start_pano": "g000_000", "heading": 0.0}


def main() -> None:
    gateway = Gateway(clock=lambda: 0.0)
    client = TestClient(create_app(gateway))

    created = client.post("/sessions", json=CREATE_REQUEST)
    assert created.status_code == 200, created.text
    create_doc = created.json()
    sid = create_doc["session_id"]

    cursor = 1
    steps = []
    for request in JOURNEY:
        response = client.post(f"/sessions/{sid}/actions", json=request)
        assert response.status_code == 200, f"{request}: {response.text}"
        doc = response.json()
        assert doc["ok"], f"{request}: {doc}"
        if request["action"] in ("pan", "step", "jump", "teleport"):
            assert doc.get("moved", True), f"{request} did not move: {doc}"
        if request["action"] == "chat_turn":
            assert doc["chat"]["ok"], f"{request}: {doc}"
        events = client.get(f"/sessions/{sid}/events", params={"from": cursor})
        events_doc = events.json()
        steps.append({
            "request": request,
            "response": doc,
            "records": events_doc["records"],
        })
        cursor = events_doc["next"]

    commands = [c for s in steps for c in s["response"].get("chat", {}).get("commands", [])]
    assert commands == ["turnAround"], f"expected exactly one movement command, got {commands}"

    final_state = client.get(f"/sessions/{sid}/state").json()
    meta = client.get("/meta/actions").json()

    out_dir = pathlib.Path(__file__).resolve().parent.parent / "test" / "fixtures"
    out_dir.mkdir(parents=True, exist_ok=True)
    journey = {
        "create_request": CREATE_REQUEST,
        "create": create_doc,
        "steps": steps,
        "final_state": final_state,
        "final_next": cursor,
    }
    (out_dir / "journey.json").write_text(json.dumps(journey, indent=1) + "\n")
    (out_dir / "actions.json").write_text(json.dumps(meta, indent=1) + "\n")
    total = sum(len(s["records"]) for s in steps)
    print(f"recorded {len(steps)} steps, {total} stream records -> {out_dir}")


if __name__ == "__main__":
    sys.exit(main())
