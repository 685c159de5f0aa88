#!/usr/bin/env python3
"""Scripted walk through the interactive workflow against an in-process
session service: demonstrate six actions on the store-locator site, authorize
two predictions, then let the program automate the rest.

Usage: python3 scripts/demo_session.py
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from fastapi.testclient import TestClient

from webrpa.service import create_app


def main() -> int:
    client = TestClient(create_app(seed=0))
    state = client.post("/sessions", json={"fixture": "store-locator"}).json()
    sid = state["session_id"]
    print(f"session {sid} on fixture store-locator; input data: {state['input_data']}")

    steps = [
        {"kind": "EnterData", "selector": "/html[1]/body[1]/input[1]",
         "value_path": "x['zips'][1]"},
        {"kind": "Click", "selector": "/html[1]/body[1]/button[1]"},
        {"kind": "ScrapeText", "selector": "/html[1]/body[1]/div[1]/div[1]"},
        {"kind": "ScrapeText", "selector": "/html[1]/body[1]/div[1]/div[2]"},
        {"kind": "ScrapeText", "selector": "/html[1]/body[1]/div[2]/div[1]"},
        {"kind": "ScrapeText", "selector": "/html[1]/body[1]/div[2]/div[2]"},
    ]
    for step in steps:
        state = client.post(f"/sessions/{sid}/demonstrate", json=step).json()
        preds = [p["action"] for p in state["predictions"]]
        print(f"demonstrated {step['kind']:<11} -> phase {state['phase']:<14} "
              f"predictions {preds}")

    for n in (1, 2):
        state = client.post(f"/sessions/{sid}/accept", json={"prediction_id": 0}).json()
        print(f"accept #{n} -> phase {state['phase']}, trace length {state['trace_len']}")

    state = client.post(f"/sessions/{sid}/auto", json={"step_limit": 100}).json()
    print(f"automation applied {state['applied']} actions ({state['reason']})")
    print(f"synthesized program:\n{client.get(f'/sessions/{sid}/program').json()['pretty']}")
    print("scraped texts:")
    for text in state["scraped"]:
        print(f"  {text}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
