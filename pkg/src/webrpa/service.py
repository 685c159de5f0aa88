"""HTTP session service for interactive demonstrate/authorize/automate use.

One session owns a live synthetic site, the trace demonstrated so far, and
the synthesizer's incremental state. Demonstrating an action validates it
against the current page, applies it, and re-synthesizes; predictions can be
accepted (applied as if demonstrated), rejected, or run in bulk by handing
control to the top-ranked program. All mutating events are logged so a
session can be replayed deterministically from scratch.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from fastapi.responses import HTMLResponse

from .dom import DomTree, absolute_selector_of, resolve_selector, tree_to_json
from .harness import Fixture, Session, generate_fixture_suite
from .lang import (
    Action,
    ParseError,
    Program,
    action_from_json,
    action_to_json,
    canonical_form,
    pretty_program,
    program_to_json,
)
from .semantics import ExecutionError, Prediction, generalizes, get_value, satisfies
from .synthesis import SynthConfig, SynthState, synthesize

PHASE_DEMO = "demonstration"
PHASE_AUTH = "authorization"
PHASE_AUTO = "automation"


@dataclass
class LiveSession:
    session_id: str
    fixture: Fixture
    sim: Session
    config: SynthConfig
    auto_threshold: int
    actions: list[Action] = field(default_factory=list)
    doms: list[DomTree] = field(default_factory=list)
    synth_state: SynthState | None = None
    programs: list[Program] = field(default_factory=list)
    predictions: list[Prediction] = field(default_factory=list)
    phase: str = PHASE_DEMO
    agree_streak: int = 0
    events: list[dict] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def data(self):
        return self.fixture.input_data

    def page(self) -> DomTree:
        return self.doms[-1]

    def program_by_key(self, key: str) -> Program | None:
        for program in self.programs:
            if canonical_form(program) == key:
                return program
        return None


def _new_session(fixture: Fixture, config: SynthConfig, auto_threshold: int) -> LiveSession:
    sim = Session(fixture.spec, fixture.input_data)
    live = LiveSession(session_id=uuid.uuid4().hex[:12], fixture=fixture, sim=sim,
                       config=config, auto_threshold=auto_threshold)
    live.doms.append(sim.current)
    return live


def _prediction_json(live: LiveSession, idx: int, pred: Prediction) -> dict:
    page = live.page()
    selector_abs = None
    if pred.target_node_id is not None:
        node = page.node_by_id(pred.target_node_id)
        selector_abs = str(absolute_selector_of(node, page))
    program = live.program_by_key(pred.program_key)
    return {
        "id": idx,
        "action": action_to_json(pred.action),
        "target_node_id": pred.target_node_id,
        "selector_absolute": selector_abs,
        "program_key": pred.program_key,
        "program": None if program is None else program_to_json(program),
        "program_pretty": None if program is None else pretty_program(program),
    }


def _state_json(live: LiveSession) -> dict:
    return {
        "session_id": live.session_id,
        "fixture": live.fixture.name,
        "phase": live.phase,
        "trace_len": len(live.actions),
        "predictions": [_prediction_json(live, i, p) for i, p in enumerate(live.predictions)],
        "scraped": list(live.sim.scraped),
    }


def _parse_event_action(live: LiveSession, body: dict) -> tuple[Action, str | None]:
    """Turn a demonstrate payload into a concrete action on the current page.
    The target may come as a selector string or as a node id, in which case
    the server derives the absolute path itself."""
    if not isinstance(body, dict) or "kind" not in body:
        raise HTTPException(400, "action object with a 'kind' required")
    obj = dict(body)
    page = live.page()
    if obj.get("node_id") is not None:
        nid = obj.pop("node_id")
        try:
            node = page.node_by_id(int(nid))
        except (IndexError, ValueError):
            raise HTTPException(404, f"no node {nid!r} on the current page") from None
        obj["selector"] = str(absolute_selector_of(node, page))
    try:
        action = action_from_json(obj)
    except ParseError as exc:
        raise HTTPException(400, str(exc)) from exc
    entered = None
    if action.kind == "EnterData":
        try:
            entered = str(get_value(live.data, action.value_path))
        except ExecutionError as exc:
            raise HTTPException(409, f"value path not present in input data: {exc}") from exc
    if action.selector is not None and resolve_selector(action.selector, page) is None:
        raise HTTPException(409, f"selector {action.selector} does not resolve "
                                 "on the current page")
    return action, entered


def _apply_action(live: LiveSession, action: Action, entered: str | None) -> None:
    live.sim.apply(action, entered=entered)
    live.actions.append(action)
    live.doms.append(live.sim.current)


def _resynthesize(live: LiveSession) -> None:
    result = synthesize(live.actions, live.doms, live.data, live.config,
                        state=live.synth_state if live.config.incremental else None)
    live.synth_state = result.state
    live.programs = result.programs
    live.predictions = result.predictions


def _after_step(live: LiveSession, accepted: bool) -> None:
    _resynthesize(live)
    if accepted and len(live.predictions) == 1:
        live.agree_streak += 1
    elif accepted:
        live.agree_streak = 0
    else:
        live.agree_streak = 0
    if not live.predictions:
        live.phase = PHASE_DEMO
    elif accepted and live.agree_streak >= live.auto_threshold:
        live.phase = PHASE_AUTO
    else:
        live.phase = PHASE_AUTH


def _run_auto(live: LiveSession, step_limit: int) -> dict:
    live.phase = PHASE_AUTO
    applied = 0
    reason = "step-limit"
    while applied < step_limit:
        if not live.programs:
            reason = "no-program"
            break
        top = live.programs[0]
        pred = generalizes(top, live.actions, live.doms, live.data,
                           program_key=canonical_form(top))
        if pred is None:
            reason = "exhausted"
            break
        action = pred.action
        if action.selector is not None and pred.target_node_id is None:
            reason = "diverged"
            live.phase = PHASE_DEMO
            break
        entered = None
        if action.kind == "EnterData":
            try:
                entered = str(get_value(live.data, action.value_path))
            except ExecutionError:
                reason = "diverged"
                live.phase = PHASE_DEMO
                break
        _apply_action(live, action, entered)
        applied += 1
    if reason == "no-program":
        live.phase = PHASE_DEMO
    live.predictions = []
    return {"applied": applied, "reason": reason}


def create_app(seed: int = 0, default_fixture: str = "store-locator",
               extra_fixtures: list[Fixture] | None = None,
               config: SynthConfig | None = None, auto_threshold: int = 2,
               ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="webrpa session service")
    try:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                           allow_headers=["*"])
    except Exception:  # pragma: no cover - CORS is a dev convenience only
        pass
    fixtures = {f.name: f for f in generate_fixture_suite(seed)}
    for f in extra_fixtures or []:
        fixtures[f.name] = f
    sessions: dict[str, LiveSession] = {}
    cfg = config or SynthConfig()

    def get_session(session_id: str) -> LiveSession:
        live = sessions.get(session_id)
        if live is None:
            raise HTTPException(404, f"no session {session_id!r}")
        return live

    @app.get("/", response_class=HTMLResponse)
    def index():
        return ("<html><body><h1>webrpa session service</h1>"
                "<p>POST /sessions to begin.</p></body></html>")

    @app.get("/fixtures")
    def list_fixtures():
        return {"fixtures": sorted(fixtures)}

    @app.post("/sessions")
    def create_session(body: dict | None = None):
        body = body or {}
        name = body.get("fixture", default_fixture)
        if name not in fixtures:
            raise HTTPException(404, f"no fixture {name!r}")
        live = _new_session(fixtures[name], cfg, auto_threshold)
        sessions[live.session_id] = live
        live.events.append({"type": "create", "fixture": name})
        out = _state_json(live)
        out["page"] = tree_to_json(live.page())
        out["input_data"] = live.data
        return out

    @app.get("/sessions/{session_id}/page")
    def get_page(session_id: str):
        live = get_session(session_id)
        return tree_to_json(live.page())

    @app.get("/sessions/{session_id}/predictions")
    def get_predictions(session_id: str):
        live = get_session(session_id)
        return _state_json(live)

    @app.get("/sessions/{session_id}/program")
    def get_program(session_id: str):
        live = get_session(session_id)
        if not live.programs:
            raise HTTPException(404, "no synthesized program yet")
        top = live.programs[0]
        return {"program": program_to_json(top), "pretty": pretty_program(top),
                "n_programs": len(live.programs)}

    @app.get("/sessions/{session_id}/events")
    def get_events(session_id: str):
        return {"events": get_session(session_id).events}

    @app.post("/sessions/{session_id}/demonstrate")
    def demonstrate(session_id: str, body: dict):
        live = get_session(session_id)
        with live.lock:
            action, entered = _parse_event_action(live, body)
            _apply_action(live, action, entered)
            _after_step(live, accepted=False)
            live.events.append({"type": "demonstrate", "action": action_to_json(action)})
            return _state_json(live)

    @app.post("/sessions/{session_id}/accept")
    def accept(session_id: str, body: dict | None = None):
        live = get_session(session_id)
        with live.lock:
            pid = (body or {}).get("prediction_id", 0)
            if not isinstance(pid, int) or not (0 <= pid < len(live.predictions)):
                raise HTTPException(404, f"no prediction {pid!r}")
            pred = live.predictions[pid]
            program = live.program_by_key(pred.program_key)
            entered = None
            if pred.action.kind == "EnterData":
                entered = str(get_value(live.data, pred.action.value_path))
            _apply_action(live, pred.action, entered)
            if program is not None and not satisfies(program, live.actions, live.doms,
                                                     live.data):
                raise HTTPException(500, "accepted prediction no longer reproduced "
                                         "by its program")
            _after_step(live, accepted=True)
            live.events.append({"type": "accept", "prediction_id": pid})
            return _state_json(live)

    @app.post("/sessions/{session_id}/reject")
    def reject(session_id: str):
        live = get_session(session_id)
        with live.lock:
            live.predictions = []
            live.agree_streak = 0
            live.phase = PHASE_DEMO
            live.events.append({"type": "reject"})
            return _state_json(live)

    @app.post("/sessions/{session_id}/auto")
    def auto(session_id: str, body: dict | None = None):
        live = get_session(session_id)
        with live.lock:
            limit = (body or {}).get("step_limit", 200)
            if not isinstance(limit, int) or limit < 1:
                raise HTTPException(400, "step_limit must be a positive integer")
            outcome = _run_auto(live, limit)
            live.events.append({"type": "auto", "step_limit": limit})
            out = _state_json(live)
            out.update(outcome)
            return out

    if ui_dir:
        import os

        from fastapi.staticfiles import StaticFiles

        if os.path.isdir(ui_dir):
            app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    app.state.sessions = sessions
    app.state.fixtures = fixtures
    return app


def replay_events(app: FastAPI, events: list[dict]) -> dict:
    """Re-run a session's event log against a fresh session; returns the
    final state payload. Event application is deterministic, so this must
    reproduce the original session's externally visible state."""
    from fastapi.testclient import TestClient

    client = TestClient(app)
    session_id = None
    state = None
    for event in events:
        if event["type"] == "create":
            state = client.post("/sessions", json={"fixture": event["fixture"]}).json()
            session_id = state["session_id"]
        elif event["type"] == "demonstrate":
            state = client.post(f"/sessions/{session_id}/demonstrate",
                                json=event["action"]).json()
        elif event["type"] == "accept":
            state = client.post(f"/sessions/{session_id}/accept",
                                json={"prediction_id": event["prediction_id"]}).json()
        elif event["type"] == "reject":
            state = client.post(f"/sessions/{session_id}/reject").json()
        elif event["type"] == "auto":
            state = client.post(f"/sessions/{session_id}/auto",
                                json={"step_limit": event["step_limit"]}).json()
    return state
