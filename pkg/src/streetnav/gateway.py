"""Service layer: sessions, the closed action set, and the event stream.

The Gateway class is the transport-free core. It owns per-session
runtimes, executes exactly one session or orchestrator operation per
action, and publishes everything a client needs into an ordered,
resumable stream of sequence-numbered records. create_app() wraps the
same core in HTTP endpoints; the terminal client drives it directly.
Response text is always verbatim announcer output.
"""
from __future__ import annotations

import itertools
import threading
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

from . import announcer, navgraph, orchestrator
from .announcer import CHAT, STATUS, StatusMessage, build_local_context
from .catalog import CATALOG
from .config import NavConfig
from .errors import (
    NoImageryError,
    NotFoundError,
    ProviderError,
    SchemaError,
    StreetNavError,
)
from .mockai import MockModelProvider
from .prompts import PromptMode, UserProfile
from .session import (
    BACKWARD,
    FORWARD,
    LEFT,
    RIGHT,
    EventLog,
    MoveOutcome,
    NoMove,
    NothingToUndo,
    Session,
    parse_log,
)
from .world import World, load_fixture_path

PAYLOAD_VERSION = 1

INFO_KINDS = ("where", "nearby", "intersections", "movements", "visits", "photo")

ACTION_NAMES = (
    "pan", "step", "jump", "back", "teleport", "describe",
    "chat_open", "chat_turn", "chat_close", "info", "repeat", "stop_speech",
)

# Keyboard surface of the navigator. Every hotkey resolves to exactly
# one action request; the UI and the terminal client both bind from
# this table, and the exhaustiveness test walks it.
HOTKEY_BINDINGS: tuple[tuple[str, dict, str], ...] = (
    ("ArrowLeft", {"action": "pan", "direction": LEFT},
     "Rotate 45 degrees to the left"),
    ("ArrowRight", {"action": "pan", "direction": RIGHT},
     "Rotate 45 degrees to the right"),
    ("ArrowUp", {"action": "step", "direction": FORWARD},
     "Move forward along the current heading"),
    ("ArrowDown", {"action": "step", "direction": BACKWARD},
     "Move backward, opposite the current heading"),
    ("Alt+B", {"action": "back"}, "Go back to the previous location"),
    ("Alt+J", {"action": "jump"}, "Jump ahead to the next intersection"),
    ("Alt+D", {"action": "describe"}, "Describe the current view"),
    ("Alt+C", {"action": "chat_open", "mode": "typed"},
     "Chat with the assistant by typing"),
    ("Alt+Space", {"action": "chat_open", "mode": "voice"},
     "Chat with the assistant by voice"),
    ("Alt+A", {"action": "repeat"}, "Repeat the previous output"),
    ("Escape", {"action": "stop_speech"}, "Stop the current speech output"),
    ("Alt+W", {"action": "info", "kind": "where"},
     "Hear the current address and heading"),
    ("Alt+N", {"action": "info", "kind": "nearby"}, "List nearby places"),
    ("Alt+I", {"action": "info", "kind": "intersections"},
     "Hear the current and next intersections"),
    ("Alt+M", {"action": "info", "kind": "movements"},
     "Hear the possible movements at the current location"),
    ("Alt+V", {"action": "info", "kind": "visits"},
     "Hear how often this location was visited"),
    ("Alt+P", {"action": "info", "kind": "photo"},
     "Hear when and by whom the image was captured"),
)


class GatewayError(StreetNavError):
    """An invalid request; status carries the HTTP-class code."""

    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status


@dataclass(frozen=True)
class ActionResponse:
    messages: tuple[StatusMessage, ...]
    state: dict
    ok: bool = True
    error: str | None = None
    extra: dict = field(default_factory=dict)

    def to_doc(self) -> dict:
        return {
            "v": PAYLOAD_VERSION,
            "ok": self.ok,
            "error": self.error,
            "messages": [
                {"text": m.text, "channel": m.voice_channel} for m in self.messages
            ],
            "state": self.state,
            **self.extra,
        }


class SessionRuntime:
    """One live session plus its stream, chat state, and lock."""

    def __init__(self, session_id: str, world: World, session: Session,
                 provider_factory: Callable[[], object]):
        self.id = session_id
        self.world = world
        self.session = session
        self.provider_factory = provider_factory
        self.lock = threading.RLock()
        self.stream: list[dict] = []
        self.chat: orchestrator.ChatSession | None = None
        self.last_messages: tuple[StatusMessage, ...] = ()
        self._seq = itertools.count(1)
        self._streamed_events = 0
        self.profile: UserProfile | None = None
        self._publish_new_events()

    # -- stream ----------------------------------------------------------

    def _push(self, record: dict) -> None:
        record["seq"] = next(self._seq)
        self.stream.append(record)

    def _publish_new_events(self) -> None:
        records = parse_log(self.session.export_log())
        for record in records[self._streamed_events:]:
            self._push({"type": "event", "event": record})
        self._streamed_events = len(records)

    def _publish_messages(self, messages) -> None:
        for message in messages:
            self._push({"type": "message", "text": message.text,
                        "channel": message.voice_channel})

    def events_from(self, start_seq: int) -> list[dict]:
        return [r for r in self.stream if r["seq"] >= start_seq]

    # -- helpers ---------------------------------------------------------

    def ctx(self):
        return build_local_context(
            self.session.providers, self.session.current_pano,
            self.session.heading, self.session.cfg,
            visit_count=self.session.visit_info().count)

    def graph(self):
        return self.session.graph()

    def state_doc(self) -> dict:
        doc = self.session.snapshot()
        doc["chat_open"] = self.chat is not None and self.chat.enabled and not self.chat.closed
        return doc

    def sync_chat_view(self) -> None:
        if self.chat is not None and self.chat.enabled and not self.chat.closed:
            orchestrator.chat_on_view_change(
                self.chat,
                orchestrator.capture_for_session(self.session),
                orchestrator.context_for_session(self.session))


class Gateway:
    """Transport-independent action dispatcher shared by all clients."""

    def __init__(self, default_world: World | None = None,
                 fixture_registry: dict[str, Callable[[], World]] | None = None,
                 provider_factory: Callable[[World, NavConfig], object] | None = None,
                 cfg: NavConfig | None = None,
                 log_dir: str | Path | None = None,
                 clock=time.time):
        from .fixtures import BUILTIN_FIXTURES
        self.default_world = default_world
        self.fixtures = dict(fixture_registry or BUILTIN_FIXTURES)
        self.cfg = cfg or NavConfig()
        self.log_dir = Path(log_dir) if log_dir else None
        self.clock = clock
        self._ids = itertools.count(1)
        self.runtimes: dict[str, SessionRuntime] = {}
        if provider_factory is None:
            provider_factory = lambda world, cfg: MockModelProvider(world, cfg)
        self.provider_factory = provider_factory

    # -- session lifecycle ----------------------------------------------

    def _resolve_world(self, fixture: str | None) -> World:
        if fixture is None:
            if self.default_world is None:
                raise GatewayError(400, "no fixture given and no default world loaded")
            return self.default_world
        if fixture in self.fixtures:
            return self.fixtures[fixture]()
        path = Path(fixture)
        if path.exists():
            return load_fixture_path(path)
        raise GatewayError(400, f"unknown fixture {fixture!r}")

    def create_session(self, body: dict | None = None) -> SessionRuntime:
        body = body or {}
        if not isinstance(body, dict):
            raise GatewayError(400, "request body must be a JSON object")
        overrides = body.get("config") or {}
        try:
            cfg = NavConfig.from_overrides({**asdict(self.cfg), **overrides}) \
                if overrides else self.cfg
        except (ValueError, TypeError) as exc:
            raise GatewayError(400, f"invalid config overrides: {exc}")
        world = self._resolve_world(body.get("fixture"))
        session_id = f"s{next(self._ids)}"
        sink = None
        if self.log_dir is not None:
            self.log_dir.mkdir(parents=True, exist_ok=True)
            sink = (self.log_dir / f"{session_id}.ndjson").open("a")
        log = EventLog(sink=sink)
        try:
            session = Session(world, cfg,
                              start_pano_id=body.get("start_pano"),
                              heading=float(body.get("heading", 0.0)),
                              log=log, clock=self.clock)
        except NotFoundError as exc:
            raise GatewayError(400, str(exc))
        runtime = SessionRuntime(
            session_id, world, session,
            provider_factory=lambda: self.provider_factory(world, cfg))
        if body.get("profile"):
            runtime.profile = UserProfile(str(body["profile"]))
        self.runtimes[session_id] = runtime
        return runtime

    def runtime(self, session_id: str) -> SessionRuntime:
        try:
            return self.runtimes[session_id]
        except KeyError:
            raise GatewayError(404, f"unknown session {session_id!r}")

    def close_session(self, session_id: str) -> None:
        runtime = self.runtime(session_id)
        with runtime.lock:
            if runtime.chat is not None:
                orchestrator.chat_close(runtime.chat)
            runtime.session.close()
            del self.runtimes[session_id]

    # -- actions ---------------------------------------------------------

    def handle_action(self, session_id: str, body: dict) -> ActionResponse:
        runtime = self.runtime(session_id)
        if not isinstance(body, dict):
            raise GatewayError(400, "request body must be a JSON object")
        action = body.get("action")
        if action not in ACTION_NAMES:
            raise GatewayError(400, f"unknown action {action!r}")
        with runtime.lock:
            handler = getattr(self, f"_do_{action}")
            response = handler(runtime, body)
            runtime._publish_new_events()
            runtime._publish_messages(response.messages)
            if action not in ("repeat", "stop_speech") and response.messages:
                runtime.last_messages = response.messages
            return response

    def _respond(self, runtime: SessionRuntime, messages,
                 ok: bool = True, error: str | None = None,
                 **extra) -> ActionResponse:
        return ActionResponse(messages=tuple(messages), state=runtime.state_doc(),
                              ok=ok, error=error, extra=extra)

    # Each handler executes one session or orchestrator operation and
    # converts its outcome into announcer messages, verbatim.

    def _do_pan(self, runtime: SessionRuntime, body: dict) -> ActionResponse:
        direction = body.get("direction")
        if direction not in (LEFT, RIGHT):
            raise GatewayError(400, f"pan direction must be Left or Right, got {direction!r}")
        session = runtime.session
        outcome = session.pan(direction)
        runtime.sync_chat_view()
        message = announcer.pan_announcement(
            outcome.old_heading, outcome.new_heading, runtime.graph(),
            runtime.ctx(), session.cfg)
        return self._respond(runtime, [message])

    def _move_messages(self, runtime: SessionRuntime, prev_ctx, outcome):
        session = runtime.session
        if isinstance(outcome, NoMove):
            return [announcer.no_move_announcement(outcome, session.cfg)], False
        if isinstance(outcome, NothingToUndo):
            return [StatusMessage(text=CATALOG["nothing_to_undo"],
                                  voice_channel=STATUS,
                                  fragments=(CATALOG["nothing_to_undo"],))], False
        runtime.sync_chat_view()
        message = announcer.movement_announcement(
            prev_ctx, runtime.ctx(), outcome, session.cfg)
        return [message], True

    def _do_step(self, runtime: SessionRuntime, body: dict) -> ActionResponse:
        direction = body.get("direction")
        if direction not in (FORWARD, BACKWARD):
            raise GatewayError(400, f"step direction must be Forward or Backward, got {direction!r}")
        prev_ctx = runtime.ctx()
        outcome = runtime.session.step(direction)
        messages, moved = self._move_messages(runtime, prev_ctx, outcome)
        return self._respond(runtime, messages, moved=moved)

    def _do_jump(self, runtime: SessionRuntime, body: dict) -> ActionResponse:
        prev_ctx = runtime.ctx()
        outcome = runtime.session.jump()
        messages, moved = self._move_messages(runtime, prev_ctx, outcome)
        return self._respond(runtime, messages, moved=moved)

    def _do_back(self, runtime: SessionRuntime, body: dict) -> ActionResponse:
        prev_ctx = runtime.ctx()
        outcome = runtime.session.go_back()
        messages, moved = self._move_messages(runtime, prev_ctx, outcome)
        return self._respond(runtime, messages, moved=moved)

    def _do_teleport(self, runtime: SessionRuntime, body: dict) -> ActionResponse:
        query = body.get("query")
        if not isinstance(query, str) or not query.strip():
            raise GatewayError(400, "teleport requires a non-empty query string")
        session = runtime.session
        try:
            outcome = session.teleport(query)
        except NotFoundError:
            text = CATALOG["teleport_not_found"].format(query=query)
            message = StatusMessage(text=text, voice_channel=STATUS, fragments=(text,))
            return self._respond(runtime, [message], moved=False)
        except NoImageryError:
            place = session.providers.search_text(query)[0]
            text = CATALOG["teleport_no_imagery"].format(name=place.display_name)
            message = StatusMessage(text=text, voice_channel=STATUS, fragments=(text,))
            return self._respond(runtime, [message], moved=False)
        runtime.sync_chat_view()
        message = announcer.teleport_announcement(
            outcome, runtime.ctx(),
            navgraph.available_movements(runtime.graph(), session.cfg),
            session.cfg)
        return self._respond(runtime, [message], moved=True)

    def _do_describe(self, runtime: SessionRuntime, body: dict) -> ActionResponse:
        mode_name = body.get("mode", PromptMode.DEFAULT.value)
        try:
            mode = PromptMode(mode_name)
        except ValueError:
            raise GatewayError(400, f"unknown describe mode {mode_name!r}")
        structured = bool(body.get("structured", False))
        session = runtime.session
        view = orchestrator.capture_for_session(session)
        ctx = orchestrator.context_for_session(session)
        try:
            result = orchestrator.describe(view, ctx, runtime.profile, mode,
                                           structured, runtime.provider_factory())
        except (ProviderError, SchemaError) as exc:
            session.append_event("Describe", {
                "mode": mode.value, "structured": structured, "ok": False})
            text = CATALOG["describe_failed"]
            message = StatusMessage(text=text, voice_channel=STATUS, fragments=(text,))
            return self._respond(runtime, [message], ok=False, error=str(exc))
        payload = {"mode": mode.value, "structured": structured, "ok": True,
                   "description": result.description}
        extra: dict = {"describe": {"description": result.description}}
        if result.structured is not None:
            structured_doc = {
                "mobility_features": list(result.structured.mobility_features),
                "obstacles": list(result.structured.obstacles),
                "safety_summary": result.structured.safety_summary,
                "followups": list(result.structured.followups),
            }
            payload["followups"] = structured_doc["followups"]
            extra["describe"]["structured"] = structured_doc
        session.append_event("Describe", payload)
        message = StatusMessage(text=result.description, voice_channel=CHAT,
                                fragments=(result.description,))
        return self._respond(runtime, [message], **extra)

    def _do_chat_open(self, runtime: SessionRuntime, body: dict) -> ActionResponse:
        mode = body.get("mode", "typed")
        if mode not in ("typed", "voice"):
            raise GatewayError(400, f"chat mode must be typed or voice, got {mode!r}")
        already = runtime.chat is not None and not runtime.chat.closed
        if not already:
            runtime.chat = orchestrator.chat_open(
                runtime.session, runtime.provider_factory(),
                profile=runtime.profile)
            runtime.session.append_event("Hotkey", {
                "action": "chat_open", "mode": mode,
                "enabled": runtime.chat.enabled})
            runtime.sync_chat_view()
        if runtime.chat.enabled:
            text = CATALOG["chat_ready"]
        else:
            text = CATALOG["chat_unavailable"]
        message = StatusMessage(text=text, voice_channel=STATUS, fragments=(text,))
        return self._respond(runtime, [message], chat_enabled=runtime.chat.enabled)

    def _do_chat_turn(self, runtime: SessionRuntime, body: dict) -> ActionResponse:
        text = body.get("input")
        if not isinstance(text, str) or not text.strip():
            raise GatewayError(400, "chat_turn requires a non-empty input string")
        if runtime.chat is None or runtime.chat.closed:
            message = StatusMessage(text=CATALOG["chat_unavailable"],
                                    voice_channel=CHAT,
                                    fragments=(CATALOG["chat_unavailable"],))
            return self._respond(runtime, [message], ok=False, error="chat is not open")
        session = runtime.session
        result = orchestrator.chat_turn(runtime.chat, text)
        messages = [StatusMessage(text=result.reply, voice_channel=CHAT,
                                  fragments=(result.reply,))]
        for command in result.commands:
            prev_ctx = runtime.ctx()
            for outcome in orchestrator.dispatch_command(command, session):
                if isinstance(outcome, (MoveOutcome, NoMove, NothingToUndo)):
                    more, _ = self._move_messages(runtime, prev_ctx, outcome)
                    messages.extend(more)
                else:
                    runtime.sync_chat_view()
                    messages.append(announcer.pan_announcement(
                        outcome.old_heading, outcome.new_heading,
                        runtime.graph(), runtime.ctx(), session.cfg))
        return self._respond(
            runtime, messages,
            chat={"reply": result.reply,
                  "commands": [c.value for c in result.commands],
                  "ok": result.ok})

    def _do_chat_close(self, runtime: SessionRuntime, body: dict) -> ActionResponse:
        if runtime.chat is not None and not runtime.chat.closed:
            orchestrator.chat_close(runtime.chat)
            runtime.session.append_event("Hotkey", {"action": "chat_close"})
        text = CATALOG["chat_closed"]
        message = StatusMessage(text=text, voice_channel=STATUS, fragments=(text,))
        return self._respond(runtime, [message])

    def _do_info(self, runtime: SessionRuntime, body: dict) -> ActionResponse:
        kind = body.get("kind")
        if kind not in INFO_KINDS:
            raise GatewayError(400, f"unknown info kind {kind!r}")
        session = runtime.session
        ctx = runtime.ctx()
        if kind == "where":
            message = announcer.where_announcement(ctx)
        elif kind == "nearby":
            message = announcer.nearby_places_announcement(ctx, session.cfg)
        elif kind == "intersections":
            message = announcer.intersection_announcement(
                ctx, session.providers, session.cfg)
        elif kind == "movements":
            message = announcer.available_movements_announcement(
                runtime.graph(), None, session.heading, session.cfg)
        elif kind == "visits":
            message = announcer.visits_announcement(session.visit_info())
        else:
            message = announcer.pano_metadata_announcement(session.current_pano)
        session.append_event("Hotkey", {"action": "info", "kind": kind})
        return self._respond(runtime, [message])

    def _do_repeat(self, runtime: SessionRuntime, body: dict) -> ActionResponse:
        runtime.session.append_event("Hotkey", {"action": "repeat"})
        return self._respond(runtime, runtime.last_messages)

    def _do_stop_speech(self, runtime: SessionRuntime, body: dict) -> ActionResponse:
        runtime.session.append_event("Hotkey", {"action": "stop_speech"})
        runtime._push({"type": "control", "control": "stop_speech"})
        return self._respond(runtime, [])

    # -- stream + state ---------------------------------------------------

    def events(self, session_id: str, from_seq: int = 1) -> dict:
        runtime = self.runtime(session_id)
        with runtime.lock:
            records = runtime.events_from(from_seq)
            next_seq = runtime.stream[-1]["seq"] + 1 if runtime.stream else 1
        return {"v": PAYLOAD_VERSION, "records": records, "next": next_seq}

    def state(self, session_id: str) -> dict:
        runtime = self.runtime(session_id)
        with runtime.lock:
            return {"v": PAYLOAD_VERSION, "state": runtime.state_doc()}

    def meta_actions(self) -> dict:
        return {
            "v": PAYLOAD_VERSION,
            "actions": list(ACTION_NAMES),
            "info_kinds": list(INFO_KINDS),
            "hotkeys": [
                {"key": key, "request": dict(request), "behavior": behavior}
                for key, request, behavior in HOTKEY_BINDINGS
            ],
        }


def create_app(gateway: Gateway):
    """HTTP wrapper over a Gateway; payloads are versioned JSON."""
    from fastapi import Body, FastAPI, Query
    from fastapi.responses import JSONResponse

    app = FastAPI(title="streetnav gateway", docs_url=None, redoc_url=None)
    app.state.gateway = gateway

    def fail(exc: GatewayError) -> JSONResponse:
        return JSONResponse(status_code=exc.status,
                            content={"v": PAYLOAD_VERSION, "error": str(exc)})

    @app.post("/sessions")
    def create_session(body: dict | None = Body(default=None)):
        try:
            runtime = gateway.create_session(body)
        except GatewayError as exc:
            return fail(exc)
        return {"v": PAYLOAD_VERSION, "session_id": runtime.id,
                "state": runtime.state_doc()}

    @app.post("/sessions/{session_id}/actions")
    def post_action(session_id: str, body: dict = Body(...)):
        try:
            response = gateway.handle_action(session_id, body)
        except GatewayError as exc:
            return fail(exc)
        return response.to_doc()

    @app.get("/sessions/{session_id}/events")
    def get_events(session_id: str,
                   from_: int | None = Query(default=None, alias="from"),
                   from_seq: int | None = Query(default=None)):
        start = from_ if from_ is not None else (from_seq if from_seq is not None else 1)
        try:
            return gateway.events(session_id, start)
        except GatewayError as exc:
            return fail(exc)

    @app.get("/sessions/{session_id}/state")
    def get_state(session_id: str):
        try:
            return gateway.state(session_id)
        except GatewayError as exc:
            return fail(exc)

    @app.delete("/sessions/{session_id}")
    def delete_session(session_id: str):
        try:
            gateway.close_session(session_id)
        except GatewayError as exc:
            return fail(exc)
        return {"v": PAYLOAD_VERSION, "closed": session_id}

    @app.get("/meta/actions")
    def meta_actions():
        return gateway.meta_actions()

    return app
