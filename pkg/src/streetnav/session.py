"""Mutable navigation session: heading, position, history, event log.

The session is the only stateful piece of the engine. Every mutation
comes through one of the verb methods below, each of which appends a
replayable event, so a finished log deterministically reconstructs the
final state (see replay_log).
"""

from __future__ import annotations

import json
import time
import warnings
from dataclasses import dataclass

from .config import NavConfig
from .errors import NoImageryError, NoMoveError, NotFoundError
from .geo import (
    haversine_distance,
    initial_bearing,
    normalize_heading,
    snap_to_octant,
)
from . import navgraph
from .navgraph import IntersectionHit, build_egocentric_graph
from .world import Panorama, Place

LOG_SCHEMA_VERSION = 1

LEFT, RIGHT = "Left", "Right"
FORWARD, BACKWARD = "Forward", "Backward"


@dataclass(frozen=True)
class PanOutcome:
    direction: str
    old_heading: float
    new_heading: float


@dataclass(frozen=True)
class MoveOutcome:
    kind: str  # "step_forward" | "step_backward" | "jump" | "go_back"
    from_pano: Panorama
    to_pano: Panorama
    heading: float
    distance: float
    jump_kind: str | None = None
    intersection: IntersectionHit | None = None


@dataclass(frozen=True)
class NoMove:
    """A movement attempt with nowhere to go; carries what is possible."""

    kind: str  # "forward" | "backward" | "jump"
    heading: float
    movements: tuple[float, ...]


@dataclass(frozen=True)
class NothingToUndo:
    pass


@dataclass(frozen=True)
class TeleportOutcome:
    query: str
    place: Place
    from_pano: Panorama
    to_pano: Panorama
    origin_place: Place | None
    distance: float
    old_heading: float
    new_heading: float


@dataclass(frozen=True)
class VisitInfo:
    pano_id: str
    count: int
    last_visit_ms: int  # 0 means "here since session start"


@dataclass(frozen=True)
class SessionEvent:
    ts: int  # ms since epoch, monotone within a session
    kind: str  # Pan | Step | Jump | Teleport | GoBack | Describe | ChatTurn | Hotkey
    payload: dict

    def to_record(self) -> dict:
        return {"v": LOG_SCHEMA_VERSION, "ts": self.ts, "kind": self.kind,
                "payload": self.payload}


class EventLog:
    """Append-only event store with batched persistence.

    Events live in memory for the session's lifetime; every tenth
    append (configurable) the pending batch is written to the sink.
    Sink failures degrade to warnings so navigation never blocks on
    storage.
    """

    def __init__(self, sink=None, batch_size: int = 10):
        self.events: list[SessionEvent] = []
        self.sink = sink
        self.batch_size = batch_size
        self._pending: list[SessionEvent] = []
        self._closed = False

    def append(self, event: SessionEvent) -> None:
        self.events.append(event)
        self._pending.append(event)
        if len(self._pending) >= self.batch_size:
            self.flush()

    def flush(self) -> None:
        if not self._pending or self.sink is None:
            self._pending.clear()
            return
        chunk = "".join(json.dumps(e.to_record()) + "\n" for e in self._pending)
        try:
            self.sink.write(chunk)
            if hasattr(self.sink, "flush"):
                self.sink.flush()
        except OSError as e:
            warnings.warn(f"event log write failed: {e}", RuntimeWarning, stacklevel=2)
        self._pending.clear()

    def close(self) -> None:
        if self._closed:
            return
        self.flush()
        self._closed = True

    def export(self) -> str:
        """All events as newline-delimited records, flushed or not."""
        return "".join(json.dumps(e.to_record()) + "\n" for e in self.events)


class Session:
    """One user's navigation state over a world."""

    def __init__(self, providers, cfg: NavConfig | None = None,
                 start_pano_id: str | None = None, heading: float = 0.0,
                 log: EventLog | None = None, clock=time.time):
        self.providers = providers
        self.cfg = cfg or NavConfig()
        self.log = log or EventLog()
        self.clock = clock
        self._force_ts: int | None = None
        self._last_ts = 0
        if start_pano_id is None:
            start_pano_id = self._default_start()
        self.current_pano: Panorama = providers.get_pano(start_pano_id)
        self.heading: float = snap_to_octant(heading)
        self.visit_counts: dict[str, int] = {}
        self.visit_last_ms: dict[str, int] = {}
        self.undo_stack: list[tuple[str, float]] = []
        self.selected_place: Place | None = None
        # The starting arrival predates the log; its stamp is 0 so that
        # replaying the log lands on identical visit bookkeeping.
        self._arrive(self.current_pano.id, stamp=0)

    def _default_start(self) -> str:
        world = getattr(self.providers, "inner", self.providers)
        return world.panos[0].id

    # -- internals -------------------------------------------------------

    def _stamp(self) -> int:
        ts = self._force_ts if self._force_ts is not None else int(round(self.clock() * 1000))
        ts = max(ts, self._last_ts)
        self._last_ts = ts
        return ts

    def _emit(self, kind: str, payload: dict, ts: int | None = None) -> SessionEvent:
        ev = SessionEvent(ts=self._stamp() if ts is None else ts,
                          kind=kind, payload=payload)
        self.log.append(ev)
        return ev

    def _arrive(self, pano_id: str, stamp: int) -> None:
        self.visit_counts[pano_id] = self.visit_counts.get(pano_id, 0) + 1
        self.visit_last_ms[pano_id] = stamp

    def _move_to(self, pano: Panorama, stamp: int, heading: float | None = None) -> None:
        self.undo_stack.append((self.current_pano.id, self.heading))
        while len(self.undo_stack) > self.cfg.undo_depth:
            self.undo_stack.pop(0)
        self.current_pano = pano
        if heading is not None:
            self.heading = heading
        self._arrive(pano.id, stamp=stamp)

    def _graph(self) -> navgraph.EgocentricGraph:
        return build_egocentric_graph(self.providers, self.current_pano, self.cfg)

    # -- verbs -----------------------------------------------------------

    def pan(self, direction: str) -> PanOutcome:
        if direction not in (LEFT, RIGHT):
            raise ValueError(f"pan direction must be Left or Right, got {direction!r}")
        old = self.heading
        delta = self.cfg.pan_increment if direction == RIGHT else -self.cfg.pan_increment
        self.heading = normalize_heading(old + delta)
        self._emit("Pan", {"direction": direction, "heading": self.heading})
        return PanOutcome(direction=direction, old_heading=old, new_heading=self.heading)

    def step(self, direction: str) -> MoveOutcome | NoMove:
        if direction not in (FORWARD, BACKWARD):
            raise ValueError(f"step direction must be Forward or Backward, got {direction!r}")
        g = self._graph()
        if direction == FORWARD:
            target = navgraph.next_pano(g, self.heading, self.cfg)
        else:
            target = navgraph.prev_pano(g, self.heading, self.cfg)
        if target is None:
            moves = tuple(navgraph.available_movements(g, self.cfg))
            self._emit("Step", {"direction": direction, "moved": False,
                                "pano": self.current_pano.id, "heading": self.heading})
            kind = "forward" if direction == FORWARD else "backward"
            return NoMove(kind=kind, heading=self.heading, movements=moves)
        origin = self.current_pano
        ts = self._stamp()
        self._move_to(target, stamp=ts)
        self._emit("Step", {"direction": direction, "moved": True,
                            "pano": target.id, "heading": self.heading}, ts=ts)
        return MoveOutcome(
            kind="step_forward" if direction == FORWARD else "step_backward",
            from_pano=origin, to_pano=target, heading=self.heading,
            distance=haversine_distance(origin.location, target.location))

    def jump(self) -> MoveOutcome | NoMove:
        origin = self.current_pano
        try:
            target = navgraph.jump_target(self.providers, origin, self.heading, self.cfg)
        except NoMoveError:
            g = self._graph()
            moves = tuple(navgraph.available_movements(g, self.cfg))
            self._emit("Jump", {"moved": False, "pano": origin.id,
                                "heading": self.heading})
            return NoMove(kind="jump", heading=self.heading, movements=moves)
        ts = self._stamp()
        self._move_to(target.pano, stamp=ts)
        self._emit("Jump", {"moved": True, "pano": target.pano.id,
                            "heading": self.heading, "kind": target.kind}, ts=ts)
        return MoveOutcome(
            kind="jump", from_pano=origin, to_pano=target.pano, heading=self.heading,
            distance=haversine_distance(origin.location, target.pano.location),
            jump_kind=target.kind, intersection=target.intersection)

    def teleport(self, query: str) -> TeleportOutcome:
        origin = self.current_pano
        origin_place = self.selected_place
        results = self.providers.search_text(query)
        if not results:
            self._emit("Teleport", {"query": query, "ok": False, "reason": "not_found"})
            raise NotFoundError(f"no places match {query!r}")
        place = results[0]
        pano = self.providers.nearest_pano(place.location)
        gap = haversine_distance(pano.location, place.location)
        if gap > 1000.0:
            self._emit("Teleport", {"query": query, "ok": False, "reason": "no_imagery",
                                    "place": place.id})
            raise NoImageryError(
                f"no imagery within 1 km of {place.display_name} "
                f"(closest pano is {gap:.0f} m away)")
        old_heading = self.heading
        if pano.location == place.location:
            new_heading = self.heading
        else:
            new_heading = snap_to_octant(initial_bearing(pano.location, place.location))
        ts = self._stamp()
        self._move_to(pano, stamp=ts, heading=new_heading)
        self.selected_place = place
        self._emit("Teleport", {"query": query, "ok": True, "pano": pano.id,
                                "heading": new_heading, "place": place.id}, ts=ts)
        return TeleportOutcome(
            query=query, place=place, from_pano=origin, to_pano=pano,
            origin_place=origin_place,
            distance=haversine_distance(origin.location, pano.location),
            old_heading=old_heading, new_heading=new_heading)

    def go_back(self) -> MoveOutcome | NothingToUndo:
        if not self.undo_stack:
            self._emit("GoBack", {"moved": False})
            return NothingToUndo()
        pano_id, heading = self.undo_stack.pop()
        origin = self.current_pano
        pano = self.providers.get_pano(pano_id)
        ts = self._stamp()
        # _move_to pushes the pre-undo position, so repeated go_back
        # toggles between the last two positions instead of dead-ending.
        self._move_to(pano, stamp=ts, heading=heading)
        self._emit("GoBack", {"moved": True, "pano": pano.id, "heading": heading}, ts=ts)
        return MoveOutcome(
            kind="go_back", from_pano=origin, to_pano=pano, heading=heading,
            distance=haversine_distance(origin.location, pano.location))

    # -- queries and bookkeeping ----------------------------------------

    def visit_info(self) -> VisitInfo:
        pid = self.current_pano.id
        return VisitInfo(pano_id=pid, count=self.visit_counts.get(pid, 0),
                         last_visit_ms=self.visit_last_ms.get(pid, 0))

    def graph(self) -> navgraph.EgocentricGraph:
        return self._graph()

    def movements(self) -> list[float]:
        return navgraph.available_movements(self._graph(), self.cfg)

    def append_event(self, kind: str, payload: dict) -> SessionEvent:
        """Records a non-movement event (Describe, ChatTurn, Hotkey)."""
        return self._emit(kind, payload)

    def export_log(self) -> str:
        return self.log.export()

    def close(self) -> None:
        self.log.close()

    def snapshot(self) -> dict:
        """JSON-safe view of the current state."""
        return {
            "pano_id": self.current_pano.id,
            "heading": self.heading,
            "lat": self.current_pano.location.lat,
            "lng": self.current_pano.location.lng,
            "address": self.current_pano.address.oneline(),
            "selected_place": self.selected_place.id if self.selected_place else None,
            "visit_count": self.visit_counts.get(self.current_pano.id, 0),
        }


def replay_log(providers, cfg: NavConfig, records: list[dict],
               start_pano_id: str | None = None, start_heading: float = 0.0) -> Session:
    """Re-executes a recorded event stream against the same world.

    Movement events are re-dispatched under their logged timestamps;
    other kinds are appended verbatim. The resulting session state
    matches the one that produced the log.
    """
    session = Session(providers, cfg, start_pano_id=start_pano_id,
                      heading=start_heading, clock=lambda: 0.0)
    for rec in records:
        kind, payload = rec["kind"], rec["payload"]
        session._force_ts = rec["ts"]
        try:
            if kind == "Pan":
                session.pan(payload["direction"])
            elif kind == "Step":
                session.step(payload["direction"])
            elif kind == "Jump":
                session.jump()
            elif kind == "Teleport":
                try:
                    session.teleport(payload["query"])
                except (NotFoundError, NoImageryError):
                    if payload.get("ok", False):
                        raise
            elif kind == "GoBack":
                session.go_back()
            else:
                session.append_event(kind, payload)
        finally:
            session._force_ts = None
    return session


def parse_log(text: str) -> list[dict]:
    """Parses newline-delimited event records as written by EventLog."""
    records = []
    for line in text.splitlines():
        if not line.strip():
            continue
        rec = json.loads(line)
        if rec.get("v") != LOG_SCHEMA_VERSION:
            raise ValueError(f"unsupported log record version {rec.get('v')!r}")
        records.append(rec)
    return records
