"""Context-aware orchestration of the scene describer and chat agent.

This module owns everything between the navigation session and a
multimodal model provider: assembling geographic context, issuing
describe requests with schema validation, keeping a budgeted chat
context window, and translating model function calls back into
navigation effects. Providers are pluggable; the deterministic mock
lives in mockai and any live adapter implements the same protocol.
"""
from __future__ import annotations

import enum
import json
import logging
from dataclasses import dataclass, field
from typing import Iterable, Protocol, Sequence, runtime_checkable

from .catalog import CATALOG
from .config import NavConfig
from .errors import ProviderError, SchemaError
from .geo import compass_name, initial_bearing, relative_heading, relative_position
from .prompts import (
    DESCRIBE_REQUEST,
    FUNCTION_DECLARATIONS,
    STRUCTURED_REQUEST,
    STRUCTURED_RETRY_REQUEST,
    FunctionDeclaration,
    GeoContext,
    NearbyPlaceContext,
    PromptMode,
    UserProfile,
    render_chat_prompt,
    render_describer_prompt,
    render_geo_context,
)
from .session import BACKWARD, FORWARD, LEFT, RIGHT, Session
from .world import Panorama, Place, ViewCapture

log = logging.getLogger(__name__)

# A 640x640 view costs a fixed number of estimated tokens; text costs
# one token per four characters, rounded up.
VIEW_TOKEN_COST = 258
CHAT_CONTEXT_MIN_VIEWS = 8


def estimate_text_tokens(text: str) -> int:
    return (len(text) + 3) // 4


# -- provider interface --------------------------------------------------

@dataclass(frozen=True)
class ViewPart:
    """An image handed to the model."""

    capture: ViewCapture


@dataclass(frozen=True)
class TextPart:
    """A text block handed to the model."""

    text: str


@dataclass(frozen=True)
class FunctionCall:
    """One function invocation declared in a model reply."""

    name: str
    args: tuple[tuple[str, object], ...] = ()


@dataclass(frozen=True)
class ProviderReply:
    """What a model turn produces."""

    text: str
    function_calls: tuple[FunctionCall, ...] = ()


@runtime_checkable
class ModelProvider(Protocol):
    """Persistent bidirectional session with a multimodal model.

    open() starts a session with a system prompt and the advertised
    function declarations; send() streams context parts (views, text)
    into it; turn() submits user input and returns the reply; close()
    releases any underlying connection.
    """

    def open(self, system_prompt: str,
             declarations: Sequence[FunctionDeclaration]) -> None: ...

    def send(self, parts: Sequence[ViewPart | TextPart]) -> None: ...

    def turn(self, text: str) -> ProviderReply: ...

    def close(self) -> None: ...


# -- geographic context --------------------------------------------------

def assemble_geo_context(providers, pano: Panorama, heading: float,
                         cfg: NavConfig, selected_place: Place | None = None) -> GeoContext:
    """Collects the surroundings of a panorama into a GeoContext.

    Nearby places come from the radius query, already ordered closest
    first; offsets and relative positions are recomputed from the
    user's heading so they agree with the spoken announcements.
    """
    entries = []
    for place, distance in providers.places_near(pano.location, cfg.nearby_radius):
        if distance == 0.0:
            offset = 0.0
        else:
            bearing = initial_bearing(pano.location, place.location)
            offset = relative_heading(bearing, heading)
        entries.append(NearbyPlaceContext(
            name=place.display_name,
            place_type=place.place_type,
            editorial_summary=place.editorial_summary,
            location=place.location,
            distance=distance,
            heading_offset=offset,
            relative_position=relative_position(offset),
        ))
    return GeoContext(
        closest_address=pano.address,
        heading=heading,
        compass=compass_name(heading),
        nearby_places=tuple(entries),
        selected_place=selected_place,
    )


def context_for_session(session: Session) -> GeoContext:
    return assemble_geo_context(session.providers, session.current_pano,
                                session.heading, session.cfg,
                                session.selected_place)


def capture_for_session(session: Session) -> ViewCapture:
    world = getattr(session.providers, "inner", session.providers)
    return world.capture_view(session.current_pano.id, session.heading,
                              session.cfg.capture_size)


# -- scene description ---------------------------------------------------

@dataclass(frozen=True)
class StructuredDescription:
    mobility_features: tuple[str, ...]
    obstacles: tuple[str, ...]
    safety_summary: str
    followups: tuple[str, str, str]


@dataclass(frozen=True)
class DescriberResult:
    description: str
    structured: StructuredDescription | None = None


def _strip_code_fence(text: str) -> str:
    text = text.strip()
    if text.startswith("```"):
        first_break = text.find("\n")
        if first_break != -1 and text.endswith("```"):
            text = text[first_break + 1:-3].strip()
    return text


def _string_list(value: object) -> tuple[str, ...] | None:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        return None
    return tuple(value)


def parse_structured_description(text: str) -> DescriberResult | None:
    """Validates a structured describer reply; None when malformed."""
    try:
        doc = json.loads(_strip_code_fence(text))
    except (json.JSONDecodeError, TypeError):
        return None
    if not isinstance(doc, dict):
        return None
    description = doc.get("description")
    safety = doc.get("safety_summary")
    if not isinstance(description, str) or not isinstance(safety, str):
        return None
    mobility = _string_list(doc.get("mobility_features"))
    obstacles = _string_list(doc.get("obstacles"))
    followups = _string_list(doc.get("followups"))
    if mobility is None or obstacles is None or followups is None:
        return None
    if len(followups) != 3:
        return None
    return DescriberResult(
        description=description,
        structured=StructuredDescription(
            mobility_features=mobility,
            obstacles=obstacles,
            safety_summary=safety,
            followups=(followups[0], followups[1], followups[2]),
        ))


def describe(view: ViewCapture, ctx: GeoContext, profile: UserProfile | None,
             mode: PromptMode, structured: bool,
             provider: ModelProvider) -> DescriberResult:
    """One-shot scene description of the given view.

    Structured replies are validated against the JSON schema promised
    in the prompt; a malformed reply earns exactly one retry before a
    schema error is raised.
    """
    prompt = render_describer_prompt(ctx, profile, mode, structured=structured)
    provider.open(prompt, ())
    provider.send((ViewPart(view), TextPart(render_geo_context(ctx))))
    try:
        if not structured:
            reply = provider.turn(DESCRIBE_REQUEST)
            return DescriberResult(description=reply.text)
        reply = provider.turn(STRUCTURED_REQUEST)
        result = parse_structured_description(reply.text)
        if result is None:
            reply = provider.turn(STRUCTURED_RETRY_REQUEST)
            result = parse_structured_description(reply.text)
        if result is None:
            raise SchemaError(
                "describer reply did not match the structured schema after one retry")
        return result
    finally:
        provider.close()


# -- chat session --------------------------------------------------------

class ChatCommand(enum.Enum):
    """Navigation commands the chat model may call."""

    MOVE_BACKWARD = "moveBackward"
    MOVE_FORWARD = "moveForward"
    MOVE_TO_INTERSECTION = "moveToIntersection"
    TURN_LEFT_45 = "turnLeft45"
    TURN_LEFT_90 = "turnLeft90"
    TURN_RIGHT_45 = "turnRight45"
    TURN_RIGHT_90 = "turnRight90"
    TURN_AROUND = "turnAround"


@dataclass(frozen=True)
class TranscriptEntry:
    role: str
    text: str
    function_calls: tuple[FunctionCall, ...] = ()


@dataclass(frozen=True)
class ChatTurnResult:
    reply: str
    commands: tuple[ChatCommand, ...] = ()
    ok: bool = True


@dataclass
class _WindowEntry:
    kind: str  # "view" or "turn"
    tokens: int


@dataclass
class ChatSession:
    """Conversation state bound to one navigation session.

    The transcript and view history are complete records; the token
    window tracks only what still counts toward the provider context
    after trimming.
    """

    nav: Session
    provider: ModelProvider | None
    profile: UserProfile
    enabled: bool
    token_budget: int
    base_tokens: int
    view_token_cost: int = VIEW_TOKEN_COST
    transcript: list[TranscriptEntry] = field(default_factory=list)
    view_history: list[ViewCapture] = field(default_factory=list)
    closed: bool = False
    _window: list[_WindowEntry] = field(default_factory=list)

    @property
    def token_estimate(self) -> int:
        return self.base_tokens + sum(e.tokens for e in self._window)

    def _window_views(self) -> int:
        return sum(1 for e in self._window if e.kind == "view")

    def _trim(self) -> None:
        """Drops oldest context entries until back under budget.

        The most recent CHAT_CONTEXT_MIN_VIEWS views are never dropped,
        and the system prompt and declarations (base_tokens) are not
        trimmable at all.
        """
        while self.token_estimate > self.token_budget:
            views_left = self._window_views()
            drop_at = None
            for i, entry in enumerate(self._window):
                if entry.kind == "turn" or views_left > CHAT_CONTEXT_MIN_VIEWS:
                    drop_at = i
                    break
            if drop_at is None:
                break
            del self._window[drop_at]


def declared_command_names() -> tuple[str, ...]:
    return tuple(d.name for d in FUNCTION_DECLARATIONS)


def chat_open(session: Session, provider: ModelProvider,
              profile: UserProfile | None = None,
              cfg: NavConfig | None = None) -> ChatSession:
    """Opens a chat session over the navigation session.

    A provider that fails to open disables chat; navigation is never
    affected and every later turn answers with an unavailable message.
    """
    cfg = cfg or session.cfg
    profile = profile or UserProfile()
    system_prompt = render_chat_prompt(profile)
    base = estimate_text_tokens(system_prompt) + sum(
        estimate_text_tokens(d.name) + estimate_text_tokens(d.description)
        for d in FUNCTION_DECLARATIONS)
    enabled = True
    try:
        provider.open(system_prompt, FUNCTION_DECLARATIONS)
    except ProviderError as exc:
        log.warning("chat provider unavailable, chat disabled: %s", exc)
        enabled = False
    return ChatSession(
        nav=session,
        provider=provider if enabled else None,
        profile=profile,
        enabled=enabled,
        token_budget=cfg.chat_token_budget,
        base_tokens=base if enabled else 0,
    )


def chat_close(chat: ChatSession) -> None:
    """Closes the provider session and flushes the transcript log."""
    if chat.closed:
        return
    chat.closed = True
    chat.enabled = False
    if chat.provider is not None:
        try:
            chat.provider.close()
        except ProviderError:
            pass
        chat.provider = None
    chat.nav.log.flush()


def chat_on_view_change(chat: ChatSession, view: ViewCapture,
                        ctx: GeoContext) -> None:
    """Streams the new view and its geographic context to the model."""
    if not chat.enabled or chat.closed:
        return
    geo_text = render_geo_context(ctx)
    chat.provider.send((ViewPart(view), TextPart(geo_text)))
    chat.view_history.append(view)
    chat._window.append(_WindowEntry(
        kind="view",
        tokens=chat.view_token_cost + estimate_text_tokens(geo_text)))
    chat._trim()


def chat_turn(chat: ChatSession, text: str) -> ChatTurnResult:
    """Submits user input and maps declared calls to ChatCommands.

    Unknown function names are dropped with a logged warning; the
    textual reply is always delivered. A provider failure mid-turn
    becomes a spoken error rather than an exception.
    """
    if not chat.enabled or chat.closed:
        return ChatTurnResult(reply=CATALOG["chat_unavailable"], commands=(), ok=False)
    chat.transcript.append(TranscriptEntry(role="user", text=text))
    try:
        reply = chat.provider.turn(text)
    except ProviderError as exc:
        log.warning("chat provider failed mid-turn: %s", exc)
        failed = CATALOG["chat_failed"]
        chat.transcript.append(TranscriptEntry(role="assistant", text=failed))
        chat.nav.append_event("ChatTurn", {
            "input": text, "reply": failed, "commands": [], "ok": False})
        return ChatTurnResult(reply=failed, commands=(), ok=False)
    commands = []
    for call in reply.function_calls:
        try:
            commands.append(ChatCommand(call.name))
        except ValueError:
            log.warning("provider called unknown function %r; ignored", call.name)
    chat.transcript.append(TranscriptEntry(
        role="assistant", text=reply.text, function_calls=reply.function_calls))
    chat._window.append(_WindowEntry(
        kind="turn",
        tokens=estimate_text_tokens(text) + estimate_text_tokens(reply.text)))
    chat._trim()
    chat.nav.append_event("ChatTurn", {
        "input": text,
        "reply": reply.text,
        "commands": [c.value for c in commands],
        "ok": True,
    })
    return ChatTurnResult(reply=reply.text, commands=tuple(commands))


# -- command dispatch ----------------------------------------------------

_TURN_SEQUENCES = {
    ChatCommand.TURN_LEFT_45: (LEFT,),
    ChatCommand.TURN_LEFT_90: (LEFT, LEFT),
    ChatCommand.TURN_RIGHT_45: (RIGHT,),
    ChatCommand.TURN_RIGHT_90: (RIGHT, RIGHT),
    ChatCommand.TURN_AROUND: (RIGHT, RIGHT, RIGHT, RIGHT),
}


def dispatch_command(cmd: ChatCommand, session: Session) -> list:
    """Applies one chat command to the navigation session.

    Returns the outcome objects in effect order, one per underlying
    session verb, so callers can announce each exactly as they would
    the equivalent hotkey presses. Turns compose 45-degree pans; a
    half-turn is four pans to the right.
    """
    if cmd is ChatCommand.MOVE_FORWARD:
        return [session.step(FORWARD)]
    if cmd is ChatCommand.MOVE_BACKWARD:
        return [session.step(BACKWARD)]
    if cmd is ChatCommand.MOVE_TO_INTERSECTION:
        return [session.jump()]
    return [session.pan(direction) for direction in _TURN_SEQUENCES[cmd]]
