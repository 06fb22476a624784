"""Prompt documents and function declarations for the AI subsystems.

Everything here is plain, deterministic text assembly: the same inputs
always render byte-identical output, so prompt content can be pinned by
golden files. The geographic context block shares its distance and
position wording with the spoken announcements so the model and the
user hear the world described the same way.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .announcer import format_distance
from .catalog import LISTING_POSITION_PHRASES
from .geo import GeoPoint, RelativePosition
from .world import Place, StreetAddress

__all__ = [
    "PromptMode",
    "UserProfile",
    "NearbyPlaceContext",
    "GeoContext",
    "FunctionDeclaration",
    "FUNCTION_DECLARATIONS",
    "DEFAULT_PROFILE_CLAUSE",
    "DESCRIBE_REQUEST",
    "STRUCTURED_REQUEST",
    "STRUCTURED_RETRY_REQUEST",
    "render_geo_context",
    "render_describer_prompt",
    "render_chat_prompt",
]


class PromptMode(enum.Enum):
    """Persona selector for the scene describer."""

    DEFAULT = "Default"
    TOUR_GUIDE = "TourGuide"


@dataclass(frozen=True)
class UserProfile:
    """Optional free-text self-description supplied by the user."""

    text: str | None = None

    def clause(self) -> str:
        return self.text.strip() if self.text and self.text.strip() else DEFAULT_PROFILE_CLAUSE


@dataclass(frozen=True)
class NearbyPlaceContext:
    """One nearby place, flattened for context assembly."""

    name: str
    place_type: str
    editorial_summary: str
    location: GeoPoint
    distance: float
    heading_offset: float
    relative_position: RelativePosition


@dataclass(frozen=True)
class GeoContext:
    """Geographic surroundings handed to the model with every view.

    nearby_places is sorted ascending by distance and every entry lies
    within the configured nearby radius.
    """

    closest_address: StreetAddress
    heading: float
    compass: str
    nearby_places: tuple[NearbyPlaceContext, ...] = ()
    selected_place: Place | None = None

    @property
    def neighborhood(self) -> str | None:
        return self.closest_address.neighborhood

    @property
    def city(self) -> str:
        return self.closest_address.city

    @property
    def state(self) -> str | None:
        return self.closest_address.state_province

    @property
    def country(self) -> str:
        return self.closest_address.country


@dataclass(frozen=True)
class FunctionDeclaration:
    """A callable surface advertised to the chat model."""

    name: str
    description: str


FUNCTION_DECLARATIONS: tuple[FunctionDeclaration, ...] = (
    FunctionDeclaration(
        "moveBackward",
        "Move the user one panorama backward, opposite their current heading."),
    FunctionDeclaration(
        "moveForward",
        "Move the user one panorama forward along their current heading."),
    FunctionDeclaration(
        "moveToIntersection",
        "Jump the user ahead to the next street intersection."),
    FunctionDeclaration(
        "turnLeft45",
        "Turn the user's heading slightly left, by 45 degrees."),
    FunctionDeclaration(
        "turnLeft90",
        "Turn the user's heading left, by 90 degrees."),
    FunctionDeclaration(
        "turnRight45",
        "Turn the user's heading slightly right, by 45 degrees."),
    FunctionDeclaration(
        "turnRight90",
        "Turn the user's heading right, by 90 degrees."),
    FunctionDeclaration(
        "turnAround",
        "Turn the user's heading around, by 180 degrees."),
)

DEFAULT_PROFILE_CLAUSE = (
    "Assume the user is blind and may use a white cane or a guide dog "
    "for mobility."
)

DESCRIBE_REQUEST = "Describe the current view."
STRUCTURED_REQUEST = "Describe the current view. Reply with the JSON object only."
STRUCTURED_RETRY_REQUEST = (
    "Your previous reply did not match the required JSON schema. Reply "
    "again with a single valid JSON object and nothing else."
)

_DESCRIBER_PERSONA = (
    "You are an expert at describing street scenes to people who are "
    "blind or have low vision. The user is exploring panoramic street "
    "imagery with a screen reader and relies entirely on your words to "
    "understand what is around them."
)

_TOUR_GUIDE_PERSONA = (
    "You are an expert tour guide for blind or low-vision virtual "
    "tourists. The user is exploring panoramic street imagery with a "
    "screen reader and relies entirely on your words, so combine clear "
    "visual description with the storytelling of a real guided tour."
)

_FOCUS_AREAS = (
    "Sidewalks, paths, and other walkable surfaces.",
    "Crosswalks, curb ramps, and the layout of any intersection.",
    "Traffic signals, stop signs, and pedestrian signals.",
    "Obstacles on or near the walking path, such as poles, bins, "
    "construction, or parked vehicles.",
    "Building entrances and doorways, including steps or ramps.",
    "Storefronts, landmarks, and any readable signage.",
    "People, vehicles, and current activity.",
    "Surface conditions and tactile features, such as gratings, "
    "cobbles, or tactile paving.",
)

_TOUR_EMPHASIS = (
    "Alongside the visual description, weave in historical facts, "
    "cultural significance, architectural styles, interesting "
    "anecdotes, popular nearby attractions, and the human activity of "
    "the scene, as a knowledgeable local guide would."
)

_GUIDELINES = (
    "Use clear and concise language. Keep a consistent frame of "
    "reference anchored to the user's current heading. Speak in the "
    "present tense. Limit your description to two or three sentences."
)

_STRUCTURED_FORMAT = (
    "Reply with a single JSON object and nothing else. Use exactly "
    "these keys:\n"
    '- "description": two or three sentences describing the scene\n'
    '- "mobility_features": a list of short strings naming features '
    "that help a blind pedestrian navigate\n"
    '- "obstacles": a list of short strings naming potential obstacles '
    "or hazards on the path\n"
    '- "safety_summary": one sentence on how safe the immediate area '
    "appears to traverse\n"
    '- "followups": exactly three follow-up questions the user could '
    "ask next"
)

_CHAT_PERSONA = (
    "You are a helpful, responsive conversational agent assisting a "
    "blind or low-vision user who is exploring panoramic street "
    "imagery with a screen reader. Answer questions about the current "
    "view and the surrounding geography concisely and truthfully, "
    "using the most recent image and context you have been sent. "
    "Describe locations relative to the user's current heading. When "
    "the user asks to turn or move, call exactly one of the declared "
    "functions rather than describing the action in words. If you "
    "cannot answer from the view or the context, say so plainly."
)


def _degrees(value: float) -> str:
    """Renders 180.0 as "180" and 22.5 as "22.5"."""
    return f"{value:g}"


def render_geo_context(ctx: GeoContext) -> str:
    """The textual context block sent alongside every view."""
    lines = []
    if ctx.selected_place is not None:
        lines.append(
            f"Selected place: {ctx.selected_place.display_name} "
            f"({ctx.selected_place.place_type}).")
    lines.append(f"Closest address: {ctx.closest_address.oneline()}.")
    lines.append(f"Heading: {_degrees(ctx.heading)} degrees ({ctx.compass}).")
    if ctx.neighborhood:
        lines.append(f"Neighborhood: {ctx.neighborhood}.")
    lines.append(f"City: {ctx.city}." if ctx.city else "City: unknown.")
    if ctx.state:
        lines.append(f"State: {ctx.state}.")
    lines.append(f"Country: {ctx.country}.")
    if ctx.nearby_places:
        lines.append("Nearby places, closest first:")
        for entry in ctx.nearby_places:
            position = LISTING_POSITION_PHRASES[entry.relative_position.value]
            item = (f"- {entry.name} ({entry.place_type}), "
                    f"{format_distance(entry.distance)} away, {position}.")
            if entry.editorial_summary:
                item += f" {entry.editorial_summary}"
            lines.append(item)
    else:
        lines.append("No mapped places nearby.")
    return "\n".join(lines)


def render_describer_prompt(ctx: GeoContext, profile: UserProfile | None,
                            mode: PromptMode = PromptMode.DEFAULT,
                            structured: bool = False) -> str:
    """Full prompt document for a one-shot scene description."""
    persona = _TOUR_GUIDE_PERSONA if mode is PromptMode.TOUR_GUIDE else _DESCRIBER_PERSONA
    profile_clause = (profile or UserProfile()).clause()
    sections = [
        persona,
        "## User\n" + profile_clause,
        "## Location\n" + render_geo_context(ctx),
    ]
    focus = "\n".join(f"{i}. {area}" for i, area in enumerate(_FOCUS_AREAS, start=1))
    sections.append("## Focus areas, in order of importance\n" + focus)
    if mode is PromptMode.TOUR_GUIDE:
        sections.append("## Tour emphasis\n" + _TOUR_EMPHASIS)
    sections.append("## Guidelines\n" + _GUIDELINES)
    if structured:
        sections.append("## Output format\n" + _STRUCTURED_FORMAT)
    return "\n\n".join(sections) + "\n"


def render_chat_prompt(profile: UserProfile | None) -> str:
    """System prompt used to open a conversational session."""
    profile_clause = (profile or UserProfile()).clause()
    sections = [
        _CHAT_PERSONA,
        "## User\n" + profile_clause,
        "## Guidelines\n" + _GUIDELINES,
    ]
    return "\n\n".join(sections) + "\n"
