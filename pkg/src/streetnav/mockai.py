"""Deterministic, offline stand-in for a multimodal model provider.

The mock is a rule engine over fixture ground truth: descriptions
enumerate the annotation tags of the current view, and chat answers
come from the current panorama's octant tags and the mapped places
around it, with relative positions computed by the same geographic
core the announcer uses. Command phrases follow a fixed pattern table
(see docs/mock-rules.md). Identical inputs always produce identical
replies, which makes the whole AI surface testable without a network.
"""
from __future__ import annotations

import json
import re
from typing import Sequence

from .announcer import format_distance
from .catalog import MOVEMENT_POSITION_PHRASES, oxford_join, with_article
from .config import NavConfig
from .errors import ProviderError
from .geo import (
    OCTANT_HEADINGS,
    compass_name,
    initial_bearing,
    relative_heading,
    relative_position,
)
from .orchestrator import FunctionCall, ProviderReply, TextPart, ViewPart
from .prompts import (
    DESCRIBE_REQUEST,
    STRUCTURED_REQUEST,
    STRUCTURED_RETRY_REQUEST,
    FunctionDeclaration,
)
from .world import ViewCapture

REFUSAL = "I'm sorry, I cannot answer that."

# Tags the structured describer classifies as helping or hindering a
# blind pedestrian. Arbitrary but fixed; tests rely on determinism,
# not on the taxonomy being exhaustive.
MOBILITY_TAGS = frozenset({
    "bench", "bus_stop", "bus_stop_shelter", "crosswalk", "curb_ramp",
    "handrail", "park_bench", "pedestrian_signal", "ramp", "sidewalk",
    "tactile_paving", "traffic_light",
})
OBSTACLE_TAGS = frozenset({
    "bike_rack", "construction", "fire_hydrant", "garbage_can",
    "newspaper_box", "parked_car", "pole", "scaffolding",
    "sidewalk_sign", "street_tree",
})

_COMMAND_ACKS = {
    "moveForward": "Moving forward.",
    "moveBackward": "Moving backward.",
    "moveToIntersection": "Jumping to the next intersection.",
    "turnLeft45": "Turning left 45 degrees.",
    "turnLeft90": "Turning left 90 degrees.",
    "turnRight45": "Turning right 45 degrees.",
    "turnRight90": "Turning right 90 degrees.",
    "turnAround": "Turning around.",
}

_SMALL_TURN_CUES = ("a little", "a bit", "slightly", "45")
_MOVE_VERBS = ("move", "go", "step", "walk", "take me", "keep going")
_FORWARD_CUES = ("forward", "ahead", "straight")
_BACKWARD_CUES = ("backward", "backwards", "back")

_EXISTENCE_RE = re.compile(r"^(?:is|are) there (?:an? |any |some )?(.+)$")
_SEE_RE = re.compile(r"^(?:do you see|can you see|do i see) (?:an? |any |some )?(.+)$")
_LOCATION_RE = re.compile(r"^(?:where is|where are|where's) (?:the |an? |my )?(.+)$")
_DIRECTION_RE = re.compile(r"^(?:which|what) (?:direction|way) is (?:the |an? )?(.+)$")

_TRAILING_QUALIFIERS = (
    "here", "nearby", "near me", "around", "around me", "close by",
    "in view", "in the view", "in this view", "in front of me",
    "right now", "at this location",
)


def _normalize(text: str) -> str:
    text = text.casefold()
    text = re.sub(r"[^a-z0-9' ]+", " ", text)
    return re.sub(r"\s+", " ", text).strip()


def _strip_qualifiers(subject: str) -> str:
    changed = True
    while changed:
        changed = False
        for q in _TRAILING_QUALIFIERS:
            if subject == q:
                return ""
            if subject.endswith(" " + q):
                subject = subject[: -len(q) - 1].rstrip()
                changed = True
    return subject


def _tag_candidates(subject: str) -> list[str]:
    """Snake-case forms a spoken subject might take as a fixture tag."""
    base = subject.replace("'", "").replace(" ", "_")
    candidates = [base]
    if base.endswith("ies"):
        candidates.append(base[:-3] + "y")
    if base.endswith("es"):
        candidates.append(base[:-2])
    if base.endswith("s"):
        candidates.append(base[:-1])
    return candidates


def match_command(text: str) -> str | None:
    """First matching command name for an utterance, else None.

    The rules mirror docs/mock-rules.md: turns before moves, small-turn
    cues select the 45-degree variants, and intersection jumps need an
    explicit movement verb so questions about intersections fall
    through to question answering.
    """
    norm = _normalize(text)
    if "turn" in norm:
        if "around" in norm or "180" in norm:
            return "turnAround"
        small = any(cue in norm for cue in _SMALL_TURN_CUES)
        if "left" in norm:
            return "turnLeft45" if small else "turnLeft90"
        if "right" in norm:
            return "turnRight45" if small else "turnRight90"
        return None
    if "intersection" in norm:
        if any(verb in norm for verb in ("go", "move", "take me", "jump")):
            return "moveToIntersection"
        return None
    if any(verb in norm for verb in _MOVE_VERBS):
        if any(cue in norm for cue in _BACKWARD_CUES):
            return "moveBackward"
        if any(cue in norm for cue in _FORWARD_CUES):
            return "moveForward"
    return None


class MockModelProvider:
    """Rule-based provider answering from a world's ground truth."""

    def __init__(self, world, cfg: NavConfig | None = None):
        self._world = getattr(world, "inner", world)
        self._cfg = cfg or NavConfig()
        self._opened = False
        self._tour = False
        self._view: ViewCapture | None = None

    # -- provider protocol ----------------------------------------------

    def open(self, system_prompt: str,
             declarations: Sequence[FunctionDeclaration]) -> None:
        self._opened = True
        self._tour = "tour guide" in system_prompt

    def send(self, parts: Sequence[ViewPart | TextPart]) -> None:
        self._require_open()
        for part in parts:
            if isinstance(part, ViewPart):
                self._view = part.capture

    def turn(self, text: str) -> ProviderReply:
        self._require_open()
        if text in (STRUCTURED_REQUEST, STRUCTURED_RETRY_REQUEST):
            return ProviderReply(text=self._structured_description())
        if text == DESCRIBE_REQUEST:
            return ProviderReply(text=self._plain_description())
        return self._chat_reply(text)

    def close(self) -> None:
        self._opened = False

    def _require_open(self) -> None:
        if not self._opened:
            raise ProviderError("provider session is not open")

    # -- describer ------------------------------------------------------

    def _view_tags(self) -> tuple[str, ...]:
        if self._view is None:
            return ()
        return self._world.view(self._view.pano_id, self._view.heading).tags

    def _scene_frame(self) -> tuple[str, str]:
        pano = self._world.get_pano(self._view.pano_id)
        return compass_name(self._view.heading), pano.address.road_name

    def _plain_description(self) -> str:
        if self._view is None:
            return "A street scene with nothing notable in view. No image has been shared yet."
        tags = self._view_tags()
        compass, road = self._scene_frame()
        if not tags:
            return (f"A quiet street scene with nothing notable in view. "
                    f"You are facing {compass} along {road}.")
        listed = oxford_join([with_article(t.replace("_", " ")) for t in tags])
        sentences = [
            f"You are facing {compass} on {road}.",
            f"You can see {listed}.",
        ]
        if self._tour:
            sentences.append(
                f"As your guide, notice how the character of {road} comes "
                f"through in its buildings and street life.")
        return " ".join(sentences)

    def _structured_description(self) -> str:
        tags = self._view_tags()
        humanized = [t.replace("_", " ") for t in tags]
        obstacles = [t.replace("_", " ") for t in tags if t in OBSTACLE_TAGS]
        if obstacles:
            safety = f"Watch for {oxford_join(obstacles)} near the walking path."
        else:
            safety = "The immediate area appears clear to traverse."
        if humanized:
            first = f"Can you tell me more about the {humanized[0]}?"
        else:
            first = "What does the street ahead look like?"
        doc = {
            "description": self._plain_description(),
            "mobility_features": [t.replace("_", " ") for t in tags if t in MOBILITY_TAGS],
            "obstacles": obstacles,
            "safety_summary": safety,
            "followups": [
                first,
                "Are there any obstacles on the sidewalk ahead?",
                "Which direction is the nearest crosswalk?",
            ],
        }
        return json.dumps(doc)

    # -- chat -----------------------------------------------------------

    def _chat_reply(self, text: str) -> ProviderReply:
        command = match_command(text)
        if command is not None:
            return ProviderReply(
                text=_COMMAND_ACKS[command],
                function_calls=(FunctionCall(name=command),))
        norm = _normalize(text)
        for pattern, locating in ((_EXISTENCE_RE, False), (_SEE_RE, False),
                                  (_LOCATION_RE, True), (_DIRECTION_RE, True)):
            matched = pattern.match(norm)
            if matched:
                subject = _strip_qualifiers(matched.group(1).strip())
                if subject:
                    return ProviderReply(text=self._answer_about(subject, locating))
        return ProviderReply(text=REFUSAL)

    def _find_tag(self, subject: str) -> tuple[str, float] | None:
        """Best (tag, octant-offset) match across the current pano."""
        if self._view is None:
            return None
        candidates = _tag_candidates(subject)
        best: tuple[float, float, str] | None = None
        for octant in OCTANT_HEADINGS:
            tags = self._world.view(self._view.pano_id, octant).tags
            for cand in candidates:
                if cand in tags:
                    offset = relative_heading(octant, self._view.heading)
                    key = (abs(offset), offset, cand)
                    if best is None or key < best:
                        best = key
        if best is None:
            return None
        return best[2], best[1]

    def _find_place(self, subject: str):
        """Closest nearby place matching by name or by type."""
        if self._view is None:
            return None
        pano = self._world.get_pano(self._view.pano_id)
        singulars = {subject}
        if subject.endswith("es"):
            singulars.add(subject[:-2])
        if subject.endswith("s"):
            singulars.add(subject[:-1])
        for place, distance in self._world.places_near(
                pano.location, self._cfg.nearby_radius):
            name = place.display_name.casefold()
            place_type = place.place_type.casefold()
            for form in singulars:
                if form in name or name in form or form in place_type or place_type in form:
                    return place, distance
        return None

    def _answer_about(self, subject: str, locating: bool) -> str:
        tag_hit = self._find_tag(subject)
        if tag_hit is not None:
            tag, offset = tag_hit
            phrase = MOVEMENT_POSITION_PHRASES[relative_position(offset).value]
            human = tag.replace("_", " ")
            if locating:
                return f"The {human} is {phrase}."
            return f"Yes, there is {with_article(human)} {phrase}."
        place_hit = self._find_place(subject)
        if place_hit is not None:
            place, distance = place_hit
            pano = self._world.get_pano(self._view.pano_id)
            if distance == 0.0:
                offset = 0.0
            else:
                bearing = initial_bearing(pano.location, place.location)
                offset = relative_heading(bearing, self._view.heading)
            phrase = MOVEMENT_POSITION_PHRASES[relative_position(offset).value]
            lead = "Yes, " if not locating else ""
            return (f"{lead}{place.display_name} is {phrase}, "
                    f"{format_distance(distance)} away.")
        if locating:
            return f"I cannot find the {subject} from here."
        return f"No, I do not see any {subject} from here."
