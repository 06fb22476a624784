"""Spoken-status composition: the voice of the navigator.

Functions here are pure: they take context snapshots and outcome
records and return StatusMessage values. Movement messages are diffed
against the previous position so the user only hears what changed;
everything else is a straight template fill from the catalog.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .catalog import (
    CATALOG,
    LISTING_POSITION_PHRASES,
    MONTH_NAMES,
    MOVEMENT_POSITION_PHRASES,
    count_word,
    oxford_join,
    with_article,
)
from .config import NavConfig
from .geo import (
    compass_name,
    initial_bearing,
    relative_heading,
    relative_position,
)
from .navgraph import (
    EgocentricGraph,
    IntersectionHit,
    available_movements,
    detect_intersection_along,
    intersection_here,
    next_pano,
)
from .session import MoveOutcome, NoMove, TeleportOutcome, VisitInfo
from .world import Panorama, Place, StreetAddress

STATUS, CHAT = "Status", "Chat"

_POSITION_PRIORITY = {"in_front": 0, "to_your_left": 1, "to_your_right": 2, "behind": 3}


@dataclass(frozen=True)
class NearbyEntry:
    place: Place
    distance: float
    offset: float  # degrees relative to the viewer's heading
    position: str  # RelativePosition value name


@dataclass(frozen=True)
class LocalContext:
    """Everything the announcer knows about one position and heading."""

    pano_id: str
    address: StreetAddress
    heading: float
    at_intersection: IntersectionHit | None
    nearby: tuple[NearbyEntry, ...]
    visit_count: int = 1


@dataclass(frozen=True)
class StatusMessage:
    text: str
    voice_channel: str = STATUS
    fragments: tuple[tuple[str, str], ...] = ()


def _message(fragments: list[tuple[str, str]], channel: str = STATUS) -> StatusMessage:
    kept = [(kind, text) for kind, text in fragments if text]
    return StatusMessage(text=" ".join(text for _, text in kept),
                         voice_channel=channel, fragments=tuple(kept))


def build_local_context(providers, pano: Panorama, heading: float, cfg: NavConfig,
                        visit_count: int = 1) -> LocalContext:
    """Snapshots the surroundings of a pano for announcements and AI."""
    entries = []
    for place, dist in providers.places_near(pano.location, cfg.nearby_radius):
        if place.location == pano.location:
            offset = 0.0
        else:
            bearing = initial_bearing(pano.location, place.location)
            offset = relative_heading(bearing, heading)
        entries.append(NearbyEntry(place=place, distance=dist, offset=offset,
                                   position=relative_position(offset).value))
    entries.sort(key=lambda e: (_POSITION_PRIORITY[e.position], e.distance, e.place.id))
    names = intersection_here(providers, pano.location, cfg)
    hit = None
    if len(names) >= 2:
        hit = IntersectionHit(location=pano.location, pano=pano,
                              road_names=tuple(names), distance_from_origin=0.0)
    return LocalContext(pano_id=pano.id, address=pano.address, heading=heading,
                        at_intersection=hit, nearby=tuple(entries),
                        visit_count=visit_count)


def format_distance(meters: float) -> str:
    """Rounds a distance the way it should be spoken.

    Under 100 m: whole meters. Under 1 km: tens of meters. Beyond:
    whole kilometers with a thousands separator, like "2,393 km".
    """
    if meters < 0:
        meters = 0.0
    if meters < 100.0:
        n = math.floor(meters + 0.5)
        if n < 100:
            return "1 meter" if n == 1 else f"{n} meters"
        meters = float(n)
    if meters < 1000.0:
        n = 10 * math.floor(meters / 10.0 + 0.5)
        if n < 1000:
            return f"{n} meters"
        meters = float(n)
    km = math.floor(meters / 1000.0 + 0.5)
    if km < 1:
        km = 1
    return f"{km:,} km"


def _directions_text(movements) -> str:
    return oxford_join(compass_name(h) for h in movements)


# -- panning -------------------------------------------------------------


def pan_announcement(old_heading: float, new_heading: float, graph: EgocentricGraph,
                     ctx: LocalContext, cfg: NavConfig) -> StatusMessage:
    """Heading callout, forward availability, and what lies ahead."""
    fragments = [("heading", CATALOG["now_facing"].format(
        compass=compass_name(new_heading)))]
    ahead = next_pano(graph, new_heading, cfg)
    if ahead is None:
        fragments.append(("movement", CATALOG["cannot_move_forward"]))
    else:
        fragments.append(("movement", CATALOG["can_move_forward"].format(
            road=ahead.address.road_name)))
    facing = [e for e in ctx.nearby
              if abs(e.offset) <= cfg.facing_cone and e.distance <= cfg.facing_max_distance]
    if facing:
        text = " ".join(
            CATALOG["facing_place"].format(name=e.place.display_name,
                                           distance=format_distance(e.distance))
            for e in facing)
        fragments.append(("places", text))
    return _message(fragments)


# -- movement ------------------------------------------------------------


def _movement_lead(outcome: MoveOutcome) -> str:
    distance = format_distance(outcome.distance)
    if outcome.kind == "step_forward":
        return CATALOG["stepped_forward"].format(distance=distance)
    if outcome.kind == "step_backward":
        return CATALOG["stepped_backward"].format(distance=distance)
    if outcome.kind == "jump":
        if outcome.jump_kind == "ToIntersection":
            return CATALOG["jumped_to_intersection"].format(distance=distance)
        return CATALOG["jumped"].format(distance=distance)
    return CATALOG["went_back"].format(distance=distance)


def _same_roads(a: IntersectionHit | None, b: IntersectionHit | None) -> bool:
    if a is None or b is None:
        return a is b
    return ({n.casefold() for n in a.road_names}
            == {n.casefold() for n in b.road_names})


def _place_changes(prev_ctx: LocalContext, new_ctx: LocalContext) -> list[str]:
    previous = {e.place.id: e for e in prev_ctx.nearby}
    clauses = []
    for entry in new_ctx.nearby:
        phrase = MOVEMENT_POSITION_PHRASES[entry.position]
        distance = format_distance(entry.distance)
        old = previous.get(entry.place.id)
        if old is None or old.position != entry.position:
            clauses.append(CATALOG["place_now"].format(
                name=entry.place.display_name, position=phrase, distance=distance))
        elif format_distance(old.distance) != distance:
            clauses.append(CATALOG["place_still"].format(
                name=entry.place.display_name, position=phrase, distance=distance))
        # Same position, same spoken distance: nothing changed, say nothing.
    return clauses


def movement_announcement(prev_ctx: LocalContext, new_ctx: LocalContext,
                          outcome: MoveOutcome, cfg: NavConfig) -> StatusMessage:
    """Movement type and distance, then only what differs from before."""
    fragments = [("movement", _movement_lead(outcome))]
    if prev_ctx.address.road_name.casefold() != new_ctx.address.road_name.casefold():
        fragments.append(("address", CATALOG["now_on_road"].format(
            road=new_ctx.address.road_name)))
    if not _same_roads(prev_ctx.at_intersection, new_ctx.at_intersection):
        if new_ctx.at_intersection is not None:
            fragments.append(("intersection", CATALOG["arrived_at_intersection"].format(
                roads=oxford_join(new_ctx.at_intersection.road_names))))
        elif prev_ctx.at_intersection is not None:
            fragments.append(("intersection", CATALOG["left_intersection"].format(
                roads=oxford_join(prev_ctx.at_intersection.road_names))))
    clauses = _place_changes(prev_ctx, new_ctx)
    if clauses:
        fragments.append(("places", " ".join(clauses)))
    if new_ctx.visit_count > 1:
        fragments.append(("visit", CATALOG["been_here_before"]))
    return _message(fragments)


# -- movement availability -----------------------------------------------


def movements_listing(movements) -> str:
    moves = list(movements)
    if not moves:
        return CATALOG["cannot_move_any"]
    if len(moves) == 1:
        return CATALOG["can_move_one_direction"].format(
            directions=_directions_text(moves))
    return CATALOG["can_move_directions"].format(
        count=count_word(len(moves)), directions=_directions_text(moves))


def available_movements_announcement(graph: EgocentricGraph, attempted: str | None,
                                     heading: float, cfg: NavConfig) -> StatusMessage:
    """Optionally scolds the blocked direction, then lists the open ones."""
    moves = available_movements(graph, cfg)
    fragments = []
    if attempted:
        fragments.append(("movement", CATALOG["cannot_move_heading"].format(
            direction=attempted, compass=compass_name(heading))))
    fragments.append(("movement", movements_listing(moves)))
    return _message(fragments)


def no_move_announcement(outcome: NoMove, cfg: NavConfig) -> StatusMessage:
    attempted = "forward" if outcome.kind in ("forward", "jump") else "backward"
    fragments = [("movement", CATALOG["cannot_move_heading"].format(
        direction=attempted, compass=compass_name(outcome.heading)))]
    fragments.append(("movement", movements_listing(outcome.movements)))
    return _message(fragments)


# -- teleporting ---------------------------------------------------------


def _origin_label(outcome: TeleportOutcome) -> str:
    if outcome.origin_place is not None:
        return outcome.origin_place.display_name
    return outcome.from_pano.address.street_label()


def _destination_label(outcome: TeleportOutcome) -> str:
    street = outcome.to_pano.address.street_label()
    if (outcome.from_pano.address.locality_parts()
            != outcome.to_pano.address.locality_parts()):
        return CATALOG["destination_with_locality"].format(
            street=street, locality=outcome.to_pano.address.locality_label())
    return street


def places_listing(entries, cfg: NavConfig) -> str:
    """Clauses grouped by relative position, in priority order.

    A lone place in a bucket gets its own typed clause; two or more
    collapse into one clause bounded by the farthest member.
    """
    buckets: dict[str, list[NearbyEntry]] = {}
    for e in entries:
        buckets.setdefault(e.position, []).append(e)
    clauses = []
    for position in sorted(buckets, key=_POSITION_PRIORITY.get):
        group = buckets[position]
        phrase = LISTING_POSITION_PHRASES[position]
        if len(group) == 1:
            e = group[0]
            clauses.append(CATALOG["place_item"].format(
                article=with_article(e.place.place_type).split(" ", 1)[0],
                type=e.place.place_type, name=e.place.display_name,
                position=phrase, distance=format_distance(e.distance)))
        else:
            # Each appositive keeps its closing comma, as in "a cafe,
            # Roasters, and a bar, Duke's, are ..."
            items = [f"{with_article(e.place.place_type)}, {e.place.display_name},"
                     for e in group]
            names = " ".join(items[:-1]) + " and " + items[-1]
            limit = math.floor(max(e.distance for e in group)) + 1
            clauses.append(CATALOG["place_group"].format(
                names=names, position=phrase, limit=limit))
    return "; ".join(clauses)


def _places_fragment(ctx: LocalContext, cfg: NavConfig) -> str:
    radius = f"{cfg.nearby_radius:g}"
    if not ctx.nearby:
        return CATALOG["no_places"].format(radius=radius)
    if len(ctx.nearby) == 1:
        return CATALOG["one_place"].format(
            radius=radius, listing=places_listing(ctx.nearby, cfg))
    return CATALOG["many_places"].format(
        count=count_word(len(ctx.nearby)), radius=radius,
        listing=places_listing(ctx.nearby, cfg))


def teleport_announcement(outcome: TeleportOutcome, new_ctx: LocalContext,
                          movements, cfg: NavConfig) -> StatusMessage:
    fragments = [("movement", CATALOG["teleported"].format(
        distance=format_distance(outcome.distance),
        origin=_origin_label(outcome),
        destination=_destination_label(outcome)))]
    fragments.append(("places", _places_fragment(new_ctx, cfg)))
    moves = list(movements)
    compass = compass_name(outcome.new_heading)
    if not moves:
        facing = CATALOG["facing_no_moves"].format(compass=compass)
    elif len(moves) == 1:
        facing = CATALOG["facing_and_moves_one"].format(
            compass=compass, directions=_directions_text(moves))
    else:
        facing = CATALOG["facing_and_moves"].format(
            compass=compass, count=count_word(len(moves)),
            directions=_directions_text(moves))
    fragments.append(("heading", facing))
    return _message(fragments)


# -- standalone queries --------------------------------------------------


def nearby_places_announcement(ctx: LocalContext, cfg: NavConfig) -> StatusMessage:
    return _message([("places", _places_fragment(ctx, cfg))])


def intersection_announcement(ctx: LocalContext, providers, cfg: NavConfig) -> StatusMessage:
    fragments = []
    if ctx.at_intersection is not None:
        fragments.append(("intersection", CATALOG["at_intersection"].format(
            roads=oxford_join(ctx.at_intersection.road_names))))
    else:
        fragments.append(("intersection", CATALOG["not_at_intersection"]))
    origin = providers.get_pano(ctx.pano_id).location
    ahead = detect_intersection_along(providers, origin, ctx.heading, cfg)
    if ahead is None:
        fragments.append(("intersection", CATALOG["no_next_intersection"].format(
            distance=format_distance(cfg.jump_max))))
    else:
        fragments.append(("intersection", CATALOG["next_intersection"].format(
            roads=oxford_join(ahead.road_names),
            distance=format_distance(ahead.distance_from_origin))))
    return _message(fragments)


def pano_metadata_announcement(pano: Panorama) -> StatusMessage:
    year, month = pano.capture_date.split("-")
    photographer = pano.photographer or "an unknown photographer"
    return _message([("metadata", CATALOG["image_metadata"].format(
        month=MONTH_NAMES[int(month) - 1], year=year, photographer=photographer))])


def visits_announcement(info: VisitInfo) -> StatusMessage:
    if info.count <= 1:
        return _message([("visit", CATALOG["first_visit"])])
    return _message([("visit", CATALOG["visited_times"].format(
        count=count_word(info.count)))])


def where_announcement(ctx: LocalContext) -> StatusMessage:
    return _message([("address", CATALOG["where_am_i"].format(
        address=ctx.address.oneline(), compass=compass_name(ctx.heading)))])
