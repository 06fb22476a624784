"""Egocentric movement graph and heading-relative queries.

Built-in panorama links describe where a car drove, not where a person
can face, so movement availability here comes from a square spatial
query around the viewer merged with those links. Everything downstream
(stepping, jumping, the movement list read out to the user) is a pure
function of that graph and the current heading.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .config import NavConfig
from .errors import NoMoveError
from .geo import (
    GeoPoint,
    OCTANT_HEADINGS,
    destination_point,
    haversine_distance,
    initial_bearing,
    relative_heading,
)
from .world import Panorama


@dataclass(frozen=True)
class Neighbor:
    """A pano reachable from the graph origin, with egocentric annotations."""

    pano: Panorama
    distance: float
    bearing: float
    via_link: bool = False


@dataclass(frozen=True)
class EgocentricGraph:
    origin: Panorama
    neighbors: tuple[Neighbor, ...]


@dataclass(frozen=True)
class IntersectionHit:
    """A detected road crossing along a ray from the viewer."""

    location: GeoPoint
    pano: Panorama
    road_names: tuple[str, ...]
    distance_from_origin: float


JUMP_TO_INTERSECTION = "ToIntersection"
JUMP_MAX_DISTANCE = "MaxDistance"


@dataclass(frozen=True)
class JumpTarget:
    pano: Panorama
    kind: str  # JUMP_TO_INTERSECTION or JUMP_MAX_DISTANCE
    intersection: IntersectionHit | None = None


def build_egocentric_graph(providers, origin: Panorama, cfg: NavConfig) -> EgocentricGraph:
    """Neighbors = panos inside the search square around origin, plus all
    link targets, deduplicated; the origin itself never appears.

    The square has side cfg.grid_extent; containment is evaluated by the
    provider (one range query stands in for stepping a 5 m lattice).
    """
    half = cfg.grid_extent / 2.0
    found: dict[str, Neighbor] = {}
    for pano, dist in providers.panos_in_grid(origin.location, half):
        if pano.id == origin.id:
            continue
        found[pano.id] = Neighbor(
            pano=pano,
            distance=dist,
            bearing=_bearing_or_zero(origin.location, pano.location),
        )
    for link in origin.links:
        if link.target_id == origin.id:
            continue
        existing = found.get(link.target_id)
        if existing is not None:
            if not existing.via_link:
                found[link.target_id] = replace(existing, via_link=True)
            continue
        pano = providers.get_pano(link.target_id)
        found[pano.id] = Neighbor(
            pano=pano,
            distance=haversine_distance(origin.location, pano.location),
            bearing=_bearing_or_zero(origin.location, pano.location),
            via_link=True,
        )
    ordered = sorted(found.values(), key=lambda n: (n.bearing, n.distance, n.pano.id))
    return EgocentricGraph(origin=origin, neighbors=tuple(ordered))


def _bearing_or_zero(a: GeoPoint, b: GeoPoint) -> float:
    try:
        return initial_bearing(a, b)
    except ValueError:
        return 0.0


def next_pano(g: EgocentricGraph, heading: float, cfg: NavConfig) -> Panorama | None:
    """Closest neighbor within the forward cone of heading, or None.

    The cone is inclusive at exactly forward_tolerance; equal distances
    break toward the smaller pano id.
    """
    best: Neighbor | None = None
    for n in g.neighbors:
        if abs(relative_heading(n.bearing, heading)) <= cfg.forward_tolerance:
            if best is None or (n.distance, n.pano.id) < (best.distance, best.pano.id):
                best = n
    return best.pano if best else None


def prev_pano(g: EgocentricGraph, heading: float, cfg: NavConfig) -> Panorama | None:
    """The pano behind the viewer: next_pano evaluated at heading+180."""
    return next_pano(g, heading + 180.0, cfg)


def available_movements(g: EgocentricGraph, cfg: NavConfig) -> list[float]:
    """Octant headings with a steppable pano, clockwise starting at North."""
    return [h for h in OCTANT_HEADINGS if next_pano(g, h, cfg) is not None]


def detect_intersection_along(providers, origin: GeoPoint, heading: float,
                              cfg: NavConfig) -> IntersectionHit | None:
    """Walks sample points along heading looking for a road crossing.

    Sample k sits k*ray_step meters out, for every k with k*ray_step <=
    jump_max. A sample qualifies when its search square holds at least
    two distinctly named roads and a pano whose movement graph reaches a
    differently named road (this keeps the test honest at overpasses,
    which count, and at map joints where one road is split into two
    records, which do not).
    """
    half = cfg.grid_extent / 2.0
    k = 1
    while k * cfg.ray_step <= cfg.jump_max:
        dist = k * cfg.ray_step
        sample = destination_point(origin, heading, dist)
        roads = providers.roads_in_grid(sample, half)
        names: dict[str, str] = {}
        for road in roads:
            names.setdefault(road.name.casefold(), road.name)
        if len(names) >= 2:
            qualifying: list[tuple[float, str, Panorama]] = []
            for pano, pano_dist in providers.panos_in_grid(sample, half):
                if _reaches_other_road(providers, pano, cfg):
                    qualifying.append((pano_dist, pano.id, pano))
            if qualifying:
                qualifying.sort(key=lambda t: (t[0], t[1]))
                return IntersectionHit(
                    location=sample,
                    pano=qualifying[0][2],
                    road_names=tuple(names.values()),
                    distance_from_origin=dist,
                )
        k += 1
    return None


def _reaches_other_road(providers, pano: Panorama, cfg: NavConfig) -> bool:
    own = pano.address.road_name.casefold()
    g = build_egocentric_graph(providers, pano, cfg)
    return any(n.pano.address.road_name.casefold() != own for n in g.neighbors)


def jump_target(providers, origin: Panorama, heading: float, cfg: NavConfig) -> JumpTarget:
    """Where a jump lands: the next intersection, else the farthest pano
    within the forward cone at up to jump_max meters.

    Raises NoMoveError when neither exists.
    """
    hit = detect_intersection_along(providers, origin.location, heading, cfg)
    if hit is not None and hit.pano.id != origin.id:
        return JumpTarget(pano=hit.pano, kind=JUMP_TO_INTERSECTION, intersection=hit)
    half = cfg.jump_max
    best: tuple[float, str, Panorama] | None = None
    for pano, dist in providers.panos_in_grid(origin.location, half):
        if pano.id == origin.id or dist > cfg.jump_max:
            continue
        bearing = _bearing_or_zero(origin.location, pano.location)
        if abs(relative_heading(bearing, heading)) <= cfg.forward_tolerance:
            key = (-dist, pano.id)
            if best is None or key < (best[0], best[1]):
                best = (-dist, pano.id, pano)
    if best is None:
        raise NoMoveError("no pano reachable along this heading")
    return JumpTarget(pano=best[2], kind=JUMP_MAX_DISTANCE)


def intersection_here(providers, location: GeoPoint, cfg: NavConfig) -> list[str]:
    """Distinct road names within the search square at a position.

    Two or more names means the viewer is standing at (or on) a
    crossing; the announcer reads these out for the intersection query.
    """
    names: dict[str, str] = {}
    for road in providers.roads_in_grid(location, cfg.grid_extent / 2.0):
        names.setdefault(road.name.casefold(), road.name)
    return list(names.values())
