"""Spherical geometry and heading arithmetic.

Pure functions over degrees; radians appear only inside trig internals.
Distances are computed on a sphere of mean Earth radius, which is more
than accurate enough at street scale. Headings are compass degrees in
[0, 360), relative offsets are signed degrees in (-180, 180] with
positive meaning clockwise.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

EARTH_RADIUS_M = 6_371_008.8

COMPASS_NAMES = (
    "North",
    "Northeast",
    "East",
    "Southeast",
    "South",
    "Southwest",
    "West",
    "Northwest",
)

OCTANT_HEADINGS = (0.0, 45.0, 90.0, 135.0, 180.0, 225.0, 270.0, 315.0)


def normalize_heading(degrees: float) -> float:
    """Wraps a heading into [0, 360)."""
    d = degrees % 360.0
    # A tiny negative input can round up to exactly 360.0 under fmod.
    return 0.0 if d == 360.0 else d


def wrap_offset(degrees: float) -> float:
    """Wraps an angular difference into (-180, 180]."""
    d = degrees % 360.0
    if d > 180.0:
        d -= 360.0
    return d


@dataclass(frozen=True)
class GeoPoint:
    """A latitude/longitude pair in decimal degrees.

    Latitude must lie in [-90, 90]; longitude is normalized into
    (-180, 180] on construction.
    """

    lat: float
    lng: float

    def __post_init__(self) -> None:
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude out of range: {self.lat}")
        lng = self.lng % 360.0
        if lng > 180.0:
            lng -= 360.0
        object.__setattr__(self, "lng", lng)


class RelativePosition(enum.Enum):
    """Coarse position of a target relative to the user's heading."""

    IN_FRONT = "in_front"
    TO_YOUR_RIGHT = "to_your_right"
    BEHIND = "behind"
    TO_YOUR_LEFT = "to_your_left"


def haversine_distance(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance between two points, in meters."""
    lat1, lng1 = math.radians(a.lat), math.radians(a.lng)
    lat2, lng2 = math.radians(b.lat), math.radians(b.lng)
    s = (
        math.sin((lat2 - lat1) / 2.0) ** 2
        + math.cos(lat1) * math.cos(lat2) * math.sin((lng2 - lng1) / 2.0) ** 2
    )
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(s)))


def initial_bearing(origin: GeoPoint, target: GeoPoint) -> float:
    """Forward azimuth of the great circle from origin to target, in [0, 360).

    Raises:
        ValueError: if the points coincide (the bearing is undefined;
            callers must handle "already there" themselves).
    """
    if origin == target:
        raise ValueError("bearing undefined for coincident points")
    lat1, lng1 = math.radians(origin.lat), math.radians(origin.lng)
    lat2, lng2 = math.radians(target.lat), math.radians(target.lng)
    dlng = lng2 - lng1
    y = math.sin(dlng) * math.cos(lat2)
    x = math.cos(lat1) * math.sin(lat2) - math.sin(lat1) * math.cos(lat2) * math.cos(dlng)
    return math.degrees(math.atan2(y, x)) % 360.0


def destination_point(origin: GeoPoint, bearing: float, distance_m: float) -> GeoPoint:
    """Point reached by travelling distance_m along a great circle at bearing."""
    delta = distance_m / EARTH_RADIUS_M
    theta = math.radians(bearing)
    lat1, lng1 = math.radians(origin.lat), math.radians(origin.lng)
    lat2 = math.asin(
        math.sin(lat1) * math.cos(delta) + math.cos(lat1) * math.sin(delta) * math.cos(theta)
    )
    lng2 = lng1 + math.atan2(
        math.sin(theta) * math.sin(delta) * math.cos(lat1),
        math.cos(delta) - math.sin(lat1) * math.sin(lat2),
    )
    return GeoPoint(math.degrees(lat2), math.degrees(lng2))


def octant_index(heading: float) -> int:
    """Index 0..7 of the octant nearest to heading; ties snap clockwise.

    337.5 is exactly between Northwest and North and resolves to North.
    """
    h = normalize_heading(heading)
    return int(math.floor(h / 45.0 + 0.5)) % 8


def snap_to_octant(heading: float) -> float:
    """Nearest octant heading (0, 45, ..., 315); ties snap clockwise."""
    return OCTANT_HEADINGS[octant_index(heading)]


def compass_name(heading: float) -> str:
    """Cardinal/intercardinal name of the octant nearest to heading."""
    return COMPASS_NAMES[octant_index(heading)]


def relative_heading(target_bearing: float, user_heading: float) -> float:
    """Signed shortest angular difference target - user, positive clockwise.

    Result lies in (-180, 180]; -90 means the target is due left.
    """
    return wrap_offset(target_bearing - user_heading)


def relative_position(offset: float) -> RelativePosition:
    """Buckets a relative offset into one of four positions.

    In front iff |o| < 45; to your right iff 45 <= o < 135; to your
    left iff -135 < o <= -45; behind otherwise (|o| >= 135). The four
    half-open intervals partition (-180, 180].
    """
    if abs(offset) < 45.0:
        return RelativePosition.IN_FRONT
    if 45.0 <= offset < 135.0:
        return RelativePosition.TO_YOUR_RIGHT
    if -135.0 < offset <= -45.0:
        return RelativePosition.TO_YOUR_LEFT
    return RelativePosition.BEHIND


def local_xy(center: GeoPoint, p: GeoPoint) -> tuple[float, float]:
    """Equirectangular tangent-plane projection of p around center, in meters.

    x grows east, y grows north. Only valid for street-scale offsets,
    which is all the grid queries need.
    """
    x = math.radians(wrap_offset(p.lng - center.lng)) * math.cos(math.radians(center.lat))
    y = math.radians(p.lat - center.lat)
    return x * EARTH_RADIUS_M, y * EARTH_RADIUS_M
