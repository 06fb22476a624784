"""World model: panoramas, places, roads, fixtures, and spatial queries.

A world is immutable after load and safe to share across threads. The
same object satisfies the four provider protocols that a live
map-service adapter would implement (panoramas, places, roads, text
search), so the engine never needs to know whether it is talking to a
fixture or a real backend.
"""

from __future__ import annotations

import io
import json
import math
import re
from dataclasses import dataclass, field
from typing import IO, Iterable, Protocol

from .errors import FixtureIntegrityError, FixtureParseError, NotFoundError
from .geo import EARTH_RADIUS_M, GeoPoint, OCTANT_HEADINGS, haversine_distance, local_xy, normalize_heading

SCHEMA_VERSION = 1

_CAPTURE_DATE_RE = re.compile(r"^\d{4}-(0[1-9]|1[0-2])$")
_OCTANT_KEYS = tuple(str(int(h)) for h in OCTANT_HEADINGS)

# Index cell size; queries span a handful of cells at the engine's scales.
_CELL_M = 64.0
_DEG_PER_M = 180.0 / (math.pi * EARTH_RADIUS_M)
_CELL_DEG = _CELL_M * _DEG_PER_M


@dataclass(frozen=True)
class StreetAddress:
    """Structured street address attached to a panorama."""

    road_name: str
    city: str
    country: str
    street_number: str | None = None
    neighborhood: str | None = None
    state_province: str | None = None

    def __post_init__(self) -> None:
        if not self.road_name:
            raise ValueError("road_name must be non-empty")
        if not self.country:
            raise ValueError("country must be non-empty")

    def street_label(self) -> str:
        """"38 Bankside" when a number is known, else just the road name."""
        if self.street_number:
            return f"{self.street_number} {self.road_name}"
        return self.road_name

    def locality_parts(self) -> tuple[str, ...]:
        """City plus state/province, falling back to country."""
        region = self.state_province or self.country
        return tuple(p for p in (self.city, region) if p)

    def locality_label(self) -> str:
        return ", ".join(self.locality_parts())

    def oneline(self) -> str:
        parts = (self.street_label(),) + self.locality_parts()
        return ", ".join(parts)


@dataclass(frozen=True)
class PanoLink:
    """Built-in connection from one panorama to another."""

    target_id: str
    heading: float
    description: str = ""


@dataclass(frozen=True)
class Panorama:
    """A geolocated navigable node."""

    id: str
    location: GeoPoint
    address: StreetAddress
    capture_date: str
    photographer: str = ""
    links: tuple[PanoLink, ...] = ()


@dataclass(frozen=True)
class Place:
    """A named point of interest."""

    id: str
    display_name: str
    place_type: str
    location: GeoPoint
    editorial_summary: str | None = None

    def __post_init__(self) -> None:
        if not self.display_name:
            raise ValueError("display_name must be non-empty")


@dataclass(frozen=True)
class Road:
    """A named polyline of road geometry."""

    name: str
    geometry: tuple[GeoPoint, ...]

    def __post_init__(self) -> None:
        if len(self.geometry) < 2:
            raise ValueError(f"road {self.name!r} needs at least 2 vertices")
        for a, b in zip(self.geometry, self.geometry[1:]):
            if a == b:
                raise ValueError(f"road {self.name!r} has consecutive duplicate vertices")


@dataclass(frozen=True)
class ViewDescriptor:
    """One octant of a panorama: an image reference plus ground-truth tags."""

    image_ref: str = ""
    tags: tuple[str, ...] = ()


@dataclass(frozen=True)
class ViewCapture:
    """A square crop of the user's current view, as handed to the AI."""

    pano_id: str
    heading: float
    image_ref: str
    width: int = 640
    height: int = 640


class _PointIndex:
    """Uniform lat/lng cell index over id -> GeoPoint entries."""

    def __init__(self, entries: Iterable[tuple[str, GeoPoint]]):
        self._cells: dict[tuple[int, int], list[str]] = {}
        self._points: dict[str, GeoPoint] = {}
        for key, p in entries:
            self._points[key] = p
            self._cells.setdefault(self._cell(p), []).append(key)

    @staticmethod
    def _cell(p: GeoPoint) -> tuple[int, int]:
        return (math.floor(p.lat / _CELL_DEG), math.floor(p.lng / _CELL_DEG))

    def candidates_in_box(self, center: GeoPoint, half_extent_m: float) -> Iterable[str]:
        dlat = half_extent_m * _DEG_PER_M + 1e-9
        coslat = max(math.cos(math.radians(center.lat)), 0.01)
        dlng = half_extent_m * _DEG_PER_M / coslat + 1e-9
        lat_lo = math.floor((center.lat - dlat) / _CELL_DEG)
        lat_hi = math.floor((center.lat + dlat) / _CELL_DEG)
        lng_lo = math.floor((center.lng - dlng) / _CELL_DEG)
        lng_hi = math.floor((center.lng + dlng) / _CELL_DEG)
        for ci in range(lat_lo, lat_hi + 1):
            for cj in range(lng_lo, lng_hi + 1):
                yield from self._cells.get((ci, cj), ())


class _SegmentIndex:
    """Cell index over polyline segments, keyed by (road_idx, seg_idx)."""

    def __init__(self, roads: tuple[Road, ...]):
        self._cells: dict[tuple[int, int], list[tuple[int, int]]] = {}
        for ri, road in enumerate(roads):
            for si, (a, b) in enumerate(zip(road.geometry, road.geometry[1:])):
                lat_lo = math.floor(min(a.lat, b.lat) / _CELL_DEG)
                lat_hi = math.floor(max(a.lat, b.lat) / _CELL_DEG)
                lng_lo = math.floor(min(a.lng, b.lng) / _CELL_DEG)
                lng_hi = math.floor(max(a.lng, b.lng) / _CELL_DEG)
                for ci in range(lat_lo, lat_hi + 1):
                    for cj in range(lng_lo, lng_hi + 1):
                        self._cells.setdefault((ci, cj), []).append((ri, si))

    def candidates_in_box(self, center: GeoPoint, half_extent_m: float) -> set[tuple[int, int]]:
        dlat = half_extent_m * _DEG_PER_M + 1e-9
        coslat = max(math.cos(math.radians(center.lat)), 0.01)
        dlng = half_extent_m * _DEG_PER_M / coslat + 1e-9
        lat_lo = math.floor((center.lat - dlat) / _CELL_DEG)
        lat_hi = math.floor((center.lat + dlat) / _CELL_DEG)
        lng_lo = math.floor((center.lng - dlng) / _CELL_DEG)
        lng_hi = math.floor((center.lng + dlng) / _CELL_DEG)
        found: set[tuple[int, int]] = set()
        for ci in range(lat_lo, lat_hi + 1):
            for cj in range(lng_lo, lng_hi + 1):
                found.update(self._cells.get((ci, cj), ()))
        return found


def _segment_hits_square(x1: float, y1: float, x2: float, y2: float, h: float) -> bool:
    """Inclusive segment-vs-axis-aligned-square test in tangent-plane meters."""
    if max(x1, x2) < -h or min(x1, x2) > h or max(y1, y2) < -h or min(y1, y2) > h:
        return False
    if (-h <= x1 <= h and -h <= y1 <= h) or (-h <= x2 <= h and -h <= y2 <= h):
        return True
    dx, dy = x2 - x1, y2 - y1
    t0, t1 = 0.0, 1.0
    for p, q in ((-dx, x1 + h), (dx, h - x1), (-dy, y1 + h), (dy, h - y1)):
        if p == 0.0:
            if q < 0.0:
                return False
        else:
            r = q / p
            if p < 0.0:
                t0 = max(t0, r)
            else:
                t1 = min(t1, r)
            if t0 > t1:
                return False
    return True


@dataclass
class World:
    """A fully validated, immutable navigable world."""

    panos: tuple[Panorama, ...]
    places: tuple[Place, ...]
    roads: tuple[Road, ...]
    imagery: dict[str, dict[str, ViewDescriptor]]
    meta: dict

    _pano_by_id: dict[str, Panorama] = field(init=False, repr=False, compare=False)
    _place_by_id: dict[str, Place] = field(init=False, repr=False, compare=False)
    _pano_index: _PointIndex = field(init=False, repr=False, compare=False)
    _road_index: _SegmentIndex = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        self._pano_by_id = {}
        for pano in self.panos:
            if pano.id in self._pano_by_id:
                raise FixtureIntegrityError(f"duplicate pano id {pano.id!r}")
            self._pano_by_id[pano.id] = pano
        self._place_by_id = {}
        for place in self.places:
            if place.id in self._place_by_id:
                raise FixtureIntegrityError(f"duplicate place id {place.id!r}")
            self._place_by_id[place.id] = place
        for pano in self.panos:
            for link in pano.links:
                if link.target_id not in self._pano_by_id:
                    raise FixtureIntegrityError(
                        f"pano {pano.id!r} links to missing pano {link.target_id!r}"
                    )
        for pano_id in self.imagery:
            if pano_id not in self._pano_by_id:
                raise FixtureIntegrityError(f"imagery references missing pano {pano_id!r}")
        # Every pano carries all 8 octant views; absent ones become empty.
        for pano in self.panos:
            views = self.imagery.setdefault(pano.id, {})
            if views and set(views) != set(_OCTANT_KEYS):
                raise FixtureIntegrityError(
                    f"imagery for pano {pano.id!r} must cover exactly the 8 octants"
                )
            for key in _OCTANT_KEYS:
                views.setdefault(key, ViewDescriptor())
        self._pano_index = _PointIndex((p.id, p.location) for p in self.panos)
        self._road_index = _SegmentIndex(self.roads)

    # -- lookups ---------------------------------------------------------

    def get_pano(self, pano_id: str) -> Panorama:
        try:
            return self._pano_by_id[pano_id]
        except KeyError:
            raise NotFoundError(f"unknown pano id {pano_id!r}") from None

    def get_place(self, place_id: str) -> Place:
        try:
            return self._place_by_id[place_id]
        except KeyError:
            raise NotFoundError(f"unknown place id {place_id!r}") from None

    def view(self, pano_id: str, heading: float) -> ViewDescriptor:
        """View descriptor for the octant nearest the given heading."""
        from .geo import snap_to_octant

        self.get_pano(pano_id)
        return self.imagery[pano_id][str(int(snap_to_octant(heading)))]

    def capture_view(self, pano_id: str, heading: float, size: int = 640) -> ViewCapture:
        desc = self.view(pano_id, heading)
        return ViewCapture(
            pano_id=pano_id,
            heading=normalize_heading(heading),
            image_ref=desc.image_ref,
            width=size,
            height=size,
        )

    # -- spatial queries -------------------------------------------------

    def panos_in_grid(self, center: GeoPoint, half_extent: float) -> list[tuple[Panorama, float]]:
        """Panos inside the axis-aligned square of half side half_extent meters.

        Containment is inclusive and evaluated on the tangent plane at
        center; each result carries its haversine distance from center.
        """
        out = []
        for pid in self._pano_index.candidates_in_box(center, half_extent):
            pano = self._pano_by_id[pid]
            x, y = local_xy(center, pano.location)
            if abs(x) <= half_extent and abs(y) <= half_extent:
                out.append((pano, haversine_distance(center, pano.location)))
        out.sort(key=lambda t: (t[1], t[0].id))
        return out

    def places_near(self, origin: GeoPoint, radius: float) -> list[tuple[Place, float]]:
        """Places within radius meters (inclusive), sorted by distance then id."""
        out = []
        for place in self.places:
            d = haversine_distance(origin, place.location)
            if d <= radius:
                out.append((place, d))
        out.sort(key=lambda t: (t[1], t[0].id))
        return out

    def roads_in_grid(self, center: GeoPoint, half_extent: float) -> list[Road]:
        """Roads with at least one segment touching the square, in fixture order."""
        hit_roads: set[int] = set()
        for ri, si in self._road_index.candidates_in_box(center, half_extent):
            if ri in hit_roads:
                continue
            road = self.roads[ri]
            a, b = road.geometry[si], road.geometry[si + 1]
            x1, y1 = local_xy(center, a)
            x2, y2 = local_xy(center, b)
            if _segment_hits_square(x1, y1, x2, y2, half_extent):
                hit_roads.add(ri)
        return [self.roads[ri] for ri in sorted(hit_roads)]

    def nearest_pano(self, p: GeoPoint) -> Panorama:
        """The pano closest to p; ties break toward the smaller id."""
        if not self.panos:
            raise NotFoundError("world has no panoramas")
        best = min(self.panos, key=lambda pano: (haversine_distance(p, pano.location), pano.id))
        return best

    def search_text(self, query: str) -> list[Place]:
        """Deterministic text search over place names for teleporting.

        Ranking: exact name match, then prefix, then substring, then
        all-words-present; ties break by place id.
        """
        q = query.strip().lower()
        if not q:
            return []
        ranked: list[tuple[int, str, Place]] = []
        for place in self.places:
            name = place.display_name.lower()
            if name == q:
                rank = 0
            elif name.startswith(q):
                rank = 1
            elif q in name:
                rank = 2
            elif all(w in name for w in q.split()):
                rank = 3
            else:
                continue
            ranked.append((rank, place.id, place))
        ranked.sort(key=lambda t: (t[0], t[1]))
        return [place for _, _, place in ranked]


class PanoramaProvider(Protocol):
    def get_pano(self, pano_id: str) -> Panorama: ...

    def panos_in_grid(self, center: GeoPoint, half_extent: float) -> list[tuple[Panorama, float]]: ...

    def nearest_pano(self, p: GeoPoint) -> Panorama: ...


class PlacesProvider(Protocol):
    def places_near(self, origin: GeoPoint, radius: float) -> list[tuple[Place, float]]: ...


class RoadsProvider(Protocol):
    def roads_in_grid(self, center: GeoPoint, half_extent: float) -> list[Road]: ...


class TextSearchProvider(Protocol):
    def search_text(self, query: str) -> list[Place]: ...


# -- fixture I/O ---------------------------------------------------------


def _require(doc: dict, key: str, typ, path: str, optional: bool = False, default=None):
    if key not in doc or doc[key] is None:
        if optional:
            return default
        raise FixtureParseError(f"{path}.{key}", "missing required field")
    value = doc[key]
    if typ is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, typ) or isinstance(value, bool) and typ is not bool:
        raise FixtureParseError(f"{path}.{key}", f"expected {typ.__name__}")
    return value


def _parse_point(doc: dict, path: str) -> GeoPoint:
    lat = _require(doc, "lat", float, path)
    lng = _require(doc, "lng", float, path)
    try:
        return GeoPoint(lat, lng)
    except ValueError as e:
        raise FixtureParseError(path, str(e)) from None


def _parse_address(doc, path: str) -> StreetAddress:
    if not isinstance(doc, dict):
        raise FixtureParseError(path, "expected object")
    try:
        return StreetAddress(
            road_name=_require(doc, "road", str, path),
            city=_require(doc, "city", str, path, optional=True, default=""),
            country=_require(doc, "country", str, path),
            street_number=_require(doc, "street_number", str, path, optional=True),
            neighborhood=_require(doc, "neighborhood", str, path, optional=True),
            state_province=_require(doc, "state_province", str, path, optional=True),
        )
    except ValueError as e:
        raise FixtureParseError(path, str(e)) from None


def _parse_pano(doc, path: str) -> Panorama:
    if not isinstance(doc, dict):
        raise FixtureParseError(path, "expected object")
    pano_id = _require(doc, "id", str, path)
    capture_date = _require(doc, "capture_date", str, path)
    if not _CAPTURE_DATE_RE.match(capture_date):
        raise FixtureParseError(f"{path}.capture_date", "expected YYYY-MM")
    links = []
    for i, link_doc in enumerate(_require(doc, "links", list, path, optional=True, default=[])):
        link_path = f"{path}.links[{i}]"
        if not isinstance(link_doc, dict):
            raise FixtureParseError(link_path, "expected object")
        links.append(
            PanoLink(
                target_id=_require(link_doc, "target", str, link_path),
                heading=normalize_heading(_require(link_doc, "heading", float, link_path)),
                description=_require(link_doc, "description", str, link_path, optional=True, default=""),
            )
        )
    return Panorama(
        id=pano_id,
        location=_parse_point(doc, path),
        address=_parse_address(doc.get("address"), f"{path}.address"),
        capture_date=capture_date,
        photographer=_require(doc, "photographer", str, path, optional=True, default=""),
        links=tuple(links),
    )


def _parse_place(doc, path: str) -> Place:
    if not isinstance(doc, dict):
        raise FixtureParseError(path, "expected object")
    try:
        return Place(
            id=_require(doc, "id", str, path),
            display_name=_require(doc, "name", str, path),
            place_type=_require(doc, "type", str, path),
            location=_parse_point(doc, path),
            editorial_summary=_require(doc, "summary", str, path, optional=True),
        )
    except ValueError as e:
        raise FixtureParseError(path, str(e)) from None


def _parse_road(doc, path: str) -> Road:
    if not isinstance(doc, dict):
        raise FixtureParseError(path, "expected object")
    name = _require(doc, "name", str, path)
    points = []
    raw_points = _require(doc, "points", list, path)
    for i, pair in enumerate(raw_points):
        pt_path = f"{path}.points[{i}]"
        if not isinstance(pair, list) or len(pair) != 2:
            raise FixtureParseError(pt_path, "expected [lat, lng] pair")
        points.append(_parse_point({"lat": pair[0], "lng": pair[1]}, pt_path))
    try:
        return Road(name=name, geometry=tuple(points))
    except ValueError as e:
        raise FixtureParseError(path, str(e)) from None


def _parse_imagery(doc, path: str) -> dict[str, dict[str, ViewDescriptor]]:
    if not isinstance(doc, dict):
        raise FixtureParseError(path, "expected object")
    imagery: dict[str, dict[str, ViewDescriptor]] = {}
    for pano_id, views_doc in doc.items():
        views_path = f"{path}.{pano_id}"
        if not isinstance(views_doc, dict):
            raise FixtureParseError(views_path, "expected object")
        views: dict[str, ViewDescriptor] = {}
        for key, view_doc in views_doc.items():
            view_path = f"{views_path}.{key}"
            if key not in _OCTANT_KEYS:
                raise FixtureParseError(view_path, "octant key must be one of 0,45,...,315")
            if not isinstance(view_doc, dict):
                raise FixtureParseError(view_path, "expected object")
            tags = _require(view_doc, "tags", list, view_path, optional=True, default=[])
            if not all(isinstance(t, str) for t in tags):
                raise FixtureParseError(f"{view_path}.tags", "expected list of strings")
            views[key] = ViewDescriptor(
                image_ref=_require(view_doc, "image", str, view_path, optional=True, default=""),
                tags=tuple(tags),
            )
        imagery[pano_id] = views
    return imagery


def load_fixture(source: bytes | str | IO) -> World:
    """Parses and validates a world fixture document.

    Accepts raw bytes/str or a readable binary/text stream. Raises
    FixtureParseError with a dotted path for schema problems and
    FixtureIntegrityError for dangling references.
    """
    if isinstance(source, (bytes, bytearray)):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        data = source.read()
        text = data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FixtureParseError("$", f"invalid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise FixtureParseError("$", "top level must be an object")

    meta = _require(doc, "meta", dict, "$", optional=True, default={"schema_version": SCHEMA_VERSION})
    version = meta.get("schema_version")
    if version != SCHEMA_VERSION:
        raise FixtureParseError("$.meta.schema_version", f"unsupported version {version!r}")

    panos = tuple(
        _parse_pano(p, f"$.panos[{i}]")
        for i, p in enumerate(_require(doc, "panos", list, "$"))
    )
    places = tuple(
        _parse_place(p, f"$.places[{i}]")
        for i, p in enumerate(_require(doc, "places", list, "$", optional=True, default=[]))
    )
    roads = tuple(
        _parse_road(r, f"$.roads[{i}]")
        for i, r in enumerate(_require(doc, "roads", list, "$", optional=True, default=[]))
    )
    imagery = _parse_imagery(doc.get("imagery", {}), "$.imagery")
    return World(panos=panos, places=places, roads=roads, imagery=imagery, meta=dict(meta))


def load_fixture_path(path: str) -> World:
    with open(path, "rb") as f:
        return load_fixture(f)


def world_to_doc(world: World) -> dict:
    """Serializes a world back to its fixture document form."""
    return {
        "meta": dict(world.meta),
        "panos": [
            {
                "id": p.id,
                "lat": p.location.lat,
                "lng": p.location.lng,
                "address": {
                    "street_number": p.address.street_number,
                    "road": p.address.road_name,
                    "neighborhood": p.address.neighborhood,
                    "city": p.address.city,
                    "state_province": p.address.state_province,
                    "country": p.address.country,
                },
                "capture_date": p.capture_date,
                "photographer": p.photographer,
                "links": [
                    {"target": l.target_id, "heading": l.heading, "description": l.description}
                    for l in p.links
                ],
            }
            for p in world.panos
        ],
        "places": [
            {
                "id": pl.id,
                "name": pl.display_name,
                "type": pl.place_type,
                "lat": pl.location.lat,
                "lng": pl.location.lng,
                "summary": pl.editorial_summary,
            }
            for pl in world.places
        ],
        "roads": [
            {"name": r.name, "points": [[pt.lat, pt.lng] for pt in r.geometry]}
            for r in world.roads
        ],
        "imagery": {
            pano_id: {
                key: {"image": v.image_ref, "tags": list(v.tags)}
                for key, v in sorted(views.items(), key=lambda kv: int(kv[0]))
            }
            for pano_id, views in sorted(world.imagery.items())
        },
    }


def dump_fixture(world: World) -> bytes:
    return json.dumps(world_to_doc(world), indent=1).encode("utf-8")


def save_fixture(world: World, path: str) -> None:
    with open(path, "wb") as f:
        f.write(dump_fixture(world))
