"""Deterministic synthetic worlds for tests, demos, and benchmarks.

Every builder returns a fully validated World with hand-placed
geometry. Positions are derived from a base coordinate plus east/north
meter offsets on the local tangent plane, so distances and bearings in
assertions come out as round numbers.
"""

from __future__ import annotations

import math

from .geo import EARTH_RADIUS_M, GeoPoint
from .world import (
    PanoLink,
    Panorama,
    Place,
    Road,
    StreetAddress,
    ViewDescriptor,
    World,
)

SEATTLE = GeoPoint(47.6097, -122.3331)
ACROPOLIS = GeoPoint(37.9715323, 23.7257492)
BANKSIDE = GeoPoint(51.5080500, -0.0972170)


def point_at(base: GeoPoint, east_m: float, north_m: float) -> GeoPoint:
    """Exact inverse of the tangent-plane projection used by grid queries."""
    dlat = math.degrees(north_m / EARTH_RADIUS_M)
    dlng = math.degrees(east_m / (EARTH_RADIUS_M * math.cos(math.radians(base.lat))))
    return GeoPoint(base.lat + dlat, base.lng + dlng)


def _addr(road: str, city: str = "Ravenna", region: str = "Washington",
          country: str = "United States", number: str | None = None) -> StreetAddress:
    return StreetAddress(road_name=road, city=city, state_province=region,
                         country=country, street_number=number)


def _road_ew(base: GeoPoint, name: str, north_m: float, reach: float = 400.0) -> Road:
    return Road(name=name, geometry=(
        point_at(base, -reach, north_m), point_at(base, reach, north_m)))


def _road_ns(base: GeoPoint, name: str, east_m: float, reach: float = 400.0) -> Road:
    return Road(name=name, geometry=(
        point_at(base, east_m, -reach), point_at(base, east_m, reach)))


def four_way_world(links: str = "full", arm_m: float = 8.0) -> World:
    """A 4-way crossing with panos on every arm and tunable link sparsity.

    links: "full"  - center linked to all four arms
           "ew"    - center linked east and west only
           "corner" - center linked north and east only
    Movement availability from the spatial graph is {N, E, S, W} in all
    three variants; link-only traversal sees 4, 2, or 2 directions.
    """
    base = SEATTLE
    ns_road, ew_road = "Latona Avenue", "Meridian Street"
    arms = {
        "n": (0.0, arm_m, 0.0, ns_road),
        "e": (arm_m, 0.0, 90.0, ew_road),
        "s": (0.0, -arm_m, 180.0, ns_road),
        "w": (-arm_m, 0.0, 270.0, ew_road),
    }
    linked = {"full": ("n", "e", "s", "w"), "ew": ("e", "w"), "corner": ("n", "e")}[links]
    center_links = tuple(
        PanoLink(target_id=k, heading=arms[k][2], description=arms[k][3]) for k in linked
    )
    panos = [
        Panorama(id="x", location=base, address=_addr(ns_road, number="4100"),
                 capture_date="2024-06", links=center_links)
    ]
    for key, (east, north, heading, road) in arms.items():
        back = ()
        if key in linked:
            back = (PanoLink(target_id="x", heading=(heading + 180.0) % 360.0,
                             description=road),)
        panos.append(
            Panorama(id=key, location=point_at(base, east, north),
                     address=_addr(road), capture_date="2024-06", links=back))
    roads = (_road_ns(base, ns_road, 0.0), _road_ew(base, ew_road, 0.0))
    return World(panos=tuple(panos), places=(), roads=roads, imagery={},
                 meta={"schema_version": 1, "name": f"four-way-{links}"})


def crossroads_world(cross_at_m: float = 41.0) -> World:
    """A north-running road meeting a cross street, for ray-walk tests.

    The crossing sits cross_at_m north of the start pano "c0". With the
    default 41 m the first ray sample whose search square reaches the
    cross street is the third (45 m out).
    """
    base = SEATTLE
    main, cross = "Burke Avenue", "Crossing Street"
    spacing = cross_at_m / 5.0
    panos = []
    for i in range(6):
        north = i * spacing
        panos.append(
            Panorama(id=f"c{i}", location=point_at(base, 0.0, north),
                     address=_addr(main, number=str(4000 + 10 * i)),
                     capture_date="2024-09"))
    for side, east in (("w", -8.0), ("e", 8.0)):
        panos.append(
            Panorama(id=f"x{side}", location=point_at(base, east, cross_at_m),
                     address=_addr(cross), capture_date="2024-09"))
    roads = (_road_ns(base, main, 0.0), _road_ew(base, cross, cross_at_m))
    return World(panos=tuple(panos), places=(), roads=roads, imagery={},
                 meta={"schema_version": 1, "name": "crossroads"})


def straight_road_world(length_m: float = 117.6, spacing_m: float = 9.8) -> World:
    """Panos every spacing_m along a single north-running road.

    The default spacing stays clear of the 10 m search-square boundary
    and the 70 m jump cap, so containment never rides on float noise.
    """
    base = SEATTLE
    count = round(length_m / spacing_m) + 1
    panos = tuple(
        Panorama(id=f"r{i:02d}", location=point_at(base, 0.0, i * spacing_m),
                 address=_addr("Corliss Avenue", number=str(5000 + i)),
                 capture_date="2024-03")
        for i in range(count)
    )
    roads = (_road_ns(base, "Corliss Avenue", 0.0, reach=length_m + 100.0),)
    return World(panos=panos, places=(), roads=roads, imagery={},
                 meta={"schema_version": 1, "name": "straight-road"})


def grid_city(n: int = 50, spacing_m: float = 8.0) -> World:
    """An n x n block of panos on crossing avenues and streets.

    Pano g{i}_{j} sits i*spacing east and j*spacing north of the base
    corner. Orthogonal neighbors are one spacing apart, so the default
    8 m keeps both orthogonal and diagonal neighbors inside the 20 m
    search square while orthogonal steps stay in the 5-15 m band.
    """
    base = GeoPoint(45.0, -93.0)
    reach = (n - 1) * spacing_m
    panos = []
    for i in range(n):
        for j in range(n):
            panos.append(
                Panorama(
                    id=f"g{i:03d}_{j:03d}",
                    location=point_at(base, i * spacing_m, j * spacing_m),
                    address=_addr(f"Street {j}", city="Gridville", region="Minnesota",
                                  number=str(100 + i)),
                    capture_date="2023-11",
                )
            )
    roads = []
    for j in range(n):
        roads.append(Road(name=f"Street {j}", geometry=(
            point_at(base, -20.0, j * spacing_m),
            point_at(base, reach + 20.0, j * spacing_m))))
    for i in range(n):
        roads.append(Road(name=f"Avenue {i}", geometry=(
            point_at(base, i * spacing_m, -20.0),
            point_at(base, i * spacing_m, reach + 20.0))))
    places = (
        Place(id="gc_cafe", display_name="Grid City Coffee", place_type="cafe",
              location=point_at(base, 3.0 * spacing_m, 2.0 * spacing_m + 4.0)),
        Place(id="gc_hall", display_name="Gridville City Hall", place_type="city hall",
              location=point_at(base, (n // 2) * spacing_m + 3.0, (n // 2) * spacing_m)),
    )
    return World(panos=tuple(panos), places=places, roads=tuple(roads), imagery={},
                 meta={"schema_version": 1, "name": f"grid-city-{n}"})


def teleport_world() -> World:
    """Two far-apart neighborhoods for long-distance teleport messages.

    An Athens pano beside the Acropolis, and a London pano at 38
    Bankside with four places inside 50 m (the searched theater sits
    exactly 26 m due south) plus arm panos giving four movement
    directions. A lighthouse place 5 km offshore has no pano within a
    kilometer, for the no-imagery failure path.
    """
    athens_addr = StreetAddress(road_name="Dionysiou Areopagitou", city="Athens",
                                country="Greece")
    athens_pano = Panorama(id="ath0", location=point_at(ACROPOLIS, 2.0, -6.0),
                           address=athens_addr, capture_date="2024-10",
                           photographer="Google")
    london_addr = StreetAddress(road_name="Bankside", city="London",
                                state_province="England", country="United Kingdom",
                                street_number="38")
    london = BANKSIDE
    # The south neighbor is a distant linked pano rather than a grid one
    # so the landing pano stays strictly nearest to the searched theater.
    panos = [athens_pano,
             Panorama(id="bk0", location=london, address=london_addr,
                      capture_date="2025-02", photographer="Google",
                      links=(PanoLink(target_id="bk_s", heading=180.0,
                                      description="New Globe Walk"),)),
             Panorama(id="bk_s", location=point_at(london, 0.0, -60.0),
                      address=StreetAddress(road_name="New Globe Walk", city="London",
                                            state_province="England",
                                            country="United Kingdom"),
                      capture_date="2025-02", photographer="Google",
                      links=(PanoLink(target_id="bk0", heading=0.0,
                                      description="New Globe Walk"),))]
    arm_roads = {"n": "Bankside", "e": "Bankside", "w": "New Globe Walk"}
    offsets = {"n": (0.0, 8.0), "e": (8.0, 0.0), "w": (-8.0, 0.0)}
    for key, (east, north) in offsets.items():
        addr = StreetAddress(road_name=arm_roads[key], city="London",
                             state_province="England", country="United Kingdom")
        panos.append(Panorama(id=f"bk_{key}", location=point_at(london, east, north),
                              address=addr, capture_date="2025-02",
                              photographer="Google"))
    places = (
        Place(id="acropolis", display_name="the Acropolis of Athens",
              place_type="historical landmark", location=ACROPOLIS,
              editorial_summary="Ancient citadel above the city of Athens."),
        Place(id="globe", display_name="Shakespeare's Globe",
              place_type="performing arts theater",
              location=point_at(london, 0.0, -26.0),
              editorial_summary="Reconstruction of the Elizabethan playhouse."),
        Place(id="swan", display_name="Swan Bar & Restaurant",
              place_type="restaurant", location=point_at(london, 30.0, -12.0)),
        Place(id="gallery", display_name="Bankside Gallery", place_type="art gallery",
              location=point_at(london, -38.0, 11.0)),
        Place(id="ferrymans", display_name="Ferryman's Seat",
              place_type="historical landmark", location=point_at(london, -46.0, -9.0)),
        Place(id="tate", display_name="Tate Modern", place_type="art museum",
              location=point_at(london, 120.0, 20.0)),
        Place(id="lighthouse", display_name="Gallions Reach Lighthouse",
              place_type="lighthouse", location=point_at(london, 5000.0, 0.0)),
    )
    roads = (
        _road_ew(london, "Bankside", 0.0, reach=300.0),
        _road_ns(london, "New Globe Walk", 0.0, reach=200.0),
        Road(name="Dionysiou Areopagitou", geometry=(
            point_at(ACROPOLIS, -150.0, -6.0), point_at(ACROPOLIS, 150.0, -6.0))),
    )
    return World(panos=tuple(panos), places=places, roads=roads, imagery={},
                 meta={"schema_version": 1, "name": "teleport-pair"})


def poi_world() -> World:
    """Three annotated street scenes: a bus stop, a playground edge, and
    a restaurant row. Octant view tags are the ground truth the mock AI
    answers from.
    """
    base = GeoPoint(47.6812, -122.3260)
    road = "65th Street"
    tags = {
        "s0": {
            0: ("bus_stop", "bus_stop_shelter", "bench"),
            45: ("garbage_can",),
            90: ("crosswalk", "traffic_light"),
            135: (),
            180: ("parked_car",),
            225: ("fire_hydrant",),
            270: ("mailbox",),
            315: ("street_tree",),
        },
        "s1": {
            0: ("playground", "swing_set", "slide"),
            45: ("climbing_structure",),
            90: ("park_bench", "water_fountain"),
            135: ("bike_rack",),
            180: ("crosswalk",),
            225: (),
            270: ("garbage_can",),
            315: ("picnic_table",),
        },
        "s2": {
            0: ("restaurant", "outdoor_seating", "sidewalk_sign"),
            45: ("bike_rack",),
            90: (),
            135: ("parked_car",),
            180: ("bus_stop",),
            225: ("street_tree",),
            270: ("crosswalk",),
            315: ("newspaper_box",),
        },
    }
    panos = []
    imagery = {}
    for idx, pid in enumerate(("s0", "s1", "s2")):
        panos.append(
            Panorama(id=pid, location=point_at(base, idx * 9.0, 0.0),
                     address=_addr(road, number=str(200 + idx)),
                     capture_date="2025-02", photographer="Google"))
        imagery[pid] = {
            str(h): ViewDescriptor(image_ref=f"views/{pid}_{h}.png", tags=t)
            for h, t in tags[pid].items()
        }
    places = (
        Place(id="play", display_name="Maple Leaf Playground", place_type="playground",
              location=point_at(base, 9.0, 38.0)),
        Place(id="diner", display_name="Torchio Trattoria", place_type="restaurant",
              location=point_at(base, 18.0, 12.0)),
        Place(id="market", display_name="Rising Sun Produce", place_type="grocery store",
              location=point_at(base, -30.0, -14.0)),
    )
    roads = (_road_ew(base, road, 0.0),)
    return World(panos=tuple(panos), places=places, roads=roads, imagery=imagery,
                 meta={"schema_version": 1, "name": "poi-scenes"})


BUILTIN_FIXTURES = {
    "four-way-full": lambda: four_way_world("full"),
    "four-way-ew": lambda: four_way_world("ew"),
    "four-way-corner": lambda: four_way_world("corner"),
    "crossroads": crossroads_world,
    "straight-road": straight_road_world,
    "grid-city": lambda: grid_city(12),
    "teleport-pair": teleport_world,
    "poi-scenes": poi_world,
}
