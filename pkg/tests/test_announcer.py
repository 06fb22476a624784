import random

import pytest

from streetnav.announcer import (
    LocalContext,
    NearbyEntry,
    build_local_context,
    format_distance,
    intersection_announcement,
    movement_announcement,
    nearby_places_announcement,
    no_move_announcement,
    pan_announcement,
    pano_metadata_announcement,
    teleport_announcement,
    visits_announcement,
    where_announcement,
)
from streetnav.config import NavConfig
from streetnav.fixtures import (
    SEATTLE,
    crossroads_world,
    point_at,
    straight_road_world,
    teleport_world,
)
from streetnav.geo import GeoPoint, relative_position
from streetnav.navgraph import build_egocentric_graph
from streetnav.session import FORWARD, NoMove, Session, VisitInfo
from streetnav.world import Panorama, Place, Road, StreetAddress, World

CFG = NavConfig()


def ctx_for(world, pano_id, heading, visit_count=1):
    pano = world.get_pano(pano_id)
    return build_local_context(world, pano, heading, CFG, visit_count=visit_count)


class TestFormatDistance:
    @pytest.mark.parametrize("meters,text", [
        (0.4, "0 meters"),
        (1.2, "1 meter"),
        (8.0, "8 meters"),
        (12.4, "12 meters"),
        (26.0, "26 meters"),
        (99.4, "99 meters"),
        (99.6, "100 meters"),
        (104.0, "100 meters"),
        (347.0, "350 meters"),
        (995.1, "1 km"),
        (999.9, "1 km"),
        (1_400.0, "1 km"),
        (1_500.0, "2 km"),
        (2_390_716.0, "2,391 km"),
    ])
    def test_rounding(self, meters, text):
        assert format_distance(meters) == text


class TestPan:
    def test_minimal_golden(self):
        world = straight_road_world()
        pano = world.get_pano("r12")  # north end: nothing further ahead
        g = build_egocentric_graph(world, pano, CFG)
        ctx = ctx_for(world, "r12", 0.0)
        msg = pan_announcement(315.0, 0.0, g, ctx, CFG)
        assert msg.text == "Now facing: North. You cannot move forward."
        assert msg.voice_channel == "Status"

    def test_forward_available_names_road(self):
        world = straight_road_world()
        pano = world.get_pano("r00")
        g = build_egocentric_graph(world, pano, CFG)
        ctx = ctx_for(world, "r00", 0.0)
        msg = pan_announcement(45.0, 0.0, g, ctx, CFG)
        assert "You can move forward along Corliss Avenue." in msg.text

    def test_facing_clause_respects_cone_and_distance(self):
        world = teleport_world()
        pano = world.get_pano("bk0")
        g = build_egocentric_graph(world, pano, CFG)
        ctx = ctx_for(world, "bk0", 180.0)
        msg = pan_announcement(135.0, 180.0, g, ctx, CFG)
        # The theater is 26 m dead ahead; the gallery is behind-right
        # and the restaurant is outside the 45 degree cone.
        assert "Shakespeare's Globe is 26 meters away." in msg.text
        assert "Bankside Gallery" not in msg.text
        ctx_north = ctx_for(world, "bk0", 0.0)
        msg_north = pan_announcement(225.0, 0.0, g, ctx_north, CFG)
        assert "Shakespeare's Globe" not in msg_north.text

    def test_fragments_concatenate_to_text(self):
        world = teleport_world()
        pano = world.get_pano("bk0")
        g = build_egocentric_graph(world, pano, CFG)
        ctx = ctx_for(world, "bk0", 180.0)
        msg = pan_announcement(135.0, 180.0, g, ctx, CFG)
        assert msg.text == " ".join(t for _, t in msg.fragments)


def synth_place(pid, name, type_="cafe", east=0.0, north=10.0):
    return Place(id=pid, display_name=name, place_type=type_,
                 location=point_at(SEATTLE, east, north))


def synth_ctx(road="Main Street", heading=0.0, entries=(), intersection=None,
              visit_count=1, pano_id="p"):
    addr = StreetAddress(road_name=road, city="Ravenna", country="United States")
    return LocalContext(pano_id=pano_id, address=addr, heading=heading,
                        at_intersection=intersection, nearby=tuple(entries),
                        visit_count=visit_count)


def entry(pid, name, dist, offset, type_="cafe"):
    return NearbyEntry(place=synth_place(pid, name, type_), distance=dist,
                       offset=offset, position=relative_position(offset).value)


def fake_move(world_pair=None, kind="step_forward", distance=8.0):
    addr = StreetAddress(road_name="Main Street", city="Ravenna",
                         country="United States")
    a = Panorama(id="a", location=SEATTLE, address=addr, capture_date="2024-01")
    b = Panorama(id="b", location=point_at(SEATTLE, 0, distance), address=addr,
                 capture_date="2024-01")
    from streetnav.session import MoveOutcome
    return MoveOutcome(kind=kind, from_pano=a, to_pano=b, heading=0.0,
                       distance=distance)


class TestMovementDiff:
    def test_unchanged_world_says_type_and_distance_only(self):
        prev = synth_ctx(entries=[entry("p1", "Corner Cafe", 20.0, 10.0)])
        new = synth_ctx(entries=[entry("p1", "Corner Cafe", 20.0, 10.0)])
        msg = movement_announcement(prev, new, fake_move(), CFG)
        assert msg.text == "You stepped forward 8 meters."

    def test_new_place_on_left(self):
        prev = synth_ctx()
        new = synth_ctx(entries=[entry("p1", "Starbucks Coffee", 12.0, -90.0)])
        msg = movement_announcement(prev, new, fake_move(), CFG)
        assert "Starbucks Coffee is now on your left 12 meters away." in msg.text

    def test_still_in_front_but_closer(self):
        prev = synth_ctx(entries=[entry("p1", "Starbucks Coffee", 45.0, 5.0)])
        new = synth_ctx(entries=[entry("p1", "Starbucks Coffee", 32.0, 5.0)])
        msg = movement_announcement(prev, new, fake_move(), CFG)
        assert "Starbucks Coffee is still in front of you but now 32 meters away." in msg.text

    def test_road_change_announced_once(self):
        prev = synth_ctx(road="Main Street")
        new = synth_ctx(road="Crossing Street")
        msg = movement_announcement(prev, new, fake_move(), CFG)
        assert "You are now on Crossing Street." in msg.text

    def test_same_road_not_reannounced(self):
        prev = synth_ctx(road="Main Street")
        new = synth_ctx(road="Main Street")
        msg = movement_announcement(prev, new, fake_move(), CFG)
        assert "Main Street" not in msg.text

    def test_intersection_arrival_and_departure(self):
        from streetnav.navgraph import IntersectionHit
        addr_pano = Panorama(
            id="p", location=SEATTLE,
            address=StreetAddress(road_name="Main Street", city="Ravenna",
                                  country="United States"),
            capture_date="2024-01")
        hit = IntersectionHit(location=SEATTLE, pano=addr_pano,
                              road_names=("Main Street", "Crossing Street"),
                              distance_from_origin=0.0)
        msg = movement_announcement(synth_ctx(), synth_ctx(intersection=hit),
                                    fake_move(), CFG)
        assert "You arrived at the intersection of Main Street and Crossing Street." in msg.text
        msg = movement_announcement(synth_ctx(intersection=hit), synth_ctx(),
                                    fake_move(), CFG)
        assert "You left the intersection of Main Street and Crossing Street." in msg.text
        msg = movement_announcement(synth_ctx(intersection=hit),
                                    synth_ctx(intersection=hit), fake_move(), CFG)
        assert "intersection" not in msg.text

    def test_revisit_notes_history(self):
        msg = movement_announcement(synth_ctx(), synth_ctx(visit_count=3),
                                    fake_move(), CFG)
        assert "You have been here before." in msg.text

    def test_jump_lead_mentions_intersection_kind(self):
        out = fake_move(kind="jump", distance=47.0)
        import dataclasses
        out = dataclasses.replace(out, jump_kind="ToIntersection")
        msg = movement_announcement(synth_ctx(), synth_ctx(), out, CFG)
        assert msg.text.startswith("You jumped 47 meters to the next intersection.")

    def test_diff_soundness_randomized(self):
        rng = random.Random(77)
        names = [f"Place {i}" for i in range(12)]
        for _ in range(300):
            def random_entries():
                out = []
                for i, name in enumerate(names):
                    if rng.random() < 0.4:
                        out.append(entry(f"pl{i}", name,
                                         rng.uniform(1, 49.5),
                                         rng.uniform(-179, 180)))
                return out
            prev_entries = random_entries()
            new_entries = random_entries()
            prev = synth_ctx(entries=prev_entries)
            new = synth_ctx(entries=new_entries)
            msg = movement_announcement(prev, new, fake_move(), CFG)
            prev_by_id = {e.place.id: e for e in prev_entries}
            for e in new_entries:
                old = prev_by_id.get(e.place.id)
                unchanged = (old is not None and old.position == e.position
                             and format_distance(old.distance) == format_distance(e.distance))
                if unchanged:
                    assert e.place.display_name not in msg.text


class TestNoMove:
    def test_blocked_with_three_exits(self):
        out = NoMove(kind="forward", heading=90.0,
                     movements=(135.0, 270.0, 315.0))
        msg = no_move_announcement(out, CFG)
        assert msg.text == (
            "You cannot move forward along your current heading of East. "
            "You can move in three directions: Southeast, West, and Northwest.")

    def test_blocked_dead_end(self):
        out = NoMove(kind="backward", heading=0.0, movements=())
        msg = no_move_announcement(out, CFG)
        assert msg.text == (
            "You cannot move backward along your current heading of North. "
            "You cannot move in any direction.")


class TestTeleport:
    def test_bankside_structure(self):
        world = teleport_world()
        s = Session(world, CFG, start_pano_id="bk0", clock=lambda: 0.0)
        s.teleport("Acropolis")
        out = s.teleport("Shakespeare's Globe")
        ctx = ctx_for(world, "bk0", out.new_heading)
        msg = teleport_announcement(out, ctx, s.movements(), CFG)
        assert msg.text == (
            "You teleported 2,391 km from the Acropolis of Athens to 38 Bankside "
            "in London, England. "
            "There are four places within 50 meters, including: "
            "a performing arts theater, Shakespeare's Globe, is ahead of you "
            "26 meters away; "
            "a restaurant, Swan Bar & Restaurant, is to your left 32 meters away; "
            "an art gallery, Bankside Gallery, and a historical landmark, "
            "Ferryman's Seat, are to your right less than 47 meters away. "
            "You are facing South and can move in four directions: "
            "North, East, South, and West.")

    def test_unchanged_locality_omits_it(self):
        world = crossroads_world()
        # Both panos share city/state, so no locality clause appears.
        from streetnav.session import TeleportOutcome
        place = Place(id="pl", display_name="Corner Bakery", place_type="bakery",
                      location=world.get_pano("c5").location)
        out = TeleportOutcome(query="bakery", place=place,
                              from_pano=world.get_pano("c0"),
                              to_pano=world.get_pano("c5"), origin_place=None,
                              distance=41.0, old_heading=0.0, new_heading=0.0)
        ctx = ctx_for(world, "c5", 0.0)
        msg = teleport_announcement(out, ctx, [0.0, 90.0], CFG)
        assert " in " not in msg.fragments[0][1]
        assert msg.fragments[0][1] == (
            "You teleported 41 meters from 4000 Burke Avenue to 4050 Burke Avenue.")


class TestStandaloneQueries:
    def test_nearby_empty(self):
        world = straight_road_world()
        ctx = ctx_for(world, "r00", 0.0)
        msg = nearby_places_announcement(ctx, CFG)
        assert msg.text == "There are no places within 50 meters."

    def test_intersection_both_clauses(self):
        world = crossroads_world()
        ctx = ctx_for(world, "c0", 0.0)
        msg = intersection_announcement(ctx, world, CFG)
        assert msg.text == (
            "You are not at an intersection. "
            "The next intersection, Burke Avenue and Crossing Street, "
            "is 45 meters ahead.")
        ctx5 = ctx_for(world, "c5", 0.0)
        msg5 = intersection_announcement(ctx5, world, CFG)
        assert msg5.text.startswith(
            "You are at the intersection of Burke Avenue and Crossing Street.")
        assert "No intersection within 70 meters ahead." in msg5.text

    def test_metadata_golden_and_fallback(self):
        world = teleport_world()
        msg = pano_metadata_announcement(world.get_pano("bk0"))
        assert msg.text == "This Street View image was taken on February 2025 by Google."
        anon = Panorama(
            id="q", location=SEATTLE,
            address=StreetAddress(road_name="Main Street", city="Ravenna",
                                  country="United States"),
            capture_date="2023-07")
        msg = pano_metadata_announcement(anon)
        assert msg.text == ("This Street View image was taken on July 2023 by "
                            "an unknown photographer.")

    def test_visits(self):
        assert visits_announcement(VisitInfo("p", 1, 0)).text == \
            "This is your first visit to this location."
        assert visits_announcement(VisitInfo("p", 3, 0)).text == \
            "You have visited this location three times."

    def test_where(self):
        world = teleport_world()
        ctx = ctx_for(world, "bk0", 180.0)
        assert where_announcement(ctx).text == \
            "You are at 38 Bankside, London, England, facing South."

    def test_facing_clause_subset_of_nearby(self):
        world = teleport_world()
        ctx = ctx_for(world, "bk0", 180.0)
        facing = {e.place.id for e in ctx.nearby
                  if abs(e.offset) <= CFG.facing_cone
                  and e.distance <= CFG.facing_max_distance}
        nearby = {e.place.id for e in ctx.nearby}
        assert facing <= nearby
