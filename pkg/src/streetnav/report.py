"""Journey reports: a rendered map and a CSV next to the event log.

Given a session's newline-delimited event records and the world they
were recorded in, this writes a PNG figure of the travelled path over
the road network and a CSV of the movement timeline, so a session can
be inspected without replaying it.
"""
from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .geo import GeoPoint, local_xy
from .world import World

MOVEMENT_KINDS = ("Step", "Jump", "Teleport", "GoBack")


@dataclass(frozen=True)
class JourneyRow:
    ts: int
    kind: str
    pano_id: str
    lat: float
    lng: float
    heading: float


@dataclass(frozen=True)
class JourneyReport:
    png_path: Path
    csv_path: Path
    rows: tuple[JourneyRow, ...]
    kind_counts: dict


def journey_rows(records: list[dict], world: World,
                 start_pano_id: str | None = None,
                 start_heading: float = 0.0) -> list[JourneyRow]:
    """Movement timeline: one row per position or heading change."""
    pano = world.get_pano(start_pano_id) if start_pano_id else world.panos[0]
    heading = start_heading
    rows = [JourneyRow(ts=0, kind="Start", pano_id=pano.id,
                       lat=pano.location.lat, lng=pano.location.lng,
                       heading=heading)]
    for record in records:
        kind, payload = record["kind"], record["payload"]
        if kind == "Pan":
            heading = payload["heading"]
        elif kind in MOVEMENT_KINDS:
            if not payload.get("moved", payload.get("ok", False)):
                continue
            pano = world.get_pano(payload["pano"])
            heading = payload.get("heading", heading)
        else:
            continue
        rows.append(JourneyRow(ts=record["ts"], kind=kind, pano_id=pano.id,
                               lat=pano.location.lat, lng=pano.location.lng,
                               heading=heading))
    return rows


def write_journey_csv(rows, path: Path) -> None:
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["ts_ms", "kind", "pano_id", "lat", "lng", "heading"])
        for row in rows:
            writer.writerow([row.ts, row.kind, row.pano_id,
                             f"{row.lat:.7f}", f"{row.lng:.7f}", f"{row.heading:g}"])


def render_journey_map(rows, world: World, path: Path, title: str) -> None:
    """Draws the travelled path over the world's roads and panos."""
    origin = GeoPoint(rows[0].lat, rows[0].lng)
    fig, ax = plt.subplots(figsize=(8, 8))
    for road in world.roads:
        xs, ys = zip(*(local_xy(origin, p) for p in road.geometry))
        ax.plot(xs, ys, color="0.85", linewidth=3, zorder=1)
    pano_xy = [local_xy(origin, p.location) for p in world.panos]
    ax.scatter([x for x, _ in pano_xy], [y for _, y in pano_xy],
               s=12, color="0.6", zorder=2, label="panoramas")
    path_xy = [local_xy(origin, GeoPoint(r.lat, r.lng)) for r in rows]
    xs, ys = zip(*path_xy)
    ax.plot(xs, ys, color="tab:blue", linewidth=1.5, zorder=3, label="journey")
    ax.scatter(xs, ys, s=24, color="tab:blue", zorder=4)
    ax.scatter([xs[0]], [ys[0]], s=90, marker="^", color="tab:green",
               zorder=5, label="start")
    ax.scatter([xs[-1]], [ys[-1]], s=90, marker="s", color="tab:red",
               zorder=5, label="end")
    ax.set_xlabel("east (m)")
    ax.set_ylabel("north (m)")
    ax.set_title(title)
    ax.set_aspect("equal", adjustable="datalim")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def journey_report(records: list[dict], world: World, out_dir: str | Path,
                   name: str = "journey", start_pano_id: str | None = None,
                   start_heading: float = 0.0) -> JourneyReport:
    """Writes {name}.png and {name}.csv under out_dir and returns both."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = journey_rows(records, world, start_pano_id=start_pano_id,
                        start_heading=start_heading)
    counts = dict(Counter(r["kind"] for r in records))
    csv_path = out_dir / f"{name}.csv"
    png_path = out_dir / f"{name}.png"
    write_journey_csv(rows, csv_path)
    title = f"{name}: {len(rows) - 1} moves over {len(records)} events"
    render_journey_map(rows, world, png_path, title)
    return JourneyReport(png_path=png_path, csv_path=csv_path,
                         rows=tuple(rows), kind_counts=counts)
