#!/usr/bin/env python3
"""Writes the 100-link street-type fixture and its expected labels.

Links follow a serpentine path on a 1 km lattice. A handful of axis-aligned
parcels sit near the middle of each link at chosen gaps, some exactly at the
20 m adjacency limit and some just beyond it, with deliberate area ties.
Labels are computed here with plain interval arithmetic so the C++ classifier
is checked against an independent implementation.

Usage: make_typology_fixture.py <out_dir>
"""

import json
import random
import sys
from pathlib import Path

BUFFER = 20.0
METERS_PER_MILE = 1609.344
LAND_USES = "RCIPO"


def context(fclass, speed):
    if fclass <= 2 or (fclass == 3 and speed > 50):
        return "highway"
    if fclass <= 4:
        return "throughway"
    return "neighborhood"


def street_type(ctx, use):
    if ctx == "highway":
        return "Highway"
    hood = ctx == "neighborhood"
    return {
        "R": "NeighborhoodResidential" if hood else "ResidentialThroughway",
        "C": "NeighborhoodCommercial" if hood else "CommercialThroughway",
        "I": "Industrial",
        "P": "PSP",
        "O": "Others",
    }[use]


def gap_1d(a0, a1, b0, b1):
    return max(0.0, max(a0, b0) - min(a1, b1))


def rect_segment_gap(rect, seg):
    # Axis-aligned segment against axis-aligned rectangle.
    (x0, y0, x1, y1) = rect
    (sx0, sy0), (sx1, sy1) = seg
    dx = gap_1d(x0, x1, min(sx0, sx1), max(sx0, sx1))
    dy = gap_1d(y0, y1, min(sy0, sy1), max(sy0, sy1))
    return (dx * dx + dy * dy) ** 0.5


def main(out):
    rng = random.Random(20240611)
    out.mkdir(parents=True, exist_ok=True)

    points = [(0.0, 0.0)]
    x, y, direction = 0.0, 0.0, 1
    for step in range(100):
        if step % 10 == 9:
            y += 1000.0
            direction = -direction
        else:
            x += 1000.0 * direction
        points.append((x, y))

    parcels = []
    links = []
    expected = []
    gaps = [0.0, 5.0, 12.5, 19.5, 20.0, 20.5, 30.0, 45.0]
    for k in range(100):
        (ax, ay), (bx, by) = points[k], points[k + 1]
        horizontal = ay == by
        mx, my = (ax + bx) / 2, (ay + by) / 2
        fclass = rng.choice([1, 2, 3, 3, 3, 4, 4, 5, 5, 5, 5, 5])
        speed = rng.choice([25.0, 35.0, 45.0, 55.0, 65.0])
        links.append((k + 1, k + 1, k + 2, speed, fclass, (ax, ay), (bx, by)))

        mine = []
        count = rng.choice([0, 1, 2, 2, 3, 3, 4])
        tie_area = None
        for j in range(count):
            along = rng.choice([40.0, 60.0, 80.0])
            depth = rng.choice([30.0, 50.0, 70.0])
            if j == 1 and rng.random() < 0.4 and tie_area is not None:
                along, depth = tie_area
            tie_area = (along, depth)
            gap = rng.choice(gaps)
            side = rng.choice([-1.0, 1.0])
            centre = rng.uniform(-200.0, 200.0)
            c = round(centre)
            if horizontal:
                px0, px1 = mx + c - along / 2, mx + c + along / 2
                if side > 0:
                    py0, py1 = my + gap, my + gap + depth
                else:
                    py0, py1 = my - gap - depth, my - gap
            else:
                py0, py1 = my + c - along / 2, my + c + along / 2
                if side > 0:
                    px0, px1 = mx + gap, mx + gap + depth
                else:
                    px0, px1 = mx - gap - depth, mx - gap
            pid = 1000 * (k + 1) + rng.randint(1, 9) * 10 + j
            use = rng.choice(LAND_USES)
            rect = (px0, py0, px1, py1)
            parcels.append((pid, use, rect))
            mine.append((pid, use, rect))

        seg = ((ax, ay), (bx, by))
        ctx = context(fclass, speed)
        best = None
        for pid, use, rect in mine:
            if rect_segment_gap(rect, seg) > BUFFER:
                continue
            area = (rect[2] - rect[0]) * (rect[3] - rect[1])
            key = (-area, pid)
            if best is None or key < best[0]:
                best = (key, use)
        use = best[1] if best else "O"
        expected.append((k + 1, street_type(ctx, use)))

    with open(out / "typology_nodes.csv", "w", newline="\n") as f:
        f.write("node_id,x,y\n")
        for i, (px, py) in enumerate(points):
            f.write(f"{i + 1},{px:g},{py:g}\n")
    with open(out / "typology_links.csv", "w", newline="\n") as f:
        f.write("link_id,from,to,length_miles,speed_mph,capacity_vph,fclass,lanes,wkt_geometry\n")
        for lid, a, b, speed, fclass, p, q in links:
            length = 1000.0 / METERS_PER_MILE
            f.write(f'{lid},{a},{b},{length!r},{speed:g},1000,{fclass},2,'
                    f'"LINESTRING ({p[0]:g} {p[1]:g}, {q[0]:g} {q[1]:g})"\n')
    features = []
    for pid, use, (x0, y0, x1, y1) in parcels:
        ring = [[x0, y0], [x1, y0], [x1, y1], [x0, y1], [x0, y0]]
        features.append({"type": "Feature",
                         "properties": {"parcel_id": pid, "land_use": use},
                         "geometry": {"type": "Polygon", "coordinates": [ring]}})
    with open(out / "typology_parcels.geojson", "w", newline="\n") as f:
        json.dump({"type": "FeatureCollection", "features": features}, f, indent=0)
        f.write("\n")
    with open(out / "typology_expected.csv", "w", newline="\n") as f:
        f.write("link_id,street_type\n")
        for lid, label in expected:
            f.write(f"{lid},{label}\n")


if __name__ == "__main__":
    main(Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).parent))
