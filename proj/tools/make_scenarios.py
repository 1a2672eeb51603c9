#!/usr/bin/env python3
# Copyright 2026 The TGS Authors
# SPDX-License-Identifier: Apache-2.0
"""Writes the four bundled scenarios into data/scenarios/."""

import argparse
import json
import math
from pathlib import Path

RES = 0.1
CAMERA = {"fx": 320.0, "fy": 320.0, "cx": 320.0, "cy": 240.0,
          "width": 640, "height": 480, "mount": [0.0, 0.0, 1.0, 0.2]}


class Grid:
    def __init__(self, width_m, height_m, fill):
        self.w = round(width_m / RES)
        self.h = round(height_m / RES)
        self.cells = [[fill] * self.w for _ in range(self.h)]

    def box(self, x0, y0, x1, y1, label):
        """Labels cells whose centre lies in [x0, x1] x [y0, y1]."""
        for j in range(self.h):
            cy = (j + 0.5) * RES
            if not y0 <= cy <= y1:
                continue
            row = self.cells[j]
            for i in range(self.w):
                if x0 <= (i + 0.5) * RES <= x1:
                    row[i] = label

    def rows(self):
        return ["".join(r) for r in reversed(self.cells)]


def rounded(points, radius=1.5, step=0.5):
    """Densifies a polyline and rounds its corners with circular fillets."""
    out = [points[0]]
    for a, b, c in zip(points, points[1:], points[2:]):
        ux, uy = b[0] - a[0], b[1] - a[1]
        vx, vy = c[0] - b[0], c[1] - b[1]
        lu, lv = math.hypot(ux, uy), math.hypot(vx, vy)
        r = min(radius, lu / 2, lv / 2)
        p = (b[0] - ux / lu * r, b[1] - uy / lu * r)
        q = (b[0] + vx / lv * r, b[1] + vy / lv * r)
        out.append(p)
        for t in (0.25, 0.5, 0.75):  # quadratic Bezier through the corner
            out.append(((1 - t) ** 2 * p[0] + 2 * t * (1 - t) * b[0] + t * t * q[0],
                        (1 - t) ** 2 * p[1] + 2 * t * (1 - t) * b[1] + t * t * q[1]))
        out.append(q)
    out.append(points[-1])
    dense = [out[0]]
    for a, b in zip(out, out[1:]):
        n = max(1, math.ceil(math.hypot(b[0] - a[0], b[1] - a[1]) / step))
        dense += [(a[0] + (b[0] - a[0]) * k / n, a[1] + (b[1] - a[1]) * k / n) for k in range(1, n + 1)]
    return [[round(x, 3), round(y, 3)] for x, y in dense]


def document(name, grid, start, goal, reference):
    return {
        "name": name,
        "resolution": RES,
        "origin": [0.0, 0.0],
        "rows": grid.rows(),
        "start": list(start),
        "goal": list(goal),
        "reference_path": rounded(reference),
        "camera": CAMERA,
    }


def flowerbed():
    # Pavement plaza between two building rows; a flower bed sits on the
    # straight line to the goal with grass to its south.
    g = Grid(40, 24, "P")
    g.box(0, 0, 40, 1.5, "B")
    g.box(0, 22.5, 40, 24, "B")
    g.box(12, 1.5, 28, 5, "G")
    g.box(12, 5, 28, 14, "F")
    return document("flowerbed", g, (3.0, 11.0, 0.0), (37.0, 11.0),
                    [(3.0, 11.0), (9.0, 17.5), (31.0, 17.5), (37.0, 11.0)])


def curb():
    # L-shaped sidewalk; the road inside the L is fenced by curbs that open
    # at two driveways.
    g = Grid(40, 32, "B")
    g.box(2, 2, 37, 7, "S")
    g.box(32, 2, 37, 30, "S")
    g.box(2, 7, 32, 30, "R")
    g.box(2, 7, 32, 7.4, "K")
    g.box(31.6, 7, 32, 30, "K")
    g.box(9, 7, 12, 7.4, "R")
    g.box(31.6, 17, 32, 20, "R")
    return document("curb", g, (5.0, 4.5, 0.0), (34.5, 27.0),
                    [(5.0, 4.5), (34.5, 4.5), (34.5, 27.0)])


def crosswalk():
    # Two sidewalks across a road; the marked crosswalk is the compliant way
    # over, driveways open the curbs elsewhere.
    g = Grid(40, 24, "B")
    g.box(0, 1.5, 40, 6, "S")
    g.box(0, 6, 40, 6.4, "K")
    g.box(0, 6.4, 40, 17.6, "R")
    g.box(0, 17.6, 40, 18, "K")
    g.box(0, 18, 40, 22.5, "S")
    g.box(18, 6, 22, 18, "C")
    g.box(7, 6, 10, 6.4, "R")
    g.box(30, 17.6, 33, 18, "R")
    return document("crosswalk", g, (3.0, 4.0, 0.0), (37.0, 20.5),
                    [(3.0, 4.0), (20.0, 4.0), (20.0, 20.0), (37.0, 20.5)])


def corner():
    # Sidewalk ring around a block; a grass courtyard cut into the block
    # points at the goal but dead-ends.
    g = Grid(40, 36, "B")
    g.box(4, 4, 36, 32, "S")
    g.box(9, 9, 31, 27, "B")
    g.box(22, 9, 27, 21, "G")
    return document("corner", g, (8.0, 6.5, 0.0), (33.5, 24.0),
                    [(8.0, 6.5), (33.5, 6.5), (33.5, 24.0)])


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data" / "scenarios")
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for build in (flowerbed, curb, crosswalk, corner):
        doc = build()
        path = args.out / f"{doc['name']}.json"
        path.write_text(json.dumps(doc, indent=1) + "\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
