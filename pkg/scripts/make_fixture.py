#!/usr/bin/env python3
"""Generate a small DOTA-style annotation fixture.

Boxes are seeded rotated rectangles whose corners get +-1 px jitter and
integer rounding, which reproduces the slightly-loose quads real datasets
have. The checked-in fixture under tests/data/dota_sample was produced by:

    python3 scripts/make_fixture.py --out tests/data/dota_sample --seed 7 \
        --records 20 8 5

and is frozen; regenerate only if you intend to re-freeze every golden that
depends on it.
"""

import argparse
import math
from pathlib import Path

import numpy as np

CATEGORIES = [
    "plane", "ship", "small-vehicle", "large-vehicle", "storage-tank",
    "harbor", "bridge", "helicopter", "roundabout", "swimming-pool",
]


def corners(x_c, y_c, w, h, theta_deg):
    rad = math.radians(theta_deg)
    c, s = math.cos(rad), math.sin(rad)
    out = []
    for dx, dy in ((-w / 2, -h / 2), (w / 2, -h / 2), (w / 2, h / 2), (-w / 2, h / 2)):
        out.append((x_c + dx * c - dy * s, y_c + dx * s + dy * c))
    return out


def make_file(rng, n_records, headers):
    lines = list(headers)
    for _ in range(n_records):
        x_c = rng.uniform(80, 944)
        y_c = rng.uniform(80, 944)
        # log-uniform sizes; the low end dips under typical gate thresholds
        w = float(np.exp(rng.uniform(np.log(8), np.log(180))))
        h = float(np.exp(rng.uniform(np.log(8), np.log(180))))
        theta = rng.uniform(-90, 90)
        pts = corners(x_c, y_c, w, h, theta)
        jittered = [(round(x + rng.uniform(-1, 1)), round(y + rng.uniform(-1, 1))) for x, y in pts]
        coord_str = " ".join(f"{int(x)} {int(y)}" for x, y in jittered)
        category = CATEGORIES[rng.integers(0, len(CATEGORIES))]
        difficulty = 1 if rng.random() < 0.15 else 0
        lines.append(f"{coord_str} {category} {difficulty}")
    return "\n".join(lines) + "\n"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, required=True)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--records", type=int, nargs="+", default=[20, 8, 5],
                    help="record count per generated file")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    args.out.mkdir(parents=True, exist_ok=True)
    header_sets = [
        ["imagesource:GoogleEarth", "gsd:0.146343590398"],
        ["gsd:0.5"],
        [],
    ]
    for i, n in enumerate(args.records, start=1):
        headers = header_sets[(i - 1) % len(header_sets)]
        text = make_file(rng, n, headers)
        path = args.out / f"P{i:04d}.txt"
        path.write_text(text, encoding="utf-8")
        print(f"wrote {path} ({n} records)")


if __name__ == "__main__":
    main()
