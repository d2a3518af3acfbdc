#!/usr/bin/env python3
"""Draw the bundled sample wall-section drawings (PBM, axis at the left edge)."""

import argparse
from pathlib import Path

from PIL import Image, ImageDraw

# Section outlines as (radius, height) in drawing units, z up. The outline
# runs down the outer wall from the rim, along the base to the axis, then
# back up the inner wall.
SECTIONS = {
    "Dr18": [(70, 34), (64, 12), (58, 6), (56, 0), (48, 0), (46, 5), (0, 5),
             (0, 10), (50, 10), (60, 16), (65, 34)],
    "Dr24-25": [(44, 44), (42, 34), (47, 30), (46, 26), (38, 14), (26, 6), (25, 0),
                (18, 0), (17, 4), (0, 4), (0, 9), (30, 12), (38, 22), (39, 44)],
    "Dr27": [(46, 44), (42, 30), (44, 24), (36, 10), (24, 6), (23, 0), (16, 0),
             (15, 4), (0, 4), (0, 9), (32, 14), (38, 24), (36, 30), (41, 44)],
    "Dr29": [(62, 52), (60, 36), (66, 32), (66, 29), (52, 12), (30, 6), (29, 0), (21, 0),
             (20, 4), (0, 4), (0, 9), (48, 16), (59, 28), (59, 31), (54, 36), (56, 52)],
    "Dr33": [(46, 56), (34, 10), (30, 6), (29, 0), (21, 0), (20, 4), (0, 4),
             (0, 9), (29, 11), (40, 56)],
    "Dr35": [(44, 30), (46, 28), (46, 25), (40, 24), (30, 10), (20, 5), (19, 0), (12, 0),
             (11, 4), (0, 4), (0, 9), (26, 13), (36, 24), (38, 28)],
    "Dr36": [(74, 28), (76, 26), (76, 23), (66, 20), (48, 8), (34, 5), (33, 0), (25, 0),
             (24, 4), (0, 4), (0, 9), (46, 13), (62, 22), (68, 26)],
    "Dr37": [(60, 62), (62, 40), (56, 22), (42, 10), (26, 6), (25, 0), (17, 0),
             (16, 4), (0, 4), (0, 9), (38, 15), (51, 25), (56, 40), (55, 62)],
    "Dr38": [(56, 48), (56, 30), (66, 29), (66, 26), (64, 24), (54, 22), (40, 10), (26, 6),
             (25, 0), (17, 0), (16, 4), (0, 4), (0, 9), (36, 15), (50, 28), (51, 48)],
}


def draw(points, scale, margin=6):
    width = int(max(r for r, _ in points) * scale) + 2 * margin
    top = max(z for _, z in points)
    height = int(top * scale) + 2 * margin
    img = Image.new("L", (width, height), 255)
    poly = [(margin + r * scale, margin + (top - z) * scale) for r, z in points]
    ImageDraw.Draw(img).polygon(poly, fill=0)
    return img.point(lambda v: 0 if v < 128 else 255).convert("1")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data" / "profiles")
    ap.add_argument("--scale", type=float, default=2.0)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for label, pts in SECTIONS.items():
        path = args.out / f"{label}.pbm"
        draw(pts, args.scale).save(path)
        print(path)


if __name__ == "__main__":
    main()
