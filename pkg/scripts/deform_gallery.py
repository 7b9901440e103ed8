"""Render a gallery of deformation frames for a stock map.

Writes one SVG per height step plus an index.json with exact parameters,
so a frame can be reproduced bit for bit later.

    python3 scripts/deform_gallery.py --map sawtooth3 --frames 8 --out gallery/
"""
import argparse
import json
import pathlib

from transmaps.homotopy import apply_homotopy
from transmaps.rational import ONE, Q, ZERO
from transmaps.serialize import document_to_json, map_to_document
from transmaps.spaces import identity_map, ladder_map, sawtooth, square_map
from transmaps.svg import write_svg

STOCK = {
    "identity": identity_map,
    "square": square_map,
    "sawtooth3": lambda: sawtooth(3),
    "sawtooth5": lambda: sawtooth(5),
    "ladder7": lambda: ladder_map(7),
}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--map", choices=sorted(STOCK), default="sawtooth3")
    ap.add_argument("--frames", type=int, default=8)
    ap.add_argument("--t-max", default="1/4", help="final height, a rational")
    ap.add_argument("--gamma", default="20", help="expansion factor, at least 20")
    ap.add_argument("--out", default="gallery")
    args = ap.parse_args()
    if args.frames < 1:
        ap.error("need at least one frame")

    f = STOCK[args.map]()
    t_max, gamma = Q(args.t_max), Q(args.gamma)
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    index = {"map": args.map, "gamma": str(gamma), "frames": []}
    for k in range(args.frames + 1):
        t = t_max * Q(k, args.frames)
        g = apply_homotopy(f, t, gamma) if t > ZERO else f
        name = f"frame_{k:03d}"
        write_svg(g, out / f"{name}.svg")
        (out / f"{name}.json").write_text(document_to_json(map_to_document(g)))
        index["frames"].append({"t": str(t), "file": f"{name}.svg", "pieces": len(g.pieces)})
        print(f"{name}  t={t}  pieces={len(g.pieces)}")
    (out / "index.json").write_text(json.dumps(index, indent=2) + "\n")
    print(f"wrote {args.frames + 1} frames to {out}/")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
