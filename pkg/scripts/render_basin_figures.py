#!/usr/bin/env python3
"""Render the basin-of-attraction disks of the Mercedes-Benz tensor for a
range of orders, one PPM image (plus JSON sidecar) per order.

Usage:
    python scripts/render_basin_figures.py [--orders 3..8] [--res 512] [--out-dir out]

Even orders >= 6 partition the disk into clean sectors; odd orders show the
fractal boundary filaments, thinning as the order grows.
"""

import argparse
import json
import sys
from pathlib import Path

from tpm import basins, frames
from tpm.cli import atomic_write
from tpm.experiments import allones_tensor


def parse_range(text):
    if ".." in text:
        lo, hi = text.split("..", 1)
        return range(int(lo), int(hi) + 1)
    v = int(text)
    return range(v, v + 1)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--orders", default="3..8")
    ap.add_argument("--res", type=int, default=512)
    ap.add_argument("--iters", type=int, default=basins.RENDER_MAX_ITER)
    ap.add_argument("--out-dir", default="out")
    args = ap.parse_args(argv)

    F = frames.mercedes_benz()
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for d in parse_range(args.orders):
        T = allones_tensor(F, d)
        grid = basins.render_basins(T, F, args.res, max_iter=args.iters)
        ppm = out_dir / f"basins_d{d}.ppm"
        atomic_write(ppm, basins.grid_to_ppm(grid))
        atomic_write(ppm.with_suffix(".json"), json.dumps(basins.grid_sidecar(grid), indent=2) + "\n")
        stats = basins.grid_sidecar(grid)["labels"]
        print(f"d={d}: wrote {ppm} ({stats})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
