"""Basins of attraction on the unit disk for planar frame tensors.

Each pixel center inside the closed unit disk seeds one power-method run;
the pixel is labeled by the frame column (up to sign) the run converged to.
Pixel runs are independent, so the raster is computed in data-parallel
chunks with an output independent of scheduling.  A one-dimensional
recursion for the inner-product ratio serves as an exact oracle for the
planar dynamics of the unit-coefficient regular-simplex tensor.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgs
from .frames import Frame
from .power import run, run_batch
from .rng import SplitMix64
from .tensor import SymTensor

#: raster label codes; frame columns are labeled 1..r
LABEL_NONE = 0
LABEL_OTHER = -1
LABEL_OUTSIDE = -2

#: default iteration budget for rendering (twice the convergence-grid budget,
#: so slow fractal boundaries at odd order resolve instead of reading "none")
RENDER_MAX_ITER = 200

_PALETTE = [
    (0, 0, 255),      # 1: blue
    (255, 0, 0),      # 2: red
    (0, 200, 0),      # 3: green
    (255, 165, 0),    # 4: orange
    (160, 32, 240),   # 5: purple
    (0, 255, 255),    # 6: cyan
    (255, 0, 255),    # 7: magenta
    (255, 255, 0),    # 8: yellow
    (139, 69, 19),    # 9: brown
    (255, 105, 180),  # 10: pink
    (0, 128, 128),    # 11: teal
    (128, 128, 0),    # 12: olive
    (75, 0, 130),     # 13: indigo
    (46, 139, 87),    # 14: sea green
    (220, 20, 60),    # 15: crimson
    (112, 128, 144),  # 16: slate
]
_COLOR_OTHER = (128, 128, 128)
_COLOR_NONE = (0, 0, 0)
_COLOR_OUTSIDE = (255, 255, 255)


def worker_count() -> int:
    """Parallel workers: TPM_THREADS if set, else the hardware count."""
    env = os.environ.get("TPM_THREADS")
    if env:
        try:
            k = int(env)
        except ValueError as e:
            raise InvalidArgs(f"TPM_THREADS must be an integer, got {env!r}") from e
        if k < 1:
            raise InvalidArgs(f"TPM_THREADS must be >= 1, got {k}")
        return k
    return os.cpu_count() or 1


@dataclass(frozen=True)
class BasinGrid:
    """Raster of convergence labels over [-1, 1]^2, row-major from top-left.

    labels[i, j] is 1..r for convergence to +/- frame column, LABEL_OTHER for
    a converged limit away from the frame, LABEL_NONE for no convergence (or
    the base locus), LABEL_OUTSIDE beyond the closed unit disk.  iterations
    holds the per-pixel step count at acceptance.
    """

    resolution: int
    labels: np.ndarray
    iterations: np.ndarray
    d: int
    frame: Frame


# -- ratio recursion (1-D oracle) ------------------------------------------------


def alpha_step(alpha: float, d: int) -> float:
    """One step of the inner-product-ratio recursion for the planar simplex
    tensor:

        a' = (a^{d-1} - (1-a)^{d-1}/2 + 1/2)
             / (1 + a^{d-1}/2 + (1-a)^{d-1}/2).

    The ratio a = -<x, v_2>/<x, v_1> is invariant under the normalization of
    the power map, a = 1/2 is the fixed point corresponding to +/-v_1, and
    for even d >= 6 the recursion contracts toward it.  At d = 4 every point
    is fixed.
    """
    if d < 3:
        raise InvalidArgs(f"need d >= 3, got {d}")
    p = alpha ** (d - 1)
    q = (1.0 - alpha) ** (d - 1)
    return (p - 0.5 * q + 0.5) / (1.0 + 0.5 * p + 0.5 * q)


def alpha_orbit(alpha0: float, d: int, k: int) -> list[float]:
    """k iterates of alpha_step from alpha0 in (0,1); returns [a_0, ..., a_k]."""
    if not 0.0 < alpha0 < 1.0:
        raise InvalidArgs(f"alpha0 must lie strictly inside (0, 1), got {alpha0}")
    if k < 0:
        raise InvalidArgs(f"need k >= 0, got {k}")
    orbit = [float(alpha0)]
    a = float(alpha0)
    for _ in range(k):
        a = alpha_step(a, d)
        orbit.append(a)
    return orbit


# -- rasterization -----------------------------------------------------------------


def render_basins(
    T: SymTensor,
    F: Frame,
    resolution: int,
    max_iter: int = RENDER_MAX_ITER,
    tol: float = 1e-10,
    threads: int | None = None,
) -> BasinGrid:
    """Label every pixel center of a resolution^2 raster over [-1, 1]^2.

    Pixel centers, not corners, are sampled; centers outside the closed unit
    disk carry LABEL_OUTSIDE so image output crops to the disk.  Chunks of
    pixels run concurrently; the merged result is deterministic.
    """
    if T.n != 2:
        raise InvalidArgs(f"basins are rendered for planar tensors only, got n = {T.n}")
    if resolution < 16:
        raise InvalidArgs(f"resolution must be >= 16, got {resolution}")
    res = int(resolution)
    js = np.arange(res)
    xs = -1.0 + (2.0 * js + 1.0) / res
    ys = 1.0 - (2.0 * js + 1.0) / res
    XX, YY = np.meshgrid(xs, ys)
    inside = XX**2 + YY**2 <= 1.0
    pts = np.column_stack([XX[inside], YY[inside]])

    labels = np.full((res, res), LABEL_OUTSIDE, dtype=np.int16)
    iterations = np.zeros((res, res), dtype=np.int32)

    nw = threads if threads is not None else worker_count()
    chunks = max(1, min(len(pts), nw * 4))
    bounds = np.linspace(0, len(pts), chunks + 1, dtype=int)

    def work(lo: int, hi: int):
        return run_batch(T, pts[lo:hi], max_iter, tol, frame=F)

    results = []
    if nw > 1 and chunks > 1:
        with ThreadPoolExecutor(max_workers=nw) as ex:
            futures = [ex.submit(work, bounds[c], bounds[c + 1]) for c in range(chunks)]
            results = [f.result() for f in futures]
    else:
        results = [work(bounds[c], bounds[c + 1]) for c in range(chunks)]

    flat_labels = np.empty(len(pts), dtype=np.int16)
    flat_iters = np.empty(len(pts), dtype=np.int32)
    for c, (_, iters, conv, lidx, _) in enumerate(results):
        lo, hi = bounds[c], bounds[c + 1]
        lab = np.full(hi - lo, LABEL_NONE, dtype=np.int16)
        lab[conv & (lidx >= 0)] = lidx[conv & (lidx >= 0)] + 1
        lab[conv & (lidx < 0)] = LABEL_OTHER
        flat_labels[lo:hi] = lab
        flat_iters[lo:hi] = iters

    labels[inside] = flat_labels
    iterations[inside] = flat_iters
    return BasinGrid(resolution=res, labels=labels, iterations=iterations, d=T.d, frame=F)


def label_color(code: int) -> tuple[int, int, int]:
    if code >= 1:
        return _PALETTE[(code - 1) % len(_PALETTE)]
    if code == LABEL_OTHER:
        return _COLOR_OTHER
    if code == LABEL_NONE:
        return _COLOR_NONE
    return _COLOR_OUTSIDE


def grid_to_ppm(grid: BasinGrid) -> bytes:
    """Binary PPM (P6, 8-bit RGB, row-major from top-left)."""
    res = grid.resolution
    codes = np.unique(grid.labels)
    lut = {int(c): label_color(int(c)) for c in codes}
    img = np.zeros((res, res, 3), dtype=np.uint8)
    for c, rgb in lut.items():
        img[grid.labels == c] = rgb
    header = f"P6\n{res} {res}\n255\n".encode("ascii")
    return header + img.tobytes()


def grid_sidecar(grid: BasinGrid) -> dict:
    """JSON-able sidecar: resolution, order, color legend, iteration stats."""
    inside = grid.labels != LABEL_OUTSIDE
    iters = grid.iterations[inside]
    counts = {}
    for c in np.unique(grid.labels):
        c = int(c)
        name = {LABEL_OUTSIDE: "outside", LABEL_NONE: "none", LABEL_OTHER: "other"}.get(
            c, f"v{c}"
        )
        counts[name] = int(np.sum(grid.labels == c))
    colors = {
        name: "#%02x%02x%02x" % label_color(code)
        for code, name in [(LABEL_OUTSIDE, "outside"), (LABEL_NONE, "none"), (LABEL_OTHER, "other")]
        + [(j, f"v{j}") for j in range(1, grid.frame.r + 1)]
    }
    return {
        "resolution": grid.resolution,
        "d": grid.d,
        "colors": colors,
        "labels": counts,
        "iterations": {
            "mean": float(np.mean(iters)) if iters.size else 0.0,
            "min": int(np.min(iters)) if iters.size else 0,
            "max": int(np.max(iters)) if iters.size else 0,
        },
    }


# -- sector verification -------------------------------------------------------------


@dataclass(frozen=True)
class SectorReport:
    samples: int
    passes: int
    fails: int
    skipped: int
    fail_angles: tuple

    @property
    def all_passed(self) -> bool:
        return self.fails == 0


def _boundary_angles(F: Frame) -> np.ndarray:
    """Angles of the Voronoi boundaries between signed frame directions."""
    ang = []
    for j in range(F.r):
        t = math.atan2(F.V[1, j], F.V[0, j])
        ang.append(t % (2 * math.pi))
        ang.append((t + math.pi) % (2 * math.pi))
    ang = np.sort(np.array(ang))
    mids = (ang + np.diff(np.append(ang, ang[0] + 2 * math.pi)) / 2.0) % (2 * math.pi)
    return np.sort(mids)


def sector_check(
    T: SymTensor,
    F: Frame,
    samples: int,
    seed: int,
    max_iter: int = RENDER_MAX_ITER,
    tol: float = 1e-10,
    skip_radius: float = 1e-6,
) -> SectorReport:
    """Verify that the power map sends x0 to its best-aligned signed frame
    vector (the sector property of even-order planar simplex tensors).

    Uniform angles are sampled on the circle; starts within skip_radius (in
    angle) of a sector boundary have a non-unique maximizer and are skipped.
    """
    if T.n != 2 or F.n != 2:
        raise InvalidArgs("sector_check applies to planar tensors")
    bounds = _boundary_angles(F)
    rng = SplitMix64(seed)
    passes = fails = skipped = 0
    fail_angles = []
    for _ in range(samples):
        theta = 2.0 * math.pi * rng.random()
        gap = np.min(np.abs(((theta - bounds) + math.pi) % (2 * math.pi) - math.pi))
        if gap <= skip_radius:
            skipped += 1
            continue
        x0 = np.array([math.cos(theta), math.sin(theta)])
        dots = F.V.T @ x0
        j = int(np.argmax(np.abs(dots)))
        s = 1 if dots[j] >= 0 else -1
        res = run(T, x0, max_iter=max_iter, tol=tol, frame=F)
        if res.limit_index == j and res.limit_sign == s:
            passes += 1
        else:
            fails += 1
            if len(fail_angles) < 32:
                fail_angles.append(theta)
    return SectorReport(
        samples=samples,
        passes=passes,
        fails=fails,
        skipped=skipped,
        fail_angles=tuple(fail_angles),
    )
