"""Normalized power iteration x -> T.x^{d-1} / ||T.x^{d-1}||.

Convergence is detected on the sign-aligned iterate displacement
min(||x' - x||, ||x' + x||), since for even order the map can oscillate
between +/-v near a fixed point.  Converged limits are classified against
a frame within a radius of 10x the convergence tolerance.  A vectorized
batch runner with identical semantics backs the basin rasterizer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgs, ZeroImage
from .frames import Frame
from .tensor import SymTensor, contract_vec

#: images shorter than this are treated as landing in the base locus
ZERO_IMAGE_FLOOR = 1e-300


@dataclass(frozen=True)
class PowerRunResult:
    """Outcome of one power-method run.

    limit_index is the 0-based frame column the iterate converged to (with
    limit_sign giving the +/- representative), None when the limit is
    "other" (converged away from the frame) or "none" (did not converge).
    """

    final_x: np.ndarray
    iterations: int
    converged: bool
    limit_index: int | None
    limit_sign: int
    trajectory: tuple | None = None

    @property
    def limit_class(self) -> str:
        if self.limit_index is not None:
            sign = "-" if self.limit_sign < 0 else "+"
            return f"{sign}v{self.limit_index + 1}"
        return "other" if self.converged else "none"


def step(T: SymTensor, x) -> np.ndarray:
    """One normalized power step; raises ZeroImage if T.x^{d-1} vanishes."""
    y = contract_vec(T, x)
    ny = float(np.linalg.norm(y))
    if ny < ZERO_IMAGE_FLOOR:
        raise ZeroImage(f"||T.x^{T.d - 1}|| = {ny:.3e}")
    return y / ny


def classify_limit(x: np.ndarray, frame: Frame, radius: float) -> tuple[int | None, int]:
    """Match x against +/- frame columns; unique match within radius wins."""
    dminus = np.linalg.norm(frame.V - x[:, None], axis=0)
    dplus = np.linalg.norm(frame.V + x[:, None], axis=0)
    best = np.minimum(dminus, dplus)
    hits = np.flatnonzero(best <= radius)
    if hits.size != 1:
        return None, 0
    j = int(hits[0])
    return j, 1 if dminus[j] <= dplus[j] else -1


def run(
    T: SymTensor,
    x0,
    max_iter: int = 100,
    tol: float = 1e-10,
    frame: Frame | None = None,
    record_trajectory: bool = False,
) -> PowerRunResult:
    """Iterate the power map from x0 until the displacement drops below tol.

    Stops at the first k with min(||x_{k+1} - x_k||, ||x_{k+1} + x_k||) <= tol
    or after max_iter steps.  With a frame, a converged limit within
    10*tol of exactly one +/- column is labeled with that column.
    """
    if max_iter < 1:
        raise InvalidArgs(f"max_iter must be >= 1, got {max_iter}")
    x0 = np.asarray(x0, dtype=float)
    nrm = float(np.linalg.norm(x0))
    if nrm == 0.0:
        raise InvalidArgs("x0 must be nonzero")
    x = x0 / nrm
    traj = [x.copy()] if record_trajectory else None
    converged = False
    iterations = max_iter
    for k in range(1, max_iter + 1):
        xn = step(T, x)
        disp = min(float(np.linalg.norm(xn - x)), float(np.linalg.norm(xn + x)))
        x = xn
        if record_trajectory:
            traj.append(x.copy())
        if disp <= tol:
            converged = True
            iterations = k
            break
    limit_index: int | None = None
    limit_sign = 0
    if converged and frame is not None:
        limit_index, limit_sign = classify_limit(x, frame, 10.0 * tol)
    return PowerRunResult(
        final_x=x,
        iterations=iterations,
        converged=converged,
        limit_index=limit_index,
        limit_sign=limit_sign,
        trajectory=tuple(traj) if traj is not None else None,
    )


def run_batch(
    T: SymTensor,
    X0: np.ndarray,
    max_iter: int,
    tol: float,
    frame: Frame | None = None,
):
    """Run many power iterations at once with the same semantics as run().

    X0 holds one starting point per row.  Converged rows freeze at their
    first accepted iterate, matching the scalar runner.  Rows whose image
    vanishes (base locus, including x0 = 0) end not-converged.

    Returns (final, iterations, converged, limit_index, limit_sign) where
    limit_index is -1 for rows without a unique frame match.
    """
    X0 = np.asarray(X0, dtype=float)
    N = X0.shape[0]
    norms = np.linalg.norm(X0, axis=1)
    alive = norms > 0.0
    X = np.zeros_like(X0)
    X[alive] = X0[alive] / norms[alive][:, None]
    converged = np.zeros(N, dtype=bool)
    iterations = np.full(N, max_iter, dtype=np.int32)
    active = np.flatnonzero(alive)
    V = T.V
    lam = T.lambdas
    e = T.d - 1
    for k in range(1, max_iter + 1):
        if active.size == 0:
            break
        XA = X[active]
        Y = ((XA @ V) ** e * lam) @ V.T
        ny = np.linalg.norm(Y, axis=1)
        dead = ny < ZERO_IMAGE_FLOOR
        ny[dead] = 1.0
        XN = Y / ny[:, None]
        disp = np.minimum(
            np.linalg.norm(XN - XA, axis=1), np.linalg.norm(XN + XA, axis=1)
        )
        done = (disp <= tol) & ~dead
        X[active[~dead]] = XN[~dead]
        converged[active[done]] = True
        iterations[active[done]] = k
        active = active[~(done | dead)]
    limit_index = np.full(N, -1, dtype=np.int32)
    limit_sign = np.zeros(N, dtype=np.int32)
    if frame is not None and np.any(converged):
        idx = np.flatnonzero(converged)
        XF = X[idx]
        cols_v = frame.V.T[None, :, :]
        dminus = np.linalg.norm(XF[:, None, :] - cols_v, axis=2)
        dplus = np.linalg.norm(XF[:, None, :] + cols_v, axis=2)
        best = np.minimum(dminus, dplus)
        hits = best <= 10.0 * tol
        unique = hits.sum(axis=1) == 1
        rows = idx[unique]
        cols = np.argmax(hits[unique], axis=1)
        limit_index[rows] = cols
        limit_sign[rows] = np.where(
            dminus[unique, cols] <= dplus[unique, cols], 1, -1
        )
    return X, iterations, converged, limit_index, limit_sign
