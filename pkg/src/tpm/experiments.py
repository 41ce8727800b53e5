"""Seeded, deterministic numerical experiments.

convergence_table sweeps unit-coefficient regular-simplex tensors over a
grid of (dimension, order) cells and records how many seeded random starts
the power method carries into the frame; mb_tables enumerates the complete
eigenpair lists of the Mercedes-Benz tensors for a range of orders;
perturbation_study adds dense symmetric noise to a frame tensor and reports
(without judging) how far the recovered limits move.

Every trial draws from its own SplitMix64 stream seeded by
derive_seed(master, n, d, trial), so results do not depend on scheduling.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .basins import worker_count
from .eigen2d import ISOTROPIC, EigenPair, all_eigenpairs_2d
from .errors import DegenerateForm, InvalidArgs
from .frames import Frame, mercedes_benz, regular_simplex
from .power import run
from .rng import SplitMix64, derive_seed, sample_sphere
from .tensor import (
    SymTensor,
    eigen_residual,
    frobenius_norm,
    make_sym_tensor,
    to_dense,
)

TICK = "tick"
CROSS = "cross"


def allones_tensor(F: Frame, d: int) -> SymTensor:
    """The unit-coefficient tensor generated by a frame."""
    return make_sym_tensor(F.V, np.ones(F.r), d)


# -- convergence grid -----------------------------------------------------------


@dataclass(frozen=True)
class CellResult:
    n: int
    d: int
    trials: int
    successes: int
    mean_iterations: float

    @property
    def verdict(self) -> str:
        return TICK if self.successes == self.trials else CROSS


@dataclass(frozen=True)
class ConvergenceGrid:
    cells: tuple

    def cell(self, n: int, d: int) -> CellResult:
        for c in self.cells:
            if c.n == n and c.d == d:
                return c
        raise InvalidArgs(f"no cell ({n}, {d}) in the grid")

    def to_csv(self) -> str:
        lines = ["n,d,trials,successes,verdict"]
        for c in self.cells:
            lines.append(f"{c.n},{c.d},{c.trials},{c.successes},{c.verdict}")
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        ns = sorted({c.n for c in self.cells})
        ds = sorted({c.d for c in self.cells})
        width = 3
        head = "n\\d " + " ".join(f"{d:>{width}}" for d in ds)
        lines = [head]
        for n in ns:
            marks = []
            for d in ds:
                c = self.cell(n, d)
                marks.append(f"{'ok' if c.verdict == TICK else 'X':>{width}}")
            lines.append(f"{n:<4}" + " ".join(marks))
        return "\n".join(lines) + "\n"


def _run_cell(n: int, d: int, trials: int, seed: int, max_iter: int, tol: float) -> CellResult:
    F = regular_simplex(n)
    T = allones_tensor(F, d)
    successes = 0
    iters = 0
    for t in range(trials):
        stream = SplitMix64(derive_seed(seed, n, d, t))
        x0 = sample_sphere(stream, n)
        res = run(T, x0, max_iter=max_iter, tol=tol, frame=F)
        if res.limit_index is not None:
            successes += 1
        iters += res.iterations
    return CellResult(n=n, d=d, trials=trials, successes=successes, mean_iterations=iters / trials)


def convergence_table(
    n_range=range(2, 11),
    d_range=range(2, 11),
    trials: int = 20,
    seed: int = 7,
    max_iter: int = 100,
    tol: float = 1e-10,
    threads: int | None = None,
) -> ConvergenceGrid:
    """Tick/cross grid of power-method retrieval over simplex tensors.

    A trial succeeds when the run converges and classifies to a frame
    column; a cell ticks only when every trial succeeds.  Cells run
    concurrently; per-trial seeding keeps the outcome schedule-independent.
    """
    pairs = [(n, d) for n in n_range for d in d_range]
    nw = threads if threads is not None else worker_count()
    if nw > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=nw) as ex:
            futs = [ex.submit(_run_cell, n, d, trials, seed, max_iter, tol) for n, d in pairs]
            cells = tuple(f.result() for f in futs)
    else:
        cells = tuple(_run_cell(n, d, trials, seed, max_iter, tol) for n, d in pairs)
    return ConvergenceGrid(cells=cells)


# -- Mercedes-Benz eigenpair tables ------------------------------------------------


@dataclass(frozen=True)
class TableRow:
    vector: tuple
    eigenvalue: complex
    multiplicity: int
    kind: str  # "real" | "isotropic" | "complex"


@dataclass(frozen=True)
class OrderTable:
    d: int
    rows: tuple
    degenerate: bool = False

    @property
    def multiplicity_total(self) -> int:
        return sum(r.multiplicity for r in self.rows)


def _is_real_pair(p: EigenPair) -> bool:
    return (
        float(np.max(np.abs(np.imag(p.vector)))) <= 1e-9
        and abs(p.eigenvalue.imag) <= 1e-9
    )


def _display_row(p: EigenPair, d: int) -> TableRow:
    """Rescale one eigenpair into the tables' display convention.

    Real pairs keep the representative with nonnegative eigenvalue (for odd
    order the sign of the vector flips the eigenvalue).  Isotropic pairs are
    already at Hermitian norm 1 with second coordinate real positive.
    Other complex pairs are rescaled to Hermitian norm 1 with second
    coordinate real positive, transforming mu by the (d-2)-th power of the
    scaling.
    """
    vec = np.array(p.vector, dtype=complex)
    mu = complex(p.eigenvalue)
    if _is_real_pair(p):
        v = np.real(vec)
        m = mu.real
        if d % 2 == 1 and m < 0.0:
            v, m = -v, -m
        return TableRow(
            vector=tuple(float(x) for x in v),
            eigenvalue=complex(m),
            multiplicity=p.multiplicity,
            kind="real",
        )
    if p.normalization == ISOTROPIC:
        return TableRow(
            vector=tuple(complex(x) for x in vec),
            eigenvalue=mu,
            multiplicity=p.multiplicity,
            kind="isotropic",
        )
    norm = float(np.linalg.norm(vec))
    second = complex(vec[1])
    if second == 0:  # pragma: no cover - (1,0) is real and handled above
        scale = 1.0 / norm
    else:
        scale = abs(second) / (second * norm)
    vec = vec * scale
    mu = mu * scale ** (d - 2)
    return TableRow(
        vector=tuple(complex(x) for x in vec),
        eigenvalue=mu,
        multiplicity=p.multiplicity,
        kind="complex",
    )


def _degenerate_rows(T: SymTensor, F: Frame) -> tuple:
    """Representative rows for an order where every direction is an
    eigenvector (the planar simplex tensor at d = 4): the frame columns and
    one direction orthogonal to the first column, eigenvalues computed
    honestly from the contraction."""
    rows = []
    for j in range(F.r):
        v = F.V[:, j]
        mu, _ = eigen_residual(T, v)
        rows.append(
            TableRow(
                vector=tuple(float(x) for x in v),
                eigenvalue=complex(mu),
                multiplicity=1,
                kind="real",
            )
        )
    v = np.array([F.V[1, 0], -F.V[0, 0]])
    if v[0] < 0 or (v[0] == 0 and v[1] < 0):
        v = -v
    mu, _ = eigen_residual(T, v)
    rows.append(
        TableRow(
            vector=tuple(float(x) for x in v),
            eigenvalue=complex(mu),
            multiplicity=1,
            kind="real",
        )
    )
    return tuple(rows)


def mb_tables(d_range=range(3, 11)) -> list[OrderTable]:
    """Complete eigenpair tables of the Mercedes-Benz tensor per order.

    Orders whose eigenvector form vanishes identically (d = 4, where the
    power map is a multiple of the identity) are flagged degenerate and
    listed through four representative directions so the multiplicity total
    still matches the algebraic count.
    """
    F = mercedes_benz()
    tables = []
    for d in d_range:
        T = allones_tensor(F, d)
        try:
            pairs = all_eigenpairs_2d(T)
            rows = tuple(_display_row(p, d) for p in pairs)
            tables.append(OrderTable(d=d, rows=rows, degenerate=False))
        except DegenerateForm:
            tables.append(OrderTable(d=d, rows=_degenerate_rows(T, F), degenerate=True))
    return tables


def _fmt_float(x: float) -> str:
    return f"{x:.15g}"


def _fmt_complex(z: complex) -> str:
    if abs(z.imag) <= 1e-15:
        return _fmt_float(z.real)
    if abs(z.real) <= 1e-15:
        return f"{_fmt_float(z.imag)}i"
    sign = "+" if z.imag >= 0 else "-"
    return f"{_fmt_float(z.real)}{sign}{_fmt_float(abs(z.imag))}i"


def table_to_text(tables: list[OrderTable]) -> str:
    lines = []
    for t in tables:
        lines.append(f"d = {t.d}" + ("   [degenerate: every direction is an eigenvector]" if t.degenerate else ""))
        lines.append(f"{'eigenvector':<58} {'eigenvalue':<38} mult")
        for r in t.rows:
            vec = "(" + ", ".join(_fmt_complex(complex(x)) for x in r.vector) + ")"
            lines.append(f"{vec:<58} {_fmt_complex(complex(r.eigenvalue)):<38} {r.multiplicity}")
        lines.append("")
    return "\n".join(lines)


def tables_to_dict(tables: list[OrderTable]) -> dict:
    return {
        "orders": [
            {
                "d": t.d,
                "degenerate": t.degenerate,
                "multiplicity_total": t.multiplicity_total,
                "rows": [
                    {
                        "vector": [[complex(x).real, complex(x).imag] for x in r.vector],
                        "eigenvalue": [complex(r.eigenvalue).real, complex(r.eigenvalue).imag],
                        "multiplicity": r.multiplicity,
                        "kind": r.kind,
                    }
                    for r in t.rows
                ],
            }
            for t in tables
        ]
    }


# -- perturbation study --------------------------------------------------------------


@dataclass(frozen=True)
class PerturbationReport:
    """Descriptive outcome of a noise-robustness experiment (no verdict)."""

    frame_r: int
    d: int
    noise_fro: float
    tensor_fro: float
    trials: int
    converged: int
    distances: tuple

    @property
    def max_distance(self) -> float:
        return max(self.distances) if self.distances else math.nan

    @property
    def mean_distance(self) -> float:
        return sum(self.distances) / len(self.distances) if self.distances else math.nan

    def to_dict(self) -> dict:
        return {
            "frame_r": self.frame_r,
            "d": self.d,
            "noise_fro": self.noise_fro,
            "tensor_fro": self.tensor_fro,
            "trials": self.trials,
            "converged": self.converged,
            "max_distance": self.max_distance,
            "mean_distance": self.mean_distance,
        }


def _symmetrize(E: np.ndarray, d: int) -> np.ndarray:
    import itertools

    out = np.zeros_like(E)
    perms = list(itertools.permutations(range(d)))
    for p in perms:
        out += np.transpose(E, p)
    return out / len(perms)


def perturbation_study(
    F: Frame,
    d: int,
    noise_fro: float,
    trials: int = 50,
    seed: int = 0,
    max_iter: int = 200,
    tol: float = 1e-10,
) -> PerturbationReport:
    """Add dense symmetric noise of a given Frobenius norm to the
    unit-coefficient frame tensor, run the power method from seeded random
    starts, and report distances from the recovered limits to the original
    frame columns.  Exploratory: the output is descriptive only.
    """
    T = allones_tensor(F, d)
    base_fro = frobenius_norm(T)
    if noise_fro < 0 or noise_fro > 0.1 * base_fro:
        raise InvalidArgs(
            f"noise_fro must lie in [0, {0.1 * base_fro:.6g}] (10% of ||T||_F), got {noise_fro}"
        )
    D = to_dense(T)
    E = np.asarray(D.entries).copy()
    if noise_fro > 0:
        stream = SplitMix64(derive_seed(seed, 0xE0, F.r, d))
        flat = np.empty(E.size)
        for i in range(0, E.size - 1, 2):
            flat[i], flat[i + 1] = stream.gauss_pair()
        if E.size % 2 == 1:
            flat[-1] = stream.gauss_pair()[0]
        noise = _symmetrize(flat.reshape(E.shape), d)
        nf = float(np.linalg.norm(noise.ravel()))
        if nf > 0:
            E = E + noise * (noise_fro / nf)

    distances = []
    converged = 0
    for t in range(trials):
        stream = SplitMix64(derive_seed(seed, 0xE1, d, t))
        x = sample_sphere(stream, F.n)
        ok = False
        for k in range(1, max_iter + 1):
            y = E
            for _ in range(d - 1):
                y = np.tensordot(x, y, axes=([0], [0]))
            ny = float(np.linalg.norm(y))
            if ny < 1e-300:
                break
            xn = y / ny
            disp = min(np.linalg.norm(xn - x), np.linalg.norm(xn + x))
            x = xn
            if disp <= tol:
                ok = True
                break
        if ok:
            converged += 1
            dist = float(
                np.min(
                    np.minimum(
                        np.linalg.norm(F.V - x[:, None], axis=0),
                        np.linalg.norm(F.V + x[:, None], axis=0),
                    )
                )
            )
            distances.append(dist)
    return PerturbationReport(
        frame_r=F.r,
        d=d,
        noise_fro=float(noise_fro),
        tensor_fro=base_fro,
        trials=trials,
        converged=converged,
        distances=tuple(distances),
    )
