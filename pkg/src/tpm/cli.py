"""Command-line interface: one binary, one subcommand per experiment.

Exit codes: 0 success, 1 validation error (bad flags, malformed files,
unmet preconditions), 2 numeric failure (NoConvergence, DegenerateForm and
friends).  Every --out file is written atomically (temp file + rename).
The worker count for parallel subcommands is capped by TPM_THREADS.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import basins, experiments, frames, power, robustness
from .eigen2d import all_eigenpairs_2d
from .errors import NUMERIC_ERRORS, InvalidArgs, TpmError
from .tensor import tensor_from_json


def atomic_write(path: str | Path, data) -> None:
    """Write bytes or text via a temp file in the target directory + rename."""
    path = Path(path)
    mode = "wb" if isinstance(data, (bytes, bytearray)) else "w"
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=path.name + ".")
    try:
        with os.fdopen(fd, mode) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _parse_vector(text: str) -> np.ndarray:
    try:
        return np.array([float(p) for p in text.split(",")])
    except ValueError as e:
        raise InvalidArgs(f"could not parse vector {text!r}: {e}") from e


def _parse_range(text: str) -> range:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return range(int(lo), int(hi) + 1)
    v = int(text)
    return range(v, v + 1)


def _load_tensor(args) -> tuple:
    """Tensor from --tensor JSON or built from --frame/--d; returns (T, frame)."""
    if getattr(args, "tensor", None):
        T = tensor_from_json(Path(args.tensor).read_text())
        frame = None
        try:
            frame = frames.validate_frame(T.V)
        except TpmError:
            pass
        return T, frame
    if getattr(args, "frame", None):
        if not getattr(args, "d", None):
            raise InvalidArgs("--frame needs --d to build a tensor")
        F = frames.resolve_frame(args.frame)
        return experiments.allones_tensor(F, args.d), F
    raise InvalidArgs("need either --tensor FILE or --frame NAME with --d")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidArgs(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="tpm",
        description="Tensor power method toolkit: frames, robustness certificates, "
        "planar eigenpair tables, convergence grids, basin rasters.",
    )
    sub = p.add_subparsers(dest="cmd", required=True)

    fr = sub.add_parser("frames", help="frame catalog and validation")
    frsub = fr.add_subparsers(dest="frames_cmd", required=True)
    frsub.add_parser("list", help="print the named frame catalog")
    frv = frsub.add_parser("validate", help="validate a frame JSON file")
    frv.add_argument("file")
    frv.add_argument("--tol", type=float, default=frames.FRAME_TOL)

    rn = sub.add_parser(
        "run",
        help="run the power iteration from one start",
        epilog="Defaults --iters 100 --tol 1e-10 match the convergence-grid "
        "experiment budget used by `tpm table1`.",
    )
    rn.add_argument("--tensor", help="tensor JSON file")
    rn.add_argument("--frame", help="catalog frame name (with --d)")
    rn.add_argument("--d", type=int, help="order for --frame tensors")
    rn.add_argument("--x0", required=True, help="comma-separated start vector")
    rn.add_argument("--iters", type=int, default=100)
    rn.add_argument("--tol", type=float, default=1e-10)
    rn.add_argument("--trace", help="write the trajectory as CSV")

    ct = sub.add_parser("certify", help="robustness certificate for an eigenvector")
    ct.add_argument("--tensor", help="tensor JSON file")
    ct.add_argument("--frame", help="catalog frame name (with --d)")
    ct.add_argument("--d", type=int)
    ct.add_argument("--vector", help="comma-separated eigenvector")
    ct.add_argument("--vector-index", type=int, help="1-based generator column")
    ct.add_argument("--out", help="write the JSON certificate here")

    e2 = sub.add_parser("eigen2d", help="all complex eigenpairs of a planar tensor")
    e2.add_argument("--tensor", help="tensor JSON file")
    e2.add_argument("--frame", help="catalog frame name (with --d)")
    e2.add_argument("--d", type=int)
    e2.add_argument("--format", choices=["table", "json", "csv"], default="table")
    e2.add_argument("--out")

    bs = sub.add_parser(
        "basins",
        help="rasterize basins of attraction over the unit disk",
        epilog="Default --iters 200 doubles the convergence-grid budget so "
        "slow fractal boundaries resolve instead of reading 'none'.",
    )
    bs.add_argument("--d", type=int, required=True)
    bs.add_argument("--frame", default="mb")
    bs.add_argument("--res", type=int, default=512)
    bs.add_argument("--iters", type=int, default=basins.RENDER_MAX_ITER)
    bs.add_argument("--tol", type=float, default=1e-10)
    bs.add_argument("--out", required=True, help="PPM output path (sidecar JSON alongside)")

    t1 = sub.add_parser(
        "table1",
        help="convergence grid over regular-simplex tensors",
        epilog="Defaults --trials 20 --seed 7 --iters 100 --tol 1e-10; the "
        "iteration budget and threshold are the grid experiment's own "
        "settings. CSV columns: n,d,trials,successes,verdict.",
    )
    t1.add_argument("--n", default="2..10", help="dimension range, e.g. 2..10")
    t1.add_argument("--d", default="2..10", help="order range, e.g. 2..10")
    t1.add_argument("--trials", type=int, default=20)
    t1.add_argument("--seed", type=int, default=7)
    t1.add_argument("--iters", type=int, default=100)
    t1.add_argument("--tol", type=float, default=1e-10)
    t1.add_argument("--out", help="write the grid CSV here")

    mt = sub.add_parser("mbtables", help="Mercedes-Benz eigenpair tables per order")
    mt.add_argument("--d", default="3..10", help="order range, e.g. 3..10")
    mt.add_argument("--out", help="write tables JSON here")

    pb = sub.add_parser("perturb", help="noise-robustness study (descriptive only)")
    pb.add_argument("--frame", default="mb")
    pb.add_argument("--d", type=int, required=True)
    pb.add_argument("--noise", type=float, required=True, help="Frobenius norm of the noise")
    pb.add_argument("--trials", type=int, default=50)
    pb.add_argument("--seed", type=int, default=0)
    return p


# -- handlers ------------------------------------------------------------------


def _cmd_frames(args) -> int:
    if args.frames_cmd == "list":
        print(f"{'name':<12} {'n':>3} {'r':>3} {'alpha':>16} {'etf':>5}")
        for name in ["mb", "simplex3", "cube", "icosahedron", "lines16", "es4x6"]:
            F = frames.CATALOG[name]()
            print(f"{name:<12} {F.n:>3} {F.r:>3} {F.alpha:>16.12f} {str(F.is_etf).lower():>5}")
        return 0
    F = frames.frame_from_json(Path(args.file).read_text(), tol=args.tol)
    G = F.V.T @ F.V
    off = np.abs(G[~np.eye(F.r, dtype=bool)]) if F.r > 1 else np.array([0.0])
    kdim = len(frames.kernel_basis(F.V))
    print(f"n={F.n} r={F.r}")
    print(f"alpha={F.alpha:.12g} spread={float(np.max(off) - np.min(off)):.3e}")
    print(f"etf={str(F.is_etf).lower()} etf_residual_fro={float(np.linalg.norm(F.V @ F.V.T - (F.r / F.n) * np.eye(F.n))):.3e}")
    print(f"kernel_dim={kdim}")
    return 0


def _cmd_run(args) -> int:
    T, frame = _load_tensor(args)
    x0 = _parse_vector(args.x0)
    res = power.run(
        T,
        x0,
        max_iter=args.iters,
        tol=args.tol,
        frame=frame,
        record_trajectory=bool(args.trace),
    )
    if args.trace:
        lines = ["k," + ",".join(f"x{i + 1}" for i in range(T.n)) + ",displacement"]
        prev = None
        for k, x in enumerate(res.trajectory):
            if prev is None:
                disp = ""
            else:
                disp = f"{min(float(np.linalg.norm(x - prev)), float(np.linalg.norm(x + prev))):.17g}"
            lines.append(f"{k}," + ",".join(f"{float(c):.17g}" for c in x) + f",{disp}")
            prev = x
        atomic_write(args.trace, "\n".join(lines) + "\n")
    print(
        json.dumps(
            {
                "converged": res.converged,
                "iterations": res.iterations,
                "final_x": [float(c) for c in res.final_x],
                "limit_class": res.limit_class,
            }
        )
    )
    return 0


def _cmd_certify(args) -> int:
    T, frame = _load_tensor(args)
    if args.vector is not None:
        v = _parse_vector(args.vector)
        nrm = float(np.linalg.norm(v))
        if nrm == 0:
            raise InvalidArgs("--vector must be nonzero")
        v = v / nrm
    elif args.vector_index is not None:
        j = args.vector_index - 1
        if not 0 <= j < T.r:
            raise InvalidArgs(f"--vector-index must be in [1, {T.r}]")
        v = T.V[:, j]
    else:
        raise InvalidArgs("need --vector or --vector-index")
    cert = robustness.certify(T, v, context=frame)
    text = json.dumps(cert.to_dict(), indent=2)
    if args.out:
        atomic_write(args.out, text + "\n")
    print(text)
    return 0


def _cmd_eigen2d(args) -> int:
    T, _ = _load_tensor(args)
    pairs = all_eigenpairs_2d(T)
    rows = [experiments._display_row(p, T.d) for p in pairs]
    table = experiments.OrderTable(d=T.d, rows=tuple(rows))
    if args.format == "json":
        text = json.dumps(experiments.tables_to_dict([table]))
    elif args.format == "csv":
        lines = ["vector,eigenvalue,multiplicity"]
        for r in rows:
            vec = " ".join(experiments._fmt_complex(complex(x)) for x in r.vector)
            lines.append(f"{vec},{experiments._fmt_complex(complex(r.eigenvalue))},{r.multiplicity}")
        text = "\n".join(lines) + "\n"
    else:
        text = experiments.table_to_text([table])
    if args.out:
        atomic_write(args.out, text)
    print(text, end="" if text.endswith("\n") else "\n")
    return 0


def _cmd_basins(args) -> int:
    F = frames.resolve_frame(args.frame)
    T = experiments.allones_tensor(F, args.d)
    grid = basins.render_basins(T, F, args.res, max_iter=args.iters, tol=args.tol)
    atomic_write(args.out, basins.grid_to_ppm(grid))
    sidecar = Path(args.out).with_suffix(".json")
    atomic_write(sidecar, json.dumps(basins.grid_sidecar(grid), indent=2) + "\n")
    print(f"wrote {args.out} and {sidecar}")
    return 0


def _cmd_table1(args) -> int:
    grid = experiments.convergence_table(
        n_range=_parse_range(args.n),
        d_range=_parse_range(args.d),
        trials=args.trials,
        seed=args.seed,
        max_iter=args.iters,
        tol=args.tol,
    )
    if args.out:
        atomic_write(args.out, grid.to_csv())
    print(grid.to_text(), end="")
    return 0


def _cmd_mbtables(args) -> int:
    tables = experiments.mb_tables(_parse_range(args.d))
    if args.out:
        atomic_write(args.out, json.dumps(experiments.tables_to_dict(tables)) + "\n")
    print(experiments.table_to_text(tables), end="")
    return 0


def _cmd_perturb(args) -> int:
    F = frames.resolve_frame(args.frame)
    report = experiments.perturbation_study(
        F, args.d, args.noise, trials=args.trials, seed=args.seed
    )
    print(json.dumps(report.to_dict(), indent=2))
    return 0


_HANDLERS = {
    "frames": _cmd_frames,
    "run": _cmd_run,
    "certify": _cmd_certify,
    "eigen2d": _cmd_eigen2d,
    "basins": _cmd_basins,
    "table1": _cmd_table1,
    "mbtables": _cmd_mbtables,
    "perturb": _cmd_perturb,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _HANDLERS[args.cmd](args)
    except SystemExit as e:  # --help
        return int(e.code or 0)
    except TpmError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 2 if isinstance(e, NUMERIC_ERRORS) else 1
    except FileNotFoundError as e:
        print(f"FileNotFound: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
