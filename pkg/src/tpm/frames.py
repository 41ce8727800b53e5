"""Equiangular sets and equiangular tight frames.

A frame is a matrix of unit columns whose pairwise inner products share one
absolute value alpha; it is tight when V V^T = (r/n) I.  The catalog holds
the concrete frames used throughout: the Mercedes-Benz frame, regular
simplex frames, cube diagonals, icosahedron diagonals, 16 equiangular lines
in R^6, and a 6-line equiangular set in R^4 that is not tight.  Catalog
matrices are hard-coded as radical expressions evaluated in double
precision so the construction is auditable.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DimensionMismatch, InvalidArgs, NotEquiangular, NotUnitNorm
from .tensor import _freeze

#: default absolute tolerance on inner products for frame validation
FRAME_TOL = 1e-10


@dataclass(frozen=True)
class Frame:
    """Unit-column matrix with common coherence alpha and sign matrix sigma."""

    V: np.ndarray
    alpha: float
    sigma: np.ndarray
    is_etf: bool

    @property
    def n(self) -> int:
        return self.V.shape[0]

    @property
    def r(self) -> int:
        return self.V.shape[1]


def welch_bound(n: int, r: int) -> float:
    """Lower bound sqrt((r-n)/(n(r-1))) on the worst coherence of r unit
    vectors in R^n; met exactly by tight equiangular frames."""
    if n < 1 or r < n:
        raise InvalidArgs(f"need r >= n >= 1, got n={n}, r={r}")
    if r == n:
        return 0.0
    return math.sqrt((r - n) / (n * (r - 1)))


def etf_residual(V: np.ndarray) -> float:
    """Max-entry deviation of V V^T from (r/n) I."""
    n, r = V.shape
    return float(np.max(np.abs(V @ V.T - (r / n) * np.eye(n))))


def validate_frame(V, tol: float = FRAME_TOL) -> Frame:
    """Check unit norms and equiangularity; fill alpha, sigma and the ETF flag.

    Raises NotUnitNorm or NotEquiangular (reporting the worst pair and the
    spread of |<v_i, v_j>|).  The ETF flag tests V V^T = (r/n) I entrywise
    within tol.
    """
    V = np.asarray(V, dtype=float)
    if V.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {V.shape}")
    n, r = V.shape
    norms = np.linalg.norm(V, axis=0)
    worst = int(np.argmax(np.abs(norms - 1.0)))
    if abs(norms[worst] - 1.0) > tol:
        raise NotUnitNorm(f"column {worst + 1} has norm {norms[worst]:.12g}")
    G = V.T @ V
    off = ~np.eye(r, dtype=bool)
    if r >= 2:
        a = np.abs(G[off])
        amax, amin = float(np.max(a)), float(np.min(a))
        if amax - amin > tol:
            iw, jw = np.unravel_index(np.argmax(np.abs(np.abs(G) - (amax + amin) / 2) * off), G.shape)
            raise NotEquiangular(
                f"|<v_i,v_j>| spread {amax - amin:.3e} exceeds {tol:.1e} "
                f"(worst pair ({iw + 1},{jw + 1}), range [{amin:.12g}, {amax:.12g}])"
            )
        alpha = (amax + amin) / 2.0
    else:
        alpha = 0.0
    if alpha > tol:
        sigma = np.where(G >= 0.0, 1.0, -1.0)
        np.fill_diagonal(sigma, 1.0)
    else:
        # orthonormal case: signs are immaterial, fixed to +1 by convention
        sigma = np.ones((r, r))
    is_etf = etf_residual(V) <= tol
    return Frame(V=_freeze(V.copy()), alpha=alpha, sigma=_freeze(sigma), is_etf=bool(is_etf))


# -- constructors ----------------------------------------------------------------


def regular_simplex(n: int) -> Frame:
    """The n+1 vertices of a regular simplex in R^n as unit columns.

    v_i = sqrt(1 + 1/n) e_i - (sqrt(n+1) - 1)/n^{3/2} * ones  for i <= n,
    v_{n+1} = -ones/sqrt(n).  Coherence alpha = 1/n with all pairwise signs
    negative; tight with V V^T = ((n+1)/n) I.
    """
    if not (isinstance(n, (int, np.integer)) and n >= 2):
        raise InvalidArgs(f"need integer n >= 2, got {n!r}")
    V = np.full((n, n + 1), -(math.sqrt(n + 1) - 1.0) / n ** 1.5)
    for i in range(n):
        V[i, i] += math.sqrt(1.0 + 1.0 / n)
    V[:, n] = -1.0 / math.sqrt(n)
    return validate_frame(V)


def mercedes_benz() -> Frame:
    """Three unit vectors in the plane at mutual angle 120 degrees."""
    s = math.sqrt(3.0) / 2.0
    V = np.array([[0.0, s, -s], [1.0, -0.5, -0.5]])
    return validate_frame(V)


def cube_diagonals() -> Frame:
    """The four diagonals of a cube in R^3 (alpha = 1/3, tight)."""
    V = np.array(
        [
            [1.0, -1.0, -1.0, -1.0],
            [1.0, 1.0, -1.0, 1.0],
            [1.0, 1.0, 1.0, -1.0],
        ]
    ) / math.sqrt(3.0)
    return validate_frame(V)


def icosahedron() -> Frame:
    """The six diagonals of a regular icosahedron in R^3 (alpha = 1/sqrt(5))."""
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    V = np.array(
        [
            [0.0, 0.0, 1.0, -1.0, phi, -phi],
            [1.0, -1.0, phi, phi, 0.0, 0.0],
            [phi, phi, 0.0, 0.0, 1.0, 1.0],
        ]
    ) / math.sqrt(1.0 + phi * phi)
    return validate_frame(V)


def lines16_r6() -> Frame:
    """Sixteen equiangular lines in R^6 (alpha = 1/3, tight)."""
    rows = [
        [1, -1, -1, -1, -1, -1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1],
        [1, -1, 1, 1, 1, 1, -1, -1, -1, -1, 1, 1, 1, 1, 1, 1],
        [1, 1, -1, 1, 1, 1, -1, 1, 1, 1, -1, -1, -1, 1, 1, 1],
        [1, 1, 1, -1, 1, 1, 1, -1, 1, 1, -1, 1, 1, -1, -1, 1],
        [1, 1, 1, 1, -1, 1, 1, 1, -1, 1, 1, -1, 1, -1, 1, -1],
        [1, 1, 1, 1, 1, -1, 1, 1, 1, -1, 1, 1, -1, 1, -1, -1],
    ]
    V = np.array(rows, dtype=float) / math.sqrt(6.0)
    return validate_frame(V)


def es_r4_6lines() -> Frame:
    """Six equiangular lines in R^4 (alpha = 1/3) forming a set that is not tight."""
    s2, s6 = math.sqrt(2.0), math.sqrt(6.0)
    V = np.array(
        [
            [1.0, 1 / 3, 1 / 3, 1 / 3, 1 / 3, 1 / 3],
            [0.0, 2 * s2 / 3, -s2 / 3, -s2 / 3, -s2 / 3, -s2 / 3],
            [0.0, 0.0, s6 / 3, 0.0, -s6 / 3, 0.0],
            [0.0, 0.0, 0.0, s6 / 3, 0.0, -s6 / 3],
        ]
    )
    return validate_frame(V)


#: named frame constructors exposed on the command line
CATALOG = {
    "mb": mercedes_benz,
    "simplex3": lambda: regular_simplex(3),
    "cube": cube_diagonals,
    "icosahedron": icosahedron,
    "lines16": lines16_r6,
    "es4x6": es_r4_6lines,
}


def resolve_frame(name: str) -> Frame:
    """Look up a catalog frame by name; 'simplexN' builds regular_simplex(N)."""
    if name in CATALOG:
        return CATALOG[name]()
    if name.startswith("simplex"):
        try:
            return regular_simplex(int(name[len("simplex"):]))
        except ValueError:
            pass
    raise InvalidArgs(f"unknown frame {name!r}; known: {', '.join(sorted(CATALOG))} or simplexN")


# -- kernel machinery ------------------------------------------------------------


def kernel_basis(V, tol: float = 1e-10) -> list[np.ndarray]:
    """Orthonormal basis of {x : V x = 0} as a list of vectors.

    Rank is decided by singular values below tol times the largest one.
    """
    B = linalg.nullspace(np.asarray(V, dtype=float), rel_tol=tol)
    return [B[:, j].copy() for j in range(B.shape[1])]


def kernel_condition_holds(
    F: Frame, lambdas, d: int, j: int, tol: float = 1e-10
) -> tuple[bool, float | None]:
    """Test whether column j of the frame is forced to be an eigenvector.

    Searches for mu_j such that the vector with entries lambda_i *
    sigma_{i,j}^{d-1} (and mu_j in slot j) lies in Ker(V): the least-squares
    optimum is mu_j = -v_j . (V w0), accepted when the residual is below
    tol.  Returns (True, mu_j) on success, (False, None) otherwise.
    """
    lam = np.asarray(lambdas, dtype=float)
    if lam.shape != (F.r,):
        raise DimensionMismatch(f"need {F.r} coefficients, got shape {lam.shape}")
    if not 0 <= j < F.r:
        raise InvalidArgs(f"column index {j} out of range [0, {F.r})")
    w0 = lam * F.sigma[:, j] ** (d - 1)
    w0[j] = 0.0
    base = F.V @ w0
    vj = F.V[:, j]
    mu = -float(vj @ base)
    residual = float(np.linalg.norm(base + mu * vj))
    scale = max(1.0, float(np.max(np.abs(lam))))
    if residual <= tol * scale:
        return True, mu
    return False, None


# -- JSON ------------------------------------------------------------------------


def frame_to_json(F: Frame) -> str:
    """Serialize as {"n","r","V","alpha","is_etf"} with V as a list of columns."""
    doc = {
        "n": F.n,
        "r": F.r,
        "V": [[float(x) for x in F.V[:, j]] for j in range(F.r)],
        "alpha": float(F.alpha),
        "is_etf": bool(F.is_etf),
    }
    return json.dumps(doc)


def frame_from_json(text: str, tol: float = FRAME_TOL) -> Frame:
    """Read a frame JSON document and re-validate it."""
    try:
        doc = json.loads(text)
        V = np.asarray(doc["V"], dtype=float).T
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidArgs(f"malformed frame JSON: {e}") from e
    return validate_frame(V, tol=tol)
