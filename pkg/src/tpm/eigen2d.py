"""Complete enumeration of complex projective eigenpairs for n = 2.

An eigenvector (u, v) of a planar symmetric tensor T makes the contraction
T.(u,v)^{d-1} parallel to (u,v), i.e. it is a root of the homogeneous
binary form g(u, v) = (T.x^{d-1})_1 v - (T.x^{d-1})_2 u of degree d.
Dehomogenizing at t = u/v turns g into a univariate polynomial whose roots
(plus possibly the direction (1, 0) at infinity) enumerate all projective
eigenvectors; multiplicities sum to ((d-1)^2 - 1)/(d-2) = d.

Representatives are normalized with the bilinear form u^2 + v^2 = 1 where
possible.  Isotropic directions (u^2 + v^2 = 0) cannot meet that
normalization and are reported at Hermitian norm 1 with the second
coordinate real positive; their eigenvalue depends on that choice of
representative.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateForm, InvalidArgs, MultiplicityMismatch, NoConvergence
from .linalg import PolyC, poly_roots
from .tensor import SymTensor, contract_vec

BILINEAR = "bilinear"
ISOTROPIC = "isotropic"

#: relative threshold under which the whole form counts as identically zero
FORM_ZERO_TOL = 1e-12

#: stopping tolerance handed to the root finder
ROOT_TOL = 1e-10


@dataclass(frozen=True)
class EigenPair:
    """One projective eigenpair: a normalized representative, its eigenvalue
    for exactly that representative, and the root multiplicity."""

    vector: np.ndarray
    eigenvalue: complex
    multiplicity: int
    normalization: str


@dataclass(frozen=True)
class EigenForm:
    """Dehomogenized eigenvector form g(t, 1) plus bookkeeping for the
    direction (1, 0): infinity_multiplicity leading coefficients of the
    degree-d form vanish."""

    poly: PolyC
    infinity_multiplicity: int
    scale: float


def eigen_form(T: SymTensor) -> EigenForm:
    """Coefficients of g(t, 1) for a planar tensor.

    Raises DegenerateForm when g vanishes identically (every direction is an
    eigenvector, as happens for the unit-coefficient Mercedes-Benz tensor at
    d = 4, whose power map is a multiple of the identity).
    """
    if T.n != 2:
        raise InvalidArgs(f"eigen_form needs a 2-dimensional tensor, got n = {T.n}")
    d = T.d
    p1 = np.zeros(d, dtype=float)
    p2 = np.zeros(d, dtype=float)
    for i in range(T.r):
        a, b = float(T.V[0, i]), float(T.V[1, i])
        lam = float(T.lambdas[i])
        for k in range(d):
            c = math.comb(d - 1, k) * a**k * b ** (d - 1 - k)
            p1[k] += lam * a * c
            p2[k] += lam * b * c
    g = np.zeros(d + 1, dtype=float)
    g[: d] += p1
    g[1:] -= p2
    scale = max(float(np.max(np.abs(p1))), float(np.max(np.abs(p2))), 1e-300)
    if float(np.max(np.abs(g))) <= FORM_ZERO_TOL * scale:
        raise DegenerateForm(
            "the eigenvector form vanishes identically: every direction is an eigenvector"
        )
    inf_mult = 0
    gmax = float(np.max(np.abs(g)))
    while inf_mult < d and abs(g[d - inf_mult]) <= FORM_ZERO_TOL * gmax:
        inf_mult += 1
    coeffs = g[: d + 1 - inf_mult]
    return EigenForm(poly=PolyC(coeffs), infinity_multiplicity=inf_mult, scale=scale)


def cs_count(n: int, d: int) -> int:
    """((d-1)^n - 1)/(d-2): total projective eigenvectors with multiplicity
    when there are finitely many."""
    if not (isinstance(n, (int, np.integer)) and isinstance(d, (int, np.integer))):
        raise InvalidArgs("n and d must be integers")
    if n < 1 or d < 3:
        raise InvalidArgs(f"need n >= 1 and d >= 3, got n={n}, d={d}")
    n, d = int(n), int(d)
    return ((d - 1) ** n - 1) // (d - 2)


def _normalize_direction(direction: np.ndarray, tol: float) -> tuple[np.ndarray, str]:
    z = direction / np.linalg.norm(direction)
    q = complex(z[0] * z[0] + z[1] * z[1])
    if abs(q) <= tol:
        # isotropic: Hermitian norm 1, second coordinate real positive
        phase = abs(z[1]) / z[1]
        return z * phase, ISOTROPIC
    y = z / cmath.sqrt(q)
    k = 0 if abs(y[0]) > abs(y[1]) else 1
    w = complex(y[k])
    if not (w.real > 0.0 or (w.real == 0.0 and w.imag > 0.0)):
        y = -y
    return y, BILINEAR


def all_eigenpairs_2d(T: SymTensor, tol: float = 1e-9, root_seed: int = 0) -> list[EigenPair]:
    """All projective eigenpairs of a planar tensor, with multiplicities.

    Roots of the eigenvector form are found by simultaneous iteration and
    mapped to normalized representatives; the eigenvalue is read off the
    larger-modulus coordinate of the contraction for numerical stability.
    Multiplicities are cross-checked against the algebraic total d; a
    mismatch raises MultiplicityMismatch rather than renormalizing.
    """
    form = eigen_form(T)
    d = T.d
    items: list[tuple[np.ndarray, int]] = []
    if form.poly.degree >= 1:
        for t, mult in poly_roots(form.poly, tol=ROOT_TOL, seed=root_seed):
            items.append((np.array([t, 1.0 + 0j]), mult))
    if form.infinity_multiplicity > 0:
        items.append((np.array([1.0 + 0j, 0j]), form.infinity_multiplicity))

    pairs: list[EigenPair] = []
    total = 0
    for direction, mult in items:
        rep, kind = _normalize_direction(direction, tol)
        y = contract_vec(T, rep)
        k = int(np.argmax(np.abs(rep)))
        mu = complex(y[k] / rep[k])
        resid = float(np.linalg.norm(y - mu * rep))
        if resid > 1e-8 * (1.0 + abs(mu)):
            raise NoConvergence(
                f"eigenpair residual {resid:.3e} too large for direction {rep.tolist()}"
            )
        rep_arr = np.asarray(rep, dtype=complex)
        rep_arr.setflags(write=False)
        pairs.append(
            EigenPair(vector=rep_arr, eigenvalue=mu, multiplicity=mult, normalization=kind)
        )
        total += mult
    expected = cs_count(2, d) if d >= 3 else d
    if total != expected:
        raise MultiplicityMismatch(
            f"multiplicities sum to {total}, expected {expected} for d = {d}"
        )

    def sort_key(p: EigenPair):
        u, v = complex(p.vector[0]), complex(p.vector[1])
        ratio = u / v if v != 0 else complex(math.inf)
        is_complex = abs(u.imag) + abs(v.imag) > 1e-12
        re = ratio.real if math.isfinite(ratio.real) else math.inf
        im = ratio.imag if math.isfinite(ratio.imag) else 0.0
        return (is_complex, re, im)

    pairs.sort(key=sort_key)
    return pairs
