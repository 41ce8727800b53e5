"""Symmetric tensors in decomposition form.

A tensor is stored as unit generator columns V (n x r), coefficients
lambda (r,), and an order d >= 2, representing sum_i lambda_i v_i^{(x)d}.
Every operation works directly on (V, lambda, d); the dense representation
exists only as a brute-force cross-check and for perturbation experiments.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import (
    CapExceeded,
    DimensionMismatch,
    EmptyDecomposition,
    InvalidArgs,
)

#: construction-time tolerance for colinearity merging and coefficient pruning
PRUNE_TOL = 1e-12

#: default residual threshold below which a vector counts as an eigenvector
EIGEN_TOL = 1e-10


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SymTensor:
    """Symmetric order-d tensor sum_i lambda_i v_i^{(x)d} with unit columns v_i."""

    V: np.ndarray
    lambdas: np.ndarray
    d: int

    @property
    def n(self) -> int:
        return self.V.shape[0]

    @property
    def r(self) -> int:
        return self.V.shape[1]


@dataclass(frozen=True)
class DenseTensor:
    """Explicit order-d array with shape (n,)*d, symmetric in all indices."""

    n: int
    d: int
    entries: np.ndarray


def make_sym_tensor(V, lambdas, d: int) -> SymTensor:
    """Build a SymTensor, normalizing columns and canonicalizing the terms.

    Columns are rescaled to unit norm (with lambda absorbing norm^d),
    colinear columns are merged (lambda_k + s^d lambda_l for sign s), and
    terms whose coefficient cancels below PRUNE_TOL (relative) are dropped.
    The represented tensor value is unchanged.
    """
    V = np.asarray(V, dtype=float)
    lam = np.asarray(lambdas, dtype=float)
    if V.ndim != 2:
        raise DimensionMismatch(f"V must be 2-D, got shape {V.shape}")
    if lam.ndim != 1 or lam.shape[0] != V.shape[1]:
        raise DimensionMismatch(
            f"need one coefficient per column: V has {V.shape[1]}, got {lam.shape}"
        )
    if not (isinstance(d, (int, np.integer)) and d >= 2):
        raise InvalidArgs(f"order d must be an integer >= 2, got {d!r}")
    norms = np.linalg.norm(V, axis=0)
    if np.any(norms == 0.0):
        raise InvalidArgs("zero generator column")
    Vn = V / norms
    lam = lam * norms ** float(d)

    kept_cols: list[np.ndarray] = []
    kept_lam: list[float] = []
    for i in range(Vn.shape[1]):
        v = Vn[:, i]
        li = float(lam[i])
        merged = False
        for k, u in enumerate(kept_cols):
            dot = float(u @ v)
            if 1.0 - abs(dot) <= PRUNE_TOL:
                s = 1.0 if dot >= 0 else -1.0
                kept_lam[k] += (s ** d) * li
                merged = True
                break
        if not merged:
            kept_cols.append(v.copy())
            kept_lam.append(li)

    scale = max((abs(x) for x in kept_lam), default=0.0)
    thresh = PRUNE_TOL * max(1.0, scale)
    keep = [k for k, x in enumerate(kept_lam) if abs(x) > thresh]
    if not keep:
        raise EmptyDecomposition("all terms cancelled or pruned away")
    W = np.column_stack([kept_cols[k] for k in keep])
    L = np.array([kept_lam[k] for k in keep])
    return SymTensor(V=_freeze(W), lambdas=_freeze(L), d=int(d))


def _check_vec(T: SymTensor, x) -> np.ndarray:
    x = np.asarray(x)
    if x.shape != (T.n,):
        raise DimensionMismatch(f"expected a vector of length {T.n}, got shape {x.shape}")
    return x


def contract_vec(T: SymTensor, x) -> np.ndarray:
    """T . x^{d-1}: the vector V Lambda (V^T x)^{hadamard (d-1)}."""
    x = _check_vec(T, x)
    return T.V @ (T.lambdas * (T.V.T @ x) ** (T.d - 1))


def contract_mat(T: SymTensor, x) -> np.ndarray:
    """T . x^{d-2}: the symmetric matrix V Lambda diag((V^T x)^{d-2}) V^T."""
    x = _check_vec(T, x)
    w = T.lambdas * (T.V.T @ x) ** (T.d - 2)
    return (T.V * w) @ T.V.T


def to_dense(T: SymTensor, cap: int = 10_000_000) -> DenseTensor:
    """Expand the decomposition into an explicit (n,)*d array."""
    if T.n ** T.d > cap:
        raise CapExceeded(f"n^d = {T.n ** T.d} exceeds the cap {cap}")
    E = np.zeros((T.n,) * T.d)
    for i in range(T.r):
        v = T.V[:, i]
        E += T.lambdas[i] * reduce(np.multiply.outer, [v] * T.d)
    return DenseTensor(n=T.n, d=T.d, entries=_freeze(E))


def dense_contract_vec(D: DenseTensor, x) -> np.ndarray:
    """Brute-force contraction of a dense tensor with d-1 copies of x."""
    x = np.asarray(x)
    if x.shape != (D.n,):
        raise DimensionMismatch(f"expected a vector of length {D.n}, got shape {x.shape}")
    y = D.entries
    for _ in range(D.d - 1):
        y = np.tensordot(x, y, axes=([0], [0]))
    return y


def dense_symmetry_defect(D: DenseTensor, max_perms: int = 5040, seed: int = 0) -> float:
    """Largest deviation of the entries under index permutations.

    Checks all d! axis permutations when that count is at most max_perms,
    otherwise a seeded random sample of them.
    """
    perms = list(itertools.permutations(range(D.d)))
    if len(perms) > max_perms:
        rng = np.random.default_rng(seed)
        perms = [tuple(rng.permutation(D.d)) for _ in range(max_perms)]
    worst = 0.0
    for p in perms:
        worst = max(worst, float(np.max(np.abs(D.entries - np.transpose(D.entries, p)))))
    return worst


def eigen_residual(T: SymTensor, v) -> tuple[float, float]:
    """Rayleigh value mu = <T.v^{d-1}, v> and residual ||T.v^{d-1} - mu v||.

    v counts as an eigenvector when the residual is below the caller's
    tolerance (EIGEN_TOL by default elsewhere in the package).
    """
    v = _check_vec(T, v)
    y = contract_vec(T, v)
    mu = float(np.real(np.vdot(v, y)))
    res = float(np.linalg.norm(y - mu * v))
    return mu, res


def frobenius_norm(T: SymTensor) -> float:
    """||T||_F computed from the decomposition via the Gram matrix.

    <v_i^{(x)d}, v_j^{(x)d}> = <v_i, v_j>^d, so the squared norm is
    lambda^T (G^{hadamard d}) lambda.
    """
    G = T.V.T @ T.V
    val = float(T.lambdas @ (G ** T.d) @ T.lambdas)
    return math.sqrt(max(0.0, val))


# -- JSON round trip -----------------------------------------------------------


def tensor_to_json(T: SymTensor) -> str:
    """Serialize as {"n","r","d","lambdas","V"} with V as a list of columns."""
    doc = {
        "n": T.n,
        "r": T.r,
        "d": T.d,
        "lambdas": [float(x) for x in T.lambdas],
        "V": [[float(x) for x in T.V[:, j]] for j in range(T.r)],
    }
    return json.dumps(doc)


def tensor_from_json(text: str) -> SymTensor:
    """Inverse of tensor_to_json; validates invariants but keeps values bit-exact."""
    try:
        doc = json.loads(text)
        n, r, d = int(doc["n"]), int(doc["r"]), int(doc["d"])
        lam = np.asarray(doc["lambdas"], dtype=float)
        V = np.asarray(doc["V"], dtype=float).T
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidArgs(f"malformed tensor JSON: {e}") from e
    if V.shape != (n, r) or lam.shape != (r,):
        raise DimensionMismatch(f"inconsistent shapes in tensor JSON: V {V.shape}, lambdas {lam.shape}")
    if d < 2 or r < 1 or n < 1:
        raise InvalidArgs("need n >= 1, r >= 1, d >= 2")
    norms = np.linalg.norm(V, axis=0)
    if np.any(np.abs(norms - 1.0) > 1e-9):
        raise InvalidArgs("stored generator columns must be unit norm")
    if np.any(lam == 0.0):
        raise InvalidArgs("stored coefficients must be nonzero")
    return SymTensor(V=_freeze(V), lambdas=_freeze(lam), d=d)
