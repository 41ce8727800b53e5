"""Self-contained small dense numeric kernels.

Symmetric eigenproblems are solved with cyclic Jacobi rotations, singular
values and nullspaces with one-sided Jacobi orthogonalization, and complex
polynomial roots with Durand-Kerner (Weierstrass) simultaneous iteration.
All matrices here are tiny (side <= 64), where Jacobi methods deliver
orthogonality to machine precision; nothing depends on a BLAS/LAPACK build.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgs, NoConvergence, NotSymmetric

_MAX_SIDE = 64


def _symmetry_defect(M: np.ndarray) -> float:
    return float(np.max(np.abs(M - M.T))) if M.size else 0.0


def check_symmetric(M: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Return M as a float array, raising NotSymmetric if it visibly is not."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got shape {M.shape}")
    defect = _symmetry_defect(M)
    scale = max(1.0, float(np.max(np.abs(M))) if M.size else 0.0)
    if defect > tol * scale:
        raise NotSymmetric(f"asymmetry {defect:.3e} exceeds {tol:.1e} * {scale:.3e}")
    return M


def sym_eigen(M, off_target: float = 1e-13, max_sweeps: int = 100):
    """Eigendecomposition of a small symmetric matrix by cyclic Jacobi rotations.

    Sweeps run until the off-diagonal Frobenius norm drops below
    ``off_target * ||M||_F``.  Returns ``(w, Q)`` with eigenvalues ``w``
    sorted ascending and orthonormal eigenvector columns ``Q`` such that
    ``M = Q diag(w) Q^T``.
    """
    M = check_symmetric(M)
    n = M.shape[0]
    if n > _MAX_SIDE:
        raise InvalidArgs(f"matrix side {n} exceeds the supported maximum {_MAX_SIDE}")
    A = (M + M.T) / 2.0
    Q = np.eye(n)
    fro = float(np.linalg.norm(A))
    if fro == 0.0 or n == 1:
        return np.diag(A).copy(), Q
    target = off_target * fro
    skip = target / (4.0 * n * n)
    for _ in range(max_sweeps):
        # norm the off-diagonal part directly: subtracting diagonal mass from
        # the full norm cancels catastrophically once off gets small
        off = float(np.linalg.norm(A - np.diag(np.diag(A))))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= skip:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rp, rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                cp, cq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
                A[p, q] = 0.0
                A[q, p] = 0.0
                qp, qq = Q[:, p].copy(), Q[:, q].copy()
                Q[:, p] = c * qp - s * qq
                Q[:, q] = s * qp + c * qq
    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    return w[order], Q[:, order]


def spectral_norm_sym(M) -> float:
    """Largest absolute eigenvalue of a symmetric matrix (= its spectral norm)."""
    w, _ = sym_eigen(M)
    return float(np.max(np.abs(w))) if w.size else 0.0


def _one_sided_jacobi(A: np.ndarray, tol: float = 1e-14, max_sweeps: int = 60):
    """Orthogonalize the columns of A by right plane rotations.

    Returns ``(B, W, sigma)`` with ``A @ W = B``, ``W`` orthogonal, the
    columns of ``B`` mutually orthogonal, and ``sigma`` their norms (the
    singular values of A, unsorted).  Unlike Gram-matrix methods this keeps
    full relative accuracy on small singular values.
    """
    B = np.array(A, dtype=float, copy=True)
    m, k = B.shape
    W = np.eye(k)
    for _ in range(max_sweeps):
        rotated = False
        for p in range(k - 1):
            for q in range(p + 1, k):
                apq = float(B[:, p] @ B[:, q])
                app = float(B[:, p] @ B[:, p])
                aqq = float(B[:, q] @ B[:, q])
                if apq == 0.0 or abs(apq) <= tol * math.sqrt(app * aqq):
                    continue
                rotated = True
                theta = (aqq - app) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                bp, bq = B[:, p].copy(), B[:, q].copy()
                B[:, p] = c * bp - s * bq
                B[:, q] = s * bp + c * bq
                wp, wq = W[:, p].copy(), W[:, q].copy()
                W[:, p] = c * wp - s * wq
                W[:, q] = s * wp + c * wq
        if not rotated:
            break
    sigma = np.linalg.norm(B, axis=0)
    return B, W, sigma


def singular_values(A) -> np.ndarray:
    """Singular values of a small dense matrix, sorted descending."""
    A = np.asarray(A, dtype=float)
    _, _, sigma = _one_sided_jacobi(A)
    return np.sort(sigma)[::-1][: min(A.shape)]


def nullspace(A, rel_tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis of {x : A x = 0} as columns of a (k, dim) array.

    A direction counts as null when its singular value is at most
    ``rel_tol`` times the largest one.  Each basis vector b satisfies
    ``||A b|| <= rel_tol * sigma_max``.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise InvalidArgs(f"expected a 2-D array, got shape {A.shape}")
    k = A.shape[1]
    _, W, sigma = _one_sided_jacobi(A)
    smax = float(np.max(sigma)) if sigma.size else 0.0
    keep = sigma <= rel_tol * smax
    basis = W[:, keep]
    # canonical signs: largest-magnitude entry positive
    for j in range(basis.shape[1]):
        i = int(np.argmax(np.abs(basis[:, j])))
        if basis[i, j] < 0:
            basis[:, j] = -basis[:, j]
    order = np.argsort([-float(s) for s in sigma[keep]], kind="stable")
    return basis[:, order] if basis.size else basis.reshape(k, 0)


# -- complex polynomials -------------------------------------------------------


@dataclass(frozen=True)
class PolyC:
    """Complex polynomial with coefficients in ascending degree order.

    Trailing zero coefficients are stripped at construction so the leading
    coefficient is nonzero (except for the zero polynomial, kept as a single
    zero entry).
    """

    coeffs: tuple

    def __init__(self, coeffs):
        cs = [complex(c) for c in coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        if not cs:
            cs = [0j]
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def derivative(self) -> "PolyC":
        if self.degree == 0:
            return PolyC([0j])
        return PolyC([k * c for k, c in enumerate(self.coeffs)][1:])


def winding_number(p: PolyC, center: complex, radius: float, samples: int = 256) -> int:
    """Roots of p inside the circle, counted with multiplicity.

    Accumulates the argument change of p around the circle (argument
    principle, sampled at ``samples`` points).
    """
    total = 0.0
    prev = p(center + radius)
    for j in range(1, samples + 1):
        z = center + radius * cmath.exp(2j * math.pi * j / samples)
        cur = p(z)
        if cur == 0 or prev == 0:
            raise NoConvergence("polynomial vanishes on the sampling circle")
        total += cmath.phase(cur / prev)
        prev = cur
    return round(total / (2.0 * math.pi))


def _dk_initial_points(monic, degree: int, seed: int):
    radius = 1.0 + max(abs(c) for c in monic[:-1])
    state = (seed * 6364136223846793005 + 1442695040888963407) & ((1 << 64) - 1)
    pts = []
    for k in range(degree):
        state = (state * 6364136223846793005 + 1442695040888963407) & ((1 << 64) - 1)
        jitter = 1.0 + 1e-3 * (state >> 11) * 2.0**-53
        pts.append(radius * jitter * cmath.exp(2j * math.pi * (k + 0.25) / degree + 0.39j))
    return pts


def _refine_multiple(p: PolyC, z: complex, mult: int, iters: int = 8) -> complex:
    """Newton on the (mult-1)-th derivative, where an m-fold root is simple."""
    q = p
    for _ in range(mult - 1):
        q = q.derivative()
    dq = q.derivative()
    for _ in range(iters):
        f = q(z)
        fp = dq(z)
        if fp == 0:
            break
        step = f / fp
        z = z - step
        if abs(step) <= 1e-16 * max(1.0, abs(z)):
            break
    return z


def poly_roots(p: PolyC, tol: float = 1e-10, max_sweeps: int = 1000, seed: int = 0):
    """All complex roots of p with multiplicities, as a list of (root, mult).

    Durand-Kerner simultaneous iteration from perturbed-circle starting
    points, run until the largest update is at most ``tol`` or ``max_sweeps``
    sweeps elapse.  Points closer than ``1e3 * tol`` are merged into one root
    whose multiplicity is the cluster size; cluster centers are then polished
    by Newton on the (m-1)-th derivative, and multiple roots are
    cross-checked with an argument-principle winding count.  Multiplicities
    always sum to the degree.

    Raises NoConvergence (with residual diagnostics) when the computed roots
    fail validation; retrying with a different ``seed`` perturbs the start.
    """
    if p.degree < 1:
        raise InvalidArgs("root finding needs degree >= 1")
    lead = p.coeffs[-1]
    monic = [c / lead for c in p.coeffs]
    degree = p.degree
    pts = _dk_initial_points(monic, degree, seed)

    for _ in range(max_sweeps):
        max_update = 0.0
        for i in range(degree):
            z = pts[i]
            val = 0j
            for c in reversed(monic):
                val = val * z + c
            den = 1.0 + 0j
            for j in range(degree):
                if j != i:
                    den *= z - pts[j]
            if den == 0:
                den = 1e-300
            w = val / den
            pts[i] = z - w
            max_update = max(max_update, abs(w))
        if max_update <= tol:
            break

    # greedy union of points within the merge radius
    radius = 1e3 * tol
    parent = list(range(degree))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(degree):
        for j in range(i + 1, degree):
            if abs(pts[i] - pts[j]) <= radius:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    clusters = {}
    for i in range(degree):
        clusters.setdefault(find(i), []).append(pts[i])

    coeff_scale = max(abs(c) for c in p.coeffs)
    roots = []
    for members in clusters.values():
        mult = len(members)
        center = sum(members) / mult
        refined = _refine_multiple(p, center, mult)
        if abs(refined - center) > 10.0 * radius + 10.0 * max(abs(m - center) for m in members):
            refined = center  # refinement wandered off; keep the cluster mean
        roots.append((refined, mult, members))

    # validation
    failures = []
    for z, mult, members in roots:
        res = abs(p(z))
        allowed = 1e-8 * coeff_scale * max(1.0, abs(z)) ** degree
        if mult == 1:
            if res > allowed:
                failures.append((z, mult, res))
        else:
            spread = max(abs(m - z) for m in members)
            others = [r for r, _, _ in roots if r is not z]
            gap = min((abs(z - o) for o in others), default=math.inf)
            circ = max(1e-6, 10.0 * spread)
            if math.isfinite(gap):
                circ = min(circ, 0.5 * gap)
            try:
                count = winding_number(p, z, circ)
            except NoConvergence:
                count = -1
            if count != mult and res > allowed:
                failures.append((z, mult, res))
    if failures:
        detail = ", ".join(f"root {z:.6g} mult {m} residual {r:.3e}" for z, m, r in failures)
        raise NoConvergence(f"unvalidated roots: {detail}")

    out = [(z, m) for z, m, _ in roots]
    out.sort(key=lambda rm: (rm[0].real, rm[0].imag))
    return out
