"""Attraction certificates for eigenvectors of the power map.

At a unit eigenvector v with eigenvalue mu != 0 the iteration Jacobian is
J(v) = ((d-1)/mu) (T.v^{d-2} - mu v v^T); v is an attracting fixed point
when the spectral radius rho(J(v)) < 1 and repelling when rho > 1.  Besides
the numeric rho this module evaluates three closed-form upper bounds: the
generator bound (tight and coarse links of the submultiplicativity chain),
the kernel-coefficient bound for odd order, and the all-ones tight-frame
bound for even order, plus the integer margin gamma(n, d) certifying every
regular-simplex generator at once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import (
    InvalidArgs,
    NotAnEigenvector,
    NotEquiangular,
    NotETF,
    NotUnitNorm,
    OddOrder,
    PreconditionFailed,
    ZeroEigenvalue,
)
from .frames import Frame, validate_frame
from .tensor import SymTensor, contract_mat, eigen_residual

#: residual threshold for accepting v as an eigenvector of T
EIGENVECTOR_TOL = 1e-8

#: eigenvalues smaller than this cannot anchor a Jacobian
MU_FLOOR = 1e-12

#: half-width of the inconclusive band around rho = 1
VERDICT_BAND = 1e-9

ROBUST = "Robust"
NOT_CERTIFIED = "NotCertified"
NON_ATTRACTING = "CertifiedNonAttracting"


@dataclass(frozen=True)
class BoundChain:
    """Two links of the generator bound: the tight operator-norm link
    |(d-1)/mu| * ||sum_{i != j} lambda_i a_ij^{d-2} v_i v_i^T||_2 and the
    coarse closing link |(d-1)/mu| (r-1) max|lambda_i| max|a_ij|^{d-2}."""

    tight: float
    coarse: float


@dataclass(frozen=True)
class RobustnessCertificate:
    vector_index: int | None
    mu: float
    rho_numeric: float
    bound_general: BoundChain | None
    bound_kernel: float | None
    bound_allones: float | None
    verdict: str

    def to_dict(self) -> dict:
        return {
            "vector_index": None if self.vector_index is None else self.vector_index + 1,
            "mu": self.mu,
            "rho_numeric": self.rho_numeric,
            "bound_general": None
            if self.bound_general is None
            else {"tight": self.bound_general.tight, "coarse": self.bound_general.coarse},
            "bound_kernel": self.bound_kernel,
            "bound_allones": self.bound_allones,
            "verdict": self.verdict,
        }


def spectral_radius_sym(M) -> float:
    """Largest |eigenvalue| of a symmetric matrix via cyclic Jacobi rotations."""
    return linalg.spectral_norm_sym(linalg.check_symmetric(M, 1e-10))


def jacobian_at(T: SymTensor, v, mu: float) -> np.ndarray:
    """Jacobian of the normalized power map at a unit eigenvector v."""
    v = np.asarray(v, dtype=float)
    _, res = eigen_residual(T, v)
    if res > EIGENVECTOR_TOL:
        raise NotAnEigenvector(f"residual {res:.3e} exceeds {EIGENVECTOR_TOL:.1e}")
    if abs(mu) <= MU_FLOOR:
        raise ZeroEigenvalue(f"|mu| = {abs(mu):.3e} is below {MU_FLOOR:.1e}")
    return ((T.d - 1) / mu) * (contract_mat(T, v) - mu * np.outer(v, v))


def _general_values(T: SymTensor, j: int, mu: float) -> BoundChain:
    alphas = T.V.T @ T.V[:, j]
    others = [i for i in range(T.r) if i != j]
    pref = abs((T.d - 1) / mu)
    if not others:
        return BoundChain(tight=0.0, coarse=0.0)
    w = T.lambdas[others] * alphas[others] ** (T.d - 2)
    M = (T.V[:, others] * w) @ T.V[:, others].T
    tight = pref * linalg.spectral_norm_sym(M)
    coarse = (
        pref
        * (T.r - 1)
        * float(np.max(np.abs(T.lambdas[others])))
        * float(np.max(np.abs(alphas[others]))) ** (T.d - 2)
    )
    return BoundChain(tight=tight, coarse=coarse)


def bound_general(T: SymTensor, j: int, mu: float) -> BoundChain:
    """Generator bound on rho(J(v_j)) for an eigen-generator v_j of T."""
    if not 0 <= j < T.r:
        raise InvalidArgs(f"generator index {j} out of range [0, {T.r})")
    if abs(mu) <= MU_FLOOR:
        raise ZeroEigenvalue(f"|mu| = {abs(mu):.3e} is below {MU_FLOOR:.1e}")
    return _general_values(T, j, mu)


def kernel_bound_value(F: Frame, lambdas, d: int) -> float:
    """||V V^T||_2 alpha^{d-2} (d-1) / (min|lambda| (1 - alpha^{d-1})),
    evaluated without precondition checks (the raw formula)."""
    lam = np.asarray(lambdas, dtype=float)
    vvt_norm = linalg.spectral_norm_sym(F.V @ F.V.T)
    num = vvt_norm * F.alpha ** (d - 2) * (d - 1)
    den = float(np.min(np.abs(lam))) * (1.0 - F.alpha ** (d - 1))
    return num / den


def bound_kernel_case(T: SymTensor, tol: float = 1e-10) -> float:
    """Robustness bound for equiangular generators with coefficients in Ker(V).

    Requires odd order and lambda in the kernel of the generator matrix;
    then every generator is an eigenvector with mu = lambda_j (1 - alpha^{d-1})
    and the bound applies to all of them simultaneously.
    """
    if T.d % 2 == 0:
        raise PreconditionFailed(f"order d = {T.d} must be odd")
    F = validate_frame(T.V)
    resid = float(np.linalg.norm(T.V @ T.lambdas))
    scale = max(1.0, float(np.max(np.abs(T.lambdas))))
    if resid > tol * scale:
        raise PreconditionFailed(
            f"lambda is not in Ker(V): ||V lambda|| = {resid:.3e} > {tol:.1e} * {scale:g}"
        )
    return kernel_bound_value(F, T.lambdas, T.d)


def allones_bound_value(F: Frame, d: int) -> tuple[float, float]:
    """Raw all-ones tight-frame bound and the common eigenvalue
    1 + alpha^{d-2} (r/n - 1), without precondition checks."""
    rn = F.r / F.n
    a = F.alpha ** (d - 2)
    eigenvalue = 1.0 + a * (rn - 1.0)
    return rn * a * (d - 1) / eigenvalue, eigenvalue


def bound_allones_etf(F: Frame, d: int) -> tuple[float, float]:
    """Robustness bound for the unit-coefficient tensor on a tight frame.

    For even order every frame vector is an eigenvector with eigenvalue
    1 + alpha^{d-2} (r/n - 1); returns (bound, eigenvalue).
    """
    if not F.is_etf:
        raise NotETF("the frame is not tight")
    if d % 2 != 0:
        raise OddOrder(f"order d = {d} must be even")
    return allones_bound_value(F, d)


def gamma(n: int, d: int) -> int:
    """Integer margin n^{d-1} + n - d - d n, exactly.

    Positive gamma certifies that all generators of the unit-coefficient
    regular-simplex tensor are attracting fixed points of the power map.
    """
    if not (isinstance(n, (int, np.integer)) and isinstance(d, (int, np.integer))):
        raise InvalidArgs("n and d must be integers")
    if n < 2 or d < 2:
        raise InvalidArgs(f"need n >= 2 and d >= 2, got n={n}, d={d}")
    n, d = int(n), int(d)
    return n ** (d - 1) + n - d - d * n


def _match_generator(T: SymTensor, v: np.ndarray, tol: float = 1e-8) -> int | None:
    dist = np.minimum(
        np.linalg.norm(T.V - v[:, None], axis=0), np.linalg.norm(T.V + v[:, None], axis=0)
    )
    j = int(np.argmin(dist))
    return j if dist[j] <= tol else None


def certify(T: SymTensor, v, context: Frame | None = None) -> RobustnessCertificate:
    """Assemble a robustness certificate for an eigenvector v of T.

    Fills the numeric spectral radius of J(v) and every analytic bound whose
    preconditions hold.  The verdict is Robust below 1 - 1e-9, certified
    non-attracting above 1 + 1e-9, and NotCertified inside the band (the
    fixed-point criterion is silent exactly at rho = 1).
    """
    v = np.asarray(v, dtype=float)
    mu, res = eigen_residual(T, v)
    if res > EIGENVECTOR_TOL:
        raise NotAnEigenvector(f"residual {res:.3e} exceeds {EIGENVECTOR_TOL:.1e}")
    if abs(mu) <= MU_FLOOR:
        raise ZeroEigenvalue(f"|mu| = {abs(mu):.3e} is below {MU_FLOOR:.1e}")
    J = jacobian_at(T, v, mu)
    rho = spectral_radius_sym(J)

    j = _match_generator(T, v)
    chain = _general_values(T, j, mu) if j is not None else None

    frame = context
    if frame is None:
        try:
            frame = validate_frame(T.V)
        except (NotEquiangular, NotUnitNorm):
            frame = None

    b_kernel = None
    b_allones = None
    if j is not None and frame is not None:
        if T.d % 2 == 1:
            try:
                b_kernel = bound_kernel_case(T)
            except PreconditionFailed:
                b_kernel = None
        lam = T.lambdas
        same_coeff = float(np.max(lam) - np.min(lam)) <= 1e-12 * max(1.0, abs(float(lam[0])))
        if frame.is_etf and T.d % 2 == 0 and same_coeff:
            b_allones, _ = bound_allones_etf(frame, T.d)

    if rho < 1.0 - VERDICT_BAND:
        verdict = ROBUST
    elif rho > 1.0 + VERDICT_BAND:
        verdict = NON_ATTRACTING
    else:
        verdict = NOT_CERTIFIED
    return RobustnessCertificate(
        vector_index=j,
        mu=mu,
        rho_numeric=rho,
        bound_general=chain,
        bound_kernel=b_kernel,
        bound_allones=b_allones,
        verdict=verdict,
    )
