"""
Quadrature rules and the Nystrom operator engine.

Every integral operator in gueedge acts on a half line (a, inf). It is
realized as a Gauss-Legendre rule on the truncated interval [a, a+T],
discretized with square-root weights so the matrix stays symmetric.
Determinants and resolvent solves then reduce to one LU factorization.
"""

import logging
import math
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import linalg

from ..config import GAUSS_MAX_M
from ..errors import NumericalFailure, RegimeError, SingularSystemError
from ..models import KernelMatrix, QuadRule

logger = logging.getLogger(__name__)

Kernel = Callable[[np.ndarray, np.ndarray], np.ndarray]
LUFactor = Tuple[np.ndarray, np.ndarray]

RESIDUAL_TOL = 1e-10


def gauss_legendre(m: int) -> QuadRule:
    """m-point Gauss-Legendre rule on [-1, 1]."""
    if not 1 <= m <= GAUSS_MAX_M:
        raise RegimeError("m", m, f"1 <= m <= {GAUSS_MAX_M}")
    nodes, weights = np.polynomial.legendre.leggauss(m)
    return QuadRule(nodes=nodes, weights=weights, a=-1.0, b=1.0)


def affine_rule(a: float, b: float, m: int) -> QuadRule:
    """Gauss-Legendre rule mapped onto [a, b]."""
    if not b > a:
        raise RegimeError("b", b, f"b > a = {a}")
    base = gauss_legendre(m)
    half = 0.5 * (b - a)
    nodes = a + half * (base.nodes + 1.0)
    return QuadRule(nodes=nodes, weights=half * base.weights, a=float(a), b=float(b))


def truncated_halfline(a: float, T: float, m: int) -> QuadRule:
    """Rule on [a, a+T] standing in for (a, inf)."""
    if not T > 0:
        raise RegimeError("T", T, "T > 0")
    return affine_rule(a, a + T, m)


def discretize(kernel: Kernel, rule: QuadRule) -> KernelMatrix:
    """A_ij = sqrt(w_i) K(x_i, x_j) sqrt(w_j)."""
    X, Y = np.meshgrid(rule.nodes, rule.nodes, indexing="ij")
    values = np.asarray(kernel(X, Y), dtype=float)
    if not np.all(np.isfinite(values)):
        raise NumericalFailure("kernel returned non-finite values on the quadrature grid")
    sw = rule.sqrt_weights
    A = sw[:, None] * values * sw[None, :]
    A = 0.5 * (A + A.T)
    return KernelMatrix(matrix=A, rule=rule)


def _check_spectral_radius(A: KernelMatrix) -> None:
    # Frobenius norm bounds the spectral radius; only pay for eigenvalues when it might exceed 1
    if np.linalg.norm(A.matrix) < 1.0:
        return
    top = float(np.max(np.abs(np.linalg.eigvalsh(A.matrix))))
    if top >= 1.0:
        logger.warning("spectral radius %.6f >= 1; det(I - A) is out of regime", top)


def factor(A: KernelMatrix) -> LUFactor:
    """LU factorization of I - A with partial pivoting."""
    system = np.eye(A.size) - A.matrix
    try:
        lu, piv = linalg.lu_factor(system, check_finite=True)
    except ValueError as exc:
        raise NumericalFailure(f"LU factorization failed: {exc}") from exc
    if np.any(np.diag(lu) == 0.0):
        raise SingularSystemError("I - A is exactly singular", determinant=0.0)
    return lu, piv


def det_from_factor(lu_piv: LUFactor) -> float:
    """det(I - A) from its LU factors."""
    lu, piv = lu_piv
    diag = np.diag(lu)
    swaps = int(np.count_nonzero(piv != np.arange(piv.size)))
    sign = -1.0 if swaps % 2 else 1.0
    sign *= float(np.prod(np.sign(diag)))
    log_abs = float(np.sum(np.log(np.abs(diag))))
    return sign * math.exp(log_abs)


def fredholm_det(A: KernelMatrix, lu_piv: Optional[LUFactor] = None) -> float:
    """
    det(I - A) via a pivoted LU factorization.

    Raises SingularSystemError when the determinant is not positive;
    values in (0, 1] are the only ones a distribution function can take.
    """
    _check_spectral_radius(A)
    lu_piv = factor(A) if lu_piv is None else lu_piv
    det = det_from_factor(lu_piv)
    if not math.isfinite(det):
        raise NumericalFailure(f"determinant is not finite: {det}")
    if det <= 0.0:
        raise SingularSystemError(f"det(I - A) = {det:.3e} <= 0", determinant=det)
    return det


def fredholm_det_unsymmetrized(kernel: Kernel, rule: QuadRule) -> float:
    """det(I - K W) with the plain column weighting; reference for the symmetric form."""
    X, Y = np.meshgrid(rule.nodes, rule.nodes, indexing="ij")
    M = np.asarray(kernel(X, Y), dtype=float) * rule.weights[None, :]
    return float(np.linalg.det(np.eye(rule.size) - M))


def resolvent_apply(
    A: KernelMatrix, f: np.ndarray, lu_piv: Optional[LUFactor] = None
) -> np.ndarray:
    """
    Solve (I - K) g = f at the nodes.

    f may be a vector of node values or a (k, m) stack of them. The solve
    runs in the sqrt-weighted coordinates of A and is mapped back.
    """
    lu_piv = factor(A) if lu_piv is None else lu_piv
    f = np.asarray(f, dtype=float)
    sw = A.rule.sqrt_weights
    rhs = (f * sw).T
    g_hat = linalg.lu_solve(lu_piv, rhs).T
    g = g_hat / sw

    residual = (g_hat - (A.matrix @ g_hat.T).T) / sw - f
    scale = max(float(np.max(np.abs(f))), 1e-300)
    rel = float(np.max(np.abs(residual))) / scale
    if rel > RESIDUAL_TOL:
        logger.warning("resolvent residual %.3e exceeds %.0e", rel, RESIDUAL_TOL)
    return g


def relative_residual(A: KernelMatrix, g: np.ndarray, f: np.ndarray) -> float:
    """max |(I - K)g - f| / max |f| in node values."""
    sw = A.rule.sqrt_weights
    g_hat = np.asarray(g) * sw
    residual = (g_hat - (A.matrix @ g_hat.T).T) / sw - np.asarray(f)
    return float(np.max(np.abs(residual))) / max(float(np.max(np.abs(f))), 1e-300)


def nystrom_extend(
    kernel_at_point: np.ndarray, rule: QuadRule, g: np.ndarray, f_at_point: np.ndarray
) -> np.ndarray:
    """
    Evaluate the solution of (I - K)g = f at an off-grid point x0.

    kernel_at_point holds K(x0, x_j); the natural extension is
    g(x0) = f(x0) + sum_j w_j K(x0, x_j) g(x_j).
    """
    return np.asarray(f_at_point) + (np.asarray(g) * rule.weights) @ kernel_at_point


def resolvent_at_point(
    A: KernelMatrix, lu_piv: LUFactor, kernel_xx: float, kernel_at_point: np.ndarray
) -> float:
    """R(x0, x0) = K(x0, x0) + k^T (I - K)^{-1} k with k_j = K(x_j, x0)."""
    sw = A.rule.sqrt_weights
    k_hat = kernel_at_point * sw
    return float(kernel_xx + k_hat @ linalg.lu_solve(lu_piv, k_hat))


def resolvent_matrix(A: KernelMatrix, lu_piv: LUFactor) -> np.ndarray:
    """R(x_i, x_j) = ((I - K)^{-1} K)(x_i, x_j) at node pairs."""
    sw = A.rule.sqrt_weights
    R_hat = linalg.lu_solve(lu_piv, A.matrix)
    return R_hat / (sw[:, None] * sw[None, :])
