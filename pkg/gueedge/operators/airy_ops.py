"""
Airy-kernel objects in the edge-scaling limit.

Builds the Nystrom resolvent of K_Ai on (s, inf), the moment families
Q_i = (I - K_Ai)^{-1} X^i Ai and P_i = (I - K_Ai)^{-1} X^i Ai' for
i = 0, 1, 2, their endpoint values and inner products, and the
Tracy-Widom distribution F_2 by determinant or through the
Hastings-McLeod solution.
"""

import logging
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Optional

import numpy as np
from scipy import linalg

from ..config import (
    AIRY_S_MIN,
    DEFAULT_COMPOSE_M,
    DEFAULT_COMPOSE_T,
    DEFAULT_M,
    DEFAULT_T,
    MAX_MOMENT,
    NEAR_DIAGONAL,
    TW_S_MIN,
)
from ..errors import RegimeError
from ..models import AiryFunctionals, ResolventSample
from ..parallel import parallel_map
from . import quad
from .specfun import airy_pair

logger = logging.getLogger(__name__)

MOMENTS = tuple(range(MAX_MOMENT + 1))
F2_METHODS = ("determinant", "q-integral")


def airy_kernel(X, Y):
    """
    K_Ai(X, Y) = (Ai(X) Ai'(Y) - Ai(Y) Ai'(X)) / (X - Y).

    Within NEAR_DIAGONAL of the diagonal the kernel is evaluated on the
    diagonal at the midpoint, Ai'(m)^2 - m Ai(m)^2; by symmetry the first
    order Taylor term vanishes there.
    """
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    X, Y = np.broadcast_arrays(X, Y)
    ai_x, aip_x = airy_pair(X)
    ai_y, aip_y = airy_pair(Y)

    diff = X - Y
    near = np.abs(diff) <= NEAR_DIAGONAL
    safe = np.where(near, 1.0, diff)
    off = (ai_x * aip_y - ai_y * aip_x) / safe

    mid = 0.5 * (X + Y)
    ai_m, aip_m = airy_pair(mid)
    diag = aip_m * aip_m - mid * ai_m * ai_m

    values = np.where(near, diag, off)
    return float(values) if values.ndim == 0 else values


def _check_regime(s: float, s_min: float = AIRY_S_MIN) -> None:
    if not np.isfinite(s) or s < s_min:
        raise RegimeError("s", s, f"s >= {s_min}")


def _moment_rhs(x: np.ndarray):
    ai, aip = airy_pair(x)
    powers = np.stack([np.asarray(x, dtype=float) ** i for i in MOMENTS])
    return powers * ai, powers * aip


def build_resolvent(s: float, m: int = DEFAULT_M, T: float = DEFAULT_T) -> ResolventSample:
    """Nystrom resolvent of K_Ai on (s, s+T) with the Q_i, P_i solves."""
    _check_regime(s)
    rule = quad.truncated_halfline(s, T, m)
    A = quad.discretize(airy_kernel, rule)
    lu_piv = quad.factor(A)
    # raises SingularSystemError when s is too far left for this discretization
    quad.fredholm_det(A, lu_piv)

    rhs_q, rhs_p = _moment_rhs(rule.nodes)
    Q = quad.resolvent_apply(A, rhs_q, lu_piv)
    P = quad.resolvent_apply(A, rhs_p, lu_piv)
    residual = max(
        quad.relative_residual(A, Q, rhs_q), quad.relative_residual(A, P, rhs_p)
    )
    R = quad.resolvent_matrix(A, lu_piv)
    logger.debug("resolvent at s=%g: m=%d T=%g residual=%.2e", s, m, T, residual)
    return ResolventSample(s=float(s), rule=rule, R=R, Q=Q, P=P, lu=lu_piv, residual=residual)


def functionals_from_sample(sample: ResolventSample) -> AiryFunctionals:
    """Endpoint values by natural Nystrom extension, inner products by the rule."""
    rule = sample.rule
    s = sample.s
    k_s = airy_kernel(np.full(rule.size, s), rule.nodes)
    ai_s, aip_s = airy_pair(s)
    powers_s = np.array([s ** i for i in MOMENTS])

    q = quad.nystrom_extend(k_s, rule, sample.Q, powers_s * ai_s)
    p = quad.nystrom_extend(k_s, rule, sample.P, powers_s * aip_s)

    ai, aip = airy_pair(rule.nodes)
    w = rule.weights
    return AiryFunctionals(
        s=s,
        q=q,
        p=p,
        u=sample.Q @ (w * ai),
        v=sample.P @ (w * ai),
        vt=sample.Q @ (w * aip),
        w=sample.P @ (w * aip),
    )


@lru_cache(maxsize=4096)
def _cached_functionals(s: float, m: int, T: float) -> AiryFunctionals:
    return functionals_from_sample(build_resolvent(s, m, T))


def functionals(s: float, m: int = DEFAULT_M, T: float = DEFAULT_T) -> AiryFunctionals:
    """q_i, p_i, u_i, v_i, vt_i, w_i (i = 0, 1, 2) at left endpoint s."""
    _check_regime(s)
    return _cached_functionals(float(s), int(m), float(T))


def functionals_many(
    s_values: Iterable[float],
    m: int = DEFAULT_M,
    T: float = DEFAULT_T,
    workers: Optional[int] = 1,
) -> List[AiryFunctionals]:
    """functionals over a list of endpoints, fanned out over workers."""
    return parallel_map(lambda s: functionals(s, m, T), list(s_values), workers)


def compose_integral(
    integrand: Callable[[AiryFunctionals], float],
    s: float,
    m: int = DEFAULT_M,
    T: float = DEFAULT_T,
    outer_m: int = DEFAULT_COMPOSE_M,
    outer_T: float = DEFAULT_COMPOSE_T,
    weight: Optional[Callable[[float], float]] = None,
    workers: Optional[int] = 1,
) -> float:
    """
    int_s^inf weight(x) integrand(functionals(x)) dx on an outer Gauss rule.

    Each outer node needs its own resolvent factorization; they are cached
    so overlapping compositions at the same nodes are reused.
    """
    outer = quad.truncated_halfline(s, outer_T, outer_m)
    values = functionals_many(outer.nodes, m, T, workers)
    samples = np.array([integrand(f) for f in values])
    if weight is not None:
        samples = samples * np.array([weight(x) for x in outer.nodes])
    return outer.integrate(samples)


def f2_determinant(s: float, m: int = DEFAULT_M, T: float = DEFAULT_T) -> float:
    """det(I - K_Ai) on (s, inf)."""
    rule = quad.truncated_halfline(s, T, m)
    return quad.fredholm_det(quad.discretize(airy_kernel, rule))


def f2_cdf(
    s: float, method: str = "determinant", m: int = DEFAULT_M, T: float = DEFAULT_T
) -> float:
    """Tracy-Widom F_2(s) by Fredholm determinant or by the q-integral."""
    _check_regime(s, TW_S_MIN)
    if method == "determinant":
        return f2_determinant(s, m, T)
    if method == "q-integral":
        from .painleve2 import default_grid, f2_from_q

        return f2_from_q(default_grid(), s)
    raise RegimeError("method", method, f"method in {F2_METHODS}")


def resolvent_identity_residuals(sample: ResolventSample) -> Dict[str, float]:
    """
    Sup-norm residuals of the R = rho - delta inner-product identities.

    (Z^i Ai, R(., Y)) = -Y^i Ai(Y) + Q_i(Y) and
    (Z^i Ai', R(., Y)) = -Y^i Ai'(Y) + P_i(Y), at every node Y.
    """
    rule = sample.rule
    rhs_q, rhs_p = _moment_rhs(rule.nodes)
    weighted_R = rule.weights[:, None] * sample.R
    out: Dict[str, float] = {}
    for i in MOMENTS:
        lhs_q = rhs_q[i] @ weighted_R
        lhs_p = rhs_p[i] @ weighted_R
        out[f"Q{i}"] = float(np.max(np.abs(lhs_q - (sample.Q[i] - rhs_q[i]))))
        out[f"P{i}"] = float(np.max(np.abs(lhs_p - (sample.P[i] - rhs_p[i]))))
    return out


def extend_moments(sample: ResolventSample, X) -> tuple:
    """Q_i(X; s), P_i(X; s) at arbitrary points X by natural Nystrom extension."""
    X = np.atleast_1d(np.asarray(X, dtype=float))
    rule = sample.rule
    K = airy_kernel(X[:, None], rule.nodes[None, :])
    rhs_q, rhs_p = _moment_rhs(X)
    Q = rhs_q + (sample.Q * rule.weights) @ K.T
    P = rhs_p + (sample.P * rule.weights) @ K.T
    return Q, P


def resolvent_kernel_at(sample: ResolventSample, X, Y) -> np.ndarray:
    """R(X_a, Y_b; s) = K + K (I - K)^{-1} K evaluated off the grid."""
    X = np.atleast_1d(np.asarray(X, dtype=float))
    Y = np.atleast_1d(np.asarray(Y, dtype=float))
    rule = sample.rule
    sw = rule.sqrt_weights
    KX = airy_kernel(X[:, None], rule.nodes[None, :]) * sw
    KY = airy_kernel(rule.nodes[:, None], Y[None, :]) * sw[:, None]
    return airy_kernel(X[:, None], Y[None, :]) + KX @ linalg.lu_solve(sample.lu, KY)
