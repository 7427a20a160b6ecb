"""
Hastings-McLeod solution of Painleve II by boundary-value relaxation.

q'' = s q + 2 q^3 with q ~ Ai(s) at the right and q ~ sqrt(-s/2) at the
left. Integrating from the right is exponentially unstable (the Bi-type
solution grows), so the whole interval is collocated and solved by
Newton iteration with scipy's solve_bvp.

The state carries u' = -q^2 and I' = -u next to (q, q'), so u(s) and
I(s) = int_s^inf (x - s) q^2 dx, hence F_2 = exp(-I), come out of the
same solve without a separate quadrature.
"""

import logging
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy.integrate import solve_bvp

from ..config import HM_NPTS, HM_S_MAX, HM_S_MIN, HM_TOL
from ..errors import ConvergenceError, RegimeError
from ..models import HMAux, HMGrid
from .specfun import airy_pair

logger = logging.getLogger(__name__)

MAX_NODES = 200_000
TAIL_TOL = 1e-12


def left_asymptote(s: float) -> float:
    """sqrt(-s/2) (1 + 1/(8 s^3)), the two-term left asymptotic of q."""
    return float(np.sqrt(-s / 2.0) * (1.0 + 1.0 / (8.0 * s ** 3)))


def _chebyshev_mesh(a: float, b: float, npts: int) -> np.ndarray:
    k = np.arange(npts)
    return 0.5 * (a + b) - 0.5 * (b - a) * np.cos(np.pi * k / (npts - 1))


def _initial_guess(x: np.ndarray) -> np.ndarray:
    # softplus blend: sqrt(-x/2) on the left, decaying past the turning region
    q = np.sqrt(0.5 * np.log1p(np.exp(-x))) * np.exp(-0.5 * np.maximum(x, 0.0) ** 1.5)
    qp = np.gradient(q, x)
    u = np.zeros_like(x)
    I = np.zeros_like(x)
    return np.vstack([q, qp, u, I])


def _rhs(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    q, qp, u, _ = y
    return np.vstack([qp, x * q + 2.0 * q ** 3, -q * q, -u])


def hm_solve(
    s_min: float = HM_S_MIN,
    s_max: float = HM_S_MAX,
    npts: int = HM_NPTS,
    tol: float = HM_TOL,
) -> HMGrid:
    """
    Relaxation solve of the Hastings-McLeod problem on [s_min, s_max].

    Boundary conditions: q(s_min) = sqrt(-s/2)(1 + 1/(8 s^3)),
    q(s_max) = Ai(s_max), u(s_max) = I(s_max) = 0. The tail
    int_{s_max}^inf Ai^2 is dropped; at s_max >= 6 it is below 1e-12.
    """
    if s_min < HM_S_MIN or s_min >= 0:
        raise RegimeError("s_min", s_min, f"{HM_S_MIN} <= s_min < 0")
    if s_max < 6.0:
        raise RegimeError("s_max", s_max, "s_max >= 6")
    if npts < 10:
        raise RegimeError("npts", npts, "npts >= 10")

    ai_b, aip_b = airy_pair(s_max)
    tail = aip_b * aip_b - s_max * ai_b * ai_b
    if tail > TAIL_TOL:
        logger.warning("dropped Airy tail %.2e exceeds %.0e", tail, TAIL_TOL)

    q_left = left_asymptote(s_min)

    def bc(ya: np.ndarray, yb: np.ndarray) -> np.ndarray:
        return np.array([ya[0] - q_left, yb[0] - ai_b, yb[2], yb[3]])

    x0 = _chebyshev_mesh(s_min, s_max, npts)
    result = solve_bvp(
        _rhs, bc, x0, _initial_guess(x0), tol=tol, max_nodes=MAX_NODES, bc_tol=tol
    )
    residual = float(np.max(result.rms_residuals)) if result.rms_residuals.size else np.inf
    if not result.success:
        raise ConvergenceError(f"Hastings-McLeod solve failed: {result.message}", residual)

    logger.debug(
        "Hastings-McLeod on [%g, %g]: %d nodes, %d iterations, residual %.2e",
        s_min,
        s_max,
        result.x.size,
        result.niter,
        residual,
    )
    return HMGrid(
        abscissae=result.x,
        q=result.y[0],
        qprime=result.y[1],
        u=result.y[2],
        I=result.y[3],
        residual=residual,
        solution=result.sol,
    )


@lru_cache(maxsize=1)
def default_grid() -> HMGrid:
    """The shared solve on [HM_S_MIN, HM_S_MAX]."""
    return hm_solve()


def _check_inside(g: HMGrid, s: float) -> None:
    if not g.s_min <= s <= g.s_max:
        raise RegimeError("s", s, f"{g.s_min} <= s <= {g.s_max}")


def evaluate(g: HMGrid, s) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(q, q', u, I) at arbitrary points inside the grid."""
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    for value in (s_arr.min(), s_arr.max()):
        _check_inside(g, float(value))
    y = g.solution(s_arr)
    return y[0], y[1], y[2], y[3]


def derive_aux(g: HMGrid) -> HMAux:
    """
    u, v, p on the grid abscissae.

    p = q' + u q and 2v = u^2 - q^2, the first integral of the
    Painleve system.
    """
    p = g.qprime + g.u * g.q
    v = 0.5 * (g.u * g.u - g.q * g.q)
    return HMAux(abscissae=g.abscissae, u=g.u.copy(), v=v, p=p)


def aux_at(g: HMGrid, s) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(q, p, u, v) at arbitrary points inside the grid."""
    q, qp, u, _ = evaluate(g, s)
    return q, qp + u * q, u, 0.5 * (u * u - q * q)


def f2_from_q(g: HMGrid, s: float) -> float:
    """
    exp(-int_s^inf (x - s) q(x)^2 dx) read off the collocated I(s).

    Right of the grid I(s) is below 1e-12, so F_2 is returned as 1.
    """
    if s > g.s_max:
        return 1.0
    _check_inside(g, s)
    _, _, _, I = evaluate(g, s)
    return float(np.exp(-I[0]))


def painleve_residual(g: HMGrid, s) -> np.ndarray:
    """|q'' - s q - 2 q^3| from the collocation polynomial's derivative."""
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    y = g.solution(s_arr)
    dy = g.solution(s_arr, 1)
    return np.abs(dy[1] - s_arr * y[0] - 2.0 * y[0] ** 3)
