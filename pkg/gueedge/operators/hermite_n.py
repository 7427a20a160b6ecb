"""
Exact finite-n objects for GUE_n.

The Hermite kernel K_n is evaluated in Christoffel-Darboux form from the
weighted oscillator functions phi~ = (n/2)^{1/4} phi_n and
psi~ = (n/2)^{1/4} phi_{n-1}, so that

    K_n(x, y) = (phi~(x) psi~(y) - psi~(x) phi~(y)) / (x - y).

Q_n and P_n are the resolvent solves against phi~ and psi~; with this
weighting they scale like n^{1/6} times their Airy limits. All work is
done at the unscaled variable; the edge scaling tau is applied only where
a finite-n object is compared with its Airy expansion.
"""

import logging
import math
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from ..config import (
    DEFAULT_C,
    DEFAULT_INNER_M,
    DEFAULT_M,
    DEFAULT_OUTER_M,
    EDGE_T,
    FINITE_S_MIN,
    NEAR_DIAGONAL,
)
from ..errors import RegimeError
from ..models import ExpansionReport, FiniteNState, KernelMatrix, ScalingMap
from ..parallel import parallel_map
from . import airy_ops, quad
from .fitting import fit_slopes
from .specfun import airy_pair, hermite_phi_block

logger = logging.getLogger(__name__)


def _check_n(n: int) -> None:
    if int(n) != n or n < 1:
        raise RegimeError("n", n, "integer n >= 1")


def weighted_phi(n: int, x) -> Tuple[np.ndarray, np.ndarray]:
    """(phi~, psi~) = (n/2)^{1/4} (phi_n(x), phi_{n-1}(x))."""
    _check_n(n)
    block = hermite_phi_block(n - 1, n, np.atleast_1d(np.asarray(x, dtype=float)))
    scale = (n / 2.0) ** 0.25
    return scale * block[1], scale * block[0]


def hermite_kernel_diagonal(n: int, x) -> np.ndarray:
    """K_n(x, x) = sqrt(n/2) (phi_n' phi_{n-1} - phi_{n-1}' phi_n)."""
    _check_n(n)
    block = hermite_phi_block(n - 2, n + 1, np.atleast_1d(np.asarray(x, dtype=float)))
    phi_nm2, phi_nm1, phi_n, phi_np1 = block
    d_phi_n = math.sqrt(n / 2.0) * phi_nm1 - math.sqrt((n + 1) / 2.0) * phi_np1
    d_phi_nm1 = math.sqrt((n - 1) / 2.0) * phi_nm2 - math.sqrt(n / 2.0) * phi_n
    return math.sqrt(n / 2.0) * (d_phi_n * phi_nm1 - d_phi_nm1 * phi_n)


def kernel_matrix(n: int, xa, xb) -> np.ndarray:
    """K_n(xa_i, xb_j) for two point sets."""
    xa = np.atleast_1d(np.asarray(xa, dtype=float))
    xb = np.atleast_1d(np.asarray(xb, dtype=float))
    fa, ga = weighted_phi(n, xa)
    fb, gb = weighted_phi(n, xb)

    diff = xa[:, None] - xb[None, :]
    near = np.abs(diff) <= NEAR_DIAGONAL
    safe = np.where(near, 1.0, diff)
    values = (fa[:, None] * gb[None, :] - ga[:, None] * fb[None, :]) / safe
    if np.any(near):
        mid = 0.5 * (xa[:, None] + xb[None, :])
        values[near] = hermite_kernel_diagonal(n, mid[near])
    return values


def hermite_kernel(n: int, x, y):
    """K_n(x, y) = sum_{k<n} phi_k(x) phi_k(y), pointwise over broadcast x, y."""
    _check_n(n)
    X, Y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    fx, gx = weighted_phi(n, X.ravel())
    fy, gy = weighted_phi(n, Y.ravel())
    diff = X.ravel() - Y.ravel()
    near = np.abs(diff) <= NEAR_DIAGONAL
    safe = np.where(near, 1.0, diff)
    values = (fx * gy - gx * fy) / safe
    if np.any(near):
        mid = 0.5 * (X.ravel() + Y.ravel())
        values[near] = hermite_kernel_diagonal(n, mid[near])
    values = values.reshape(X.shape)
    return float(values) if values.ndim == 0 else values


def hermite_kernel_direct(n: int, x, y) -> np.ndarray:
    """The k-sum sum_{k<n} phi_k(x) phi_k(y); reference for small n."""
    _check_n(n)
    bx = hermite_phi_block(0, n - 1, np.atleast_1d(np.asarray(x, dtype=float)))
    by = hermite_phi_block(0, n - 1, np.atleast_1d(np.asarray(y, dtype=float)))
    return np.sum(bx * by, axis=0)


def scaled_kernel(scaling: ScalingMap, X, Y):
    """2^{-1/2} n^{-1/6} K_n(tau(X), tau(Y))."""
    values = scaling.jacobian * np.asarray(
        hermite_kernel(scaling.n, scaling.tau(X), scaling.tau(Y))
    )
    return float(values) if np.ndim(values) == 0 else values


def kernel_expansion_rhs(c: float, X, Y, order: int, n: int):
    """The Airy expansion of the scaled Hermite kernel through n^{-2/3}."""
    if order not in (0, 1, 2):
        raise RegimeError("order", order, "order in {0, 1, 2}")
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    ai_x, aip_x = airy_pair(X)
    ai_y, aip_y = airy_pair(Y)
    value = np.asarray(airy_ops.airy_kernel(X, Y), dtype=float)
    if order >= 1:
        value = value - c * ai_x * ai_y * n ** (-1.0 / 3.0)
    if order >= 2:
        second = (
            (X + Y) * aip_x * aip_y
            - (X * X + X * Y + Y * Y) * ai_x * ai_y
            + 0.5 * (-20.0 * c * c + 3.0) * (aip_x * ai_y + ai_x * aip_y)
        )
        value = value + second * n ** (-2.0 / 3.0) / 20.0
    return float(value) if value.ndim == 0 else value


def finite_n_upper(n: int, t: float, edge_T: float = EDGE_T) -> float:
    """Right end of the truncated domain: past both t and the turning point."""
    return max(t, math.sqrt(2.0 * n + 1.0)) + edge_T * 2.0 ** -0.5 * n ** (-1.0 / 6.0)


def finite_rule(n: int, t: float, m: int = DEFAULT_M, edge_T: float = EDGE_T):
    return quad.affine_rule(t, finite_n_upper(n, t, edge_T), m)


def _discretize_hermite(n: int, rule) -> KernelMatrix:
    return quad.discretize(lambda X, Y: kernel_matrix(n, X[:, 0], Y[0, :]), rule)


def state_at(
    n: int, t: float, c: float = DEFAULT_C, m: int = DEFAULT_M, edge_T: float = EDGE_T
) -> FiniteNState:
    """Finite-n state on (t, inf) at an unscaled threshold t."""
    _check_n(n)
    rule = finite_rule(n, t, m, edge_T)
    K = _discretize_hermite(n, rule)
    lu_piv = quad.factor(K)
    det = quad.fredholm_det(K, lu_piv)

    phi, psi = weighted_phi(n, rule.nodes)
    rhs = np.vstack([phi, psi])
    sol = quad.resolvent_apply(K, rhs, lu_piv)
    residual = quad.relative_residual(K, sol, rhs)

    k_t = kernel_matrix(n, [t], rule.nodes)[0]
    phi_t, psi_t = weighted_phi(n, [t])
    qn, pn = quad.nystrom_extend(k_t, rule, sol, np.array([phi_t[0], psi_t[0]]))
    return FiniteNState(
        n=n,
        c=c,
        t=float(t),
        rule=rule,
        K=K,
        Qn=sol[0],
        Pn=sol[1],
        qn=float(qn),
        pn=float(pn),
        det=det,
        lu=lu_piv,
        residual=residual,
    )


def finite_state(
    n: int, c: float, s: float, m: int = DEFAULT_M, edge_T: float = EDGE_T
) -> FiniteNState:
    """Finite-n state at t = tau(s)."""
    if s < FINITE_S_MIN:
        raise RegimeError("s", s, f"s >= {FINITE_S_MIN}")
    scaling = ScalingMap(n, c)
    return state_at(n, scaling.tau(s), c, m, edge_T)


def cdf_fredholm(n: int, t: float, m: int = DEFAULT_M, edge_T: float = EDGE_T) -> float:
    """F_{n,2}(t) = det(I - K_n) on (t, inf)."""
    _check_n(n)
    rule = finite_rule(n, t, m, edge_T)
    return quad.fredholm_det(_discretize_hermite(n, rule))


def endpoint_qp(n: int, x: float, m: int = DEFAULT_INNER_M, edge_T: float = EDGE_T):
    """(q_n(x), p_n(x)) = (Q_n(x; x), P_n(x; x))."""
    state = state_at(n, x, m=m, edge_T=edge_T)
    return state.qn, state.pn


def cdf_via_qp(
    n: int,
    t: float,
    outer_m: int = DEFAULT_OUTER_M,
    inner_m: int = DEFAULT_INNER_M,
    edge_T: float = EDGE_T,
    workers: Optional[int] = 1,
) -> float:
    """
    F_{n,2}(t) = exp(-2 int_t^inf (x - t) q_n(x) p_n(x) dx).

    Each outer node x needs its own resolvent on (x, inf); those
    factorizations are the parallel loop.
    """
    _check_n(n)
    outer = finite_rule(n, t, outer_m, edge_T)
    pairs = parallel_map(lambda x: endpoint_qp(n, x, inner_m, edge_T), outer.nodes, workers)
    integrand = np.array([(x - t) * q * p for x, (q, p) in zip(outer.nodes, pairs)])
    return float(np.exp(-2.0 * outer.integrate(integrand)))


def resolvent_diagonal(state: FiniteNState, x: Optional[float] = None) -> float:
    """R_n(x, x; t) by natural Nystrom extension; x defaults to t."""
    x = state.t if x is None else float(x)
    k_x = kernel_matrix(state.n, state.rule.nodes, [x])[:, 0]
    k_xx = float(hermite_kernel_diagonal(state.n, [x])[0])
    return quad.resolvent_at_point(state.K, state.lu, k_xx, k_x)


def resolvent_at(state: FiniteNState, xa, xb) -> np.ndarray:
    """R_n(xa_i, xb_j; t) = K + K (I - K)^{-1} K off the grid."""
    sw = state.rule.sqrt_weights
    Ka = kernel_matrix(state.n, xa, state.rule.nodes) * sw
    Kb = kernel_matrix(state.n, state.rule.nodes, xb) * sw[:, None]
    return kernel_matrix(state.n, xa, xb) + Ka @ linalg.lu_solve(state.lu, Kb)


def extend_qp(state: FiniteNState, x) -> Tuple[np.ndarray, np.ndarray]:
    """Q_n(x; t), P_n(x; t) at arbitrary points x."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    K = kernel_matrix(state.n, x, state.rule.nodes)
    phi, psi = weighted_phi(state.n, x)
    w = state.rule.weights
    return phi + K @ (w * state.Qn), psi + K @ (w * state.Pn)


def christoffel_darboux_resolvent_check(state: FiniteNState, x) -> float:
    """
    sup |R_n(x_a, x_b) - (Q_n(x_a) P_n(x_b) - P_n(x_a) Q_n(x_b)) / (x_a - x_b)|
    over distinct pairs of the given points.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    R = resolvent_at(state, x, x)
    Q, P = extend_qp(state, x)
    diff = x[:, None] - x[None, :]
    off = np.abs(diff) > 1e-3
    cd = (Q[:, None] * P[None, :] - P[:, None] * Q[None, :]) / np.where(off, diff, 1.0)
    return float(np.max(np.abs(np.where(off, R - cd, 0.0))))


# -- large-n comparators ------------------------------------------------------


def default_grid_X(s: float, points: int = 10, width: float = 4.0) -> np.ndarray:
    """Comparator grid on [s, s + width]."""
    return np.linspace(s, s + width, points)


def _fit_report(name: str, n_values: Sequence[int], residuals: Dict[int, List[float]]):
    report = ExpansionReport(name=name, n_values=list(n_values), residuals=residuals)
    report.fits = fit_slopes(name, n_values, residuals)
    return report


def resolvent_n_check(
    n_values: Iterable[int],
    c: float,
    s: float,
    gridX: Optional[Sequence[float]] = None,
    m: int = DEFAULT_M,
    workers: Optional[int] = 1,
) -> ExpansionReport:
    """
    Scaled finite-n resolvent against its Airy expansion through n^{-2/3}.

    Residuals are sup-norms over the X x Y grid for orders 0, 1, 2.
    """
    n_values = [int(n) for n in n_values]
    X = np.asarray(default_grid_X(s) if gridX is None else gridX, dtype=float)
    sample = airy_ops.build_resolvent(s, m)
    f = airy_ops.functionals_from_sample(sample)
    R = airy_ops.resolvent_kernel_at(sample, X, X)
    Qm, Pm = airy_ops.extend_moments(sample, X)
    Q, Q1, Q2 = Qm
    P, P1, _ = Pm
    u0 = f.u[0]

    first = -c * np.outer(Q, Q)
    second = (
        np.outer(P1, P)
        + np.outer(P, P1)
        - np.outer(Q2, Q)
        - np.outer(Q1, Q1)
        - np.outer(Q, Q2)
        + 20.0 * c * c * u0 * np.outer(Q, Q)
        + 0.5 * (3.0 - 20.0 * c * c) * (np.outer(P, Q) + np.outer(Q, P))
    ) / 20.0

    def one(n: int) -> List[float]:
        scaling = ScalingMap(n, c)
        state = state_at(n, scaling.tau(s), c, m)
        x = scaling.tau(X)
        lhs = scaling.jacobian * resolvent_at(state, x, x)
        eps = n ** (-1.0 / 3.0)
        r0 = lhs - R
        r1 = r0 - first * eps
        r2 = r1 - second * eps * eps
        return [float(np.max(np.abs(r))) for r in (r0, r1, r2)]

    rows = parallel_map(one, n_values, workers)
    residuals = {order: [row[order] for row in rows] for order in (0, 1, 2)}
    return _fit_report("resolvent", n_values, residuals)


def _qp_expansion(c: float, sign: int, Qm, Pm, f) -> Tuple[np.ndarray, np.ndarray]:
    """First and second correction of Q_n (sign=-1) or P_n (sign=+1) per unit n^{-1/3}."""
    Q, Q1, Q2 = Qm
    P, P1, P2 = Pm
    u, u1, u2 = f.u
    v, v1, _ = f.v
    first = 0.5 * (2.0 * c + sign) * P - c * Q * u
    second = (
        (10.0 * c * c + sign * 10.0 * c + 1.5) * Q1
        + P2
        + (-30.0 * c * c - sign * 10.0 * c + 1.5) * Q * v
        + P1 * v
        + P * v1
        - Q2 * u
        - Q1 * u1
        - Q * u2
        + (-10.0 * c * c + 1.5) * P * u
        + 20.0 * c * c * Q * u * u
    ) / 20.0
    return first, second


def qp_expansion_check(
    n_values: Iterable[int],
    c: float,
    s: float,
    gridX: Optional[Sequence[float]] = None,
    m: int = DEFAULT_M,
    workers: Optional[int] = 1,
) -> ExpansionReport:
    """
    n^{-1/6} Q_n(tau(X); tau(s)) and n^{-1/6} P_n against their expansions.

    The grid starts at X = s, so the endpoint scalars q_n, p_n are part of
    every sup-norm.
    """
    n_values = [int(n) for n in n_values]
    X = np.asarray(default_grid_X(s) if gridX is None else gridX, dtype=float)
    sample = airy_ops.build_resolvent(s, m)
    f = airy_ops.functionals_from_sample(sample)
    Qm, Pm = airy_ops.extend_moments(sample, X)
    q_first, q_second = _qp_expansion(c, -1, Qm, Pm, f)
    p_first, p_second = _qp_expansion(c, +1, Qm, Pm, f)
    lead = Qm[0]

    def one(n: int) -> List[float]:
        scaling = ScalingMap(n, c)
        state = state_at(n, scaling.tau(s), c, m)
        Qn, Pn = extend_qp(state, scaling.tau(X))
        eps = n ** (-1.0 / 3.0)
        out = []
        for values, first, second in ((Qn, q_first, q_second), (Pn, p_first, p_second)):
            r0 = n ** (-1.0 / 6.0) * values - lead
            r1 = r0 - first * eps
            r2 = r1 - second * eps * eps
            out.append([float(np.max(np.abs(r))) for r in (r0, r1, r2)])
        return [max(a, b) for a, b in zip(*out)]

    rows = parallel_map(one, n_values, workers)
    residuals = {order: [row[order] for row in rows] for order in (0, 1, 2)}
    return _fit_report("qp", n_values, residuals)


def phi_expansion_check(
    n_values: Iterable[int], c: float, X: Sequence[float], which: str = "phi"
) -> ExpansionReport:
    """
    n^{-1/6} phi~(tau(X)) (or psi~) against
    Ai + ((2c -+ 1)/2) Ai' n^{-1/3} + ((10c^2 -+ 10c + 3/2) X Ai + X^2 Ai') n^{-2/3}/20.
    """
    if which not in ("phi", "psi"):
        raise RegimeError("which", which, "which in {phi, psi}")
    sign = -1 if which == "phi" else 1
    n_values = [int(n) for n in n_values]
    X = np.asarray(X, dtype=float)
    ai, aip = airy_pair(X)
    first = 0.5 * (2.0 * c + sign) * aip
    second = ((10.0 * c * c + sign * 10.0 * c + 1.5) * X * ai + X * X * aip) / 20.0

    residuals: Dict[int, List[float]] = {0: [], 1: [], 2: []}
    for n in n_values:
        scaling = ScalingMap(n, c)
        phi, psi = weighted_phi(n, scaling.tau(X))
        values = n ** (-1.0 / 6.0) * (phi if which == "phi" else psi)
        eps = n ** (-1.0 / 3.0)
        r0 = values - ai
        r1 = r0 - first * eps
        r2 = r1 - second * eps * eps
        for order, r in enumerate((r0, r1, r2)):
            residuals[order].append(float(np.max(np.abs(r))))
    return _fit_report(which, n_values, residuals)


# -- differential identities at finite n -----------------------------------------


def log_derivative_identity(
    n: int, t: float, h: float = 1e-4, m: int = DEFAULT_M
) -> Tuple[float, float]:
    """(d/dt log F_{n,2}(t) by central differences, R_n(t, t; t)).

    Both sides are positive: F_{n,2} increases in t.
    """
    lo = math.log(cdf_fredholm(n, t - h, m))
    hi = math.log(cdf_fredholm(n, t + h, m))
    return (hi - lo) / (2.0 * h), resolvent_diagonal(state_at(n, t, m=m))


def resolvent_derivative_identity(
    n: int, t: float, h: float = 1e-4, m: int = DEFAULT_M
) -> Tuple[float, float]:
    """(d/dt R_n(t, t; t) by central differences, -2 q_n(t) p_n(t))."""
    lo = resolvent_diagonal(state_at(n, t - h, m=m))
    hi = resolvent_diagonal(state_at(n, t + h, m=m))
    state = state_at(n, t, m=m)
    return (hi - lo) / (2.0 * h), -2.0 * state.qn * state.pn
