"""
Edgeworth-corrected distribution of the largest GUE_n eigenvalue.

    F_{n,2}(tau(s)) = F_2(s) {1 + c u_0(s) n^{-1/3} - E_{c,2}(s) n^{-2/3} / 20} + O(n^{-1})

The second-order coefficient is available in closed form (ec2) and as
the integral bracket it was simplified from (bracket_integral); the two
are compared by adjudicate(). Both are carried at n^{-2/3}.
"""

import logging
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..config import DEFAULT_C, DEFAULT_COMPOSE_M, DEFAULT_COMPOSE_T, DEFAULT_M, DEFAULT_T
from ..errors import RegimeError
from ..models import (
    AdjudicationReport,
    AiryFunctionals,
    EdgeworthTerms,
    ExpansionReport,
    ScalingMap,
    SlopeFit,
)
from ..parallel import parallel_map
from . import airy_ops, hermite_n
from .fitting import fit_slopes

logger = logging.getLogger(__name__)

VARIANTS = ("printed", "tilde")
DEFAULT_VARIANT = "printed"
ORDER_NOISE_FLOOR = 1e-7
ADJUDICATION_TOL = 1e-5


def _check_variant(variant: str) -> None:
    if variant not in VARIANTS:
        raise RegimeError("variant", variant, f"variant in {VARIANTS}")


def ec2_from(f: AiryFunctionals, c: float, variant: str = DEFAULT_VARIANT) -> float:
    """
    E_{c,2} = 2w_1 - 3u_2 + (-20c^2 + 3)v_0 + u_1 v_0 - u_0 v_1 + u_0 v_0^2 - u_0^2 w_0.

    variant="tilde" puts vt_1 in place of v_1.
    """
    _check_variant(variant)
    u, v, w = f.u, f.v, f.w
    v1 = v[1] if variant == "printed" else f.vt[1]
    return float(
        2.0 * w[1]
        - 3.0 * u[2]
        + (-20.0 * c * c + 3.0) * v[0]
        + u[1] * v[0]
        - u[0] * v1
        + u[0] * v[0] ** 2
        - u[0] ** 2 * w[0]
    )


def ec2(
    s: float, c: float, variant: str = DEFAULT_VARIANT, m: int = DEFAULT_M, T: float = DEFAULT_T
) -> float:
    """E_{c,2}(s) from the Airy functionals at s."""
    return ec2_from(airy_ops.functionals(s, m, T), c, variant)


def bracket_integrand(f: AiryFunctionals) -> float:
    """-6u_1 - 2v_2 - 2v_1 v_0 + 2u_2 u_0 + u_1^2 + 2w_0 at one endpoint."""
    u, v, w = f.u, f.v, f.w
    return float(
        -6.0 * u[1] - 2.0 * v[2] - 2.0 * v[1] * v[0] + 2.0 * u[2] * u[0] + u[1] ** 2 + 2.0 * w[0]
    )


def bracket_integral(
    s: float,
    c: float,
    m: int = DEFAULT_M,
    T: float = DEFAULT_T,
    outer_m: int = DEFAULT_COMPOSE_M,
    outer_T: float = DEFAULT_COMPOSE_T,
    workers: Optional[int] = 1,
) -> float:
    """(20c^2 - 3) v_0(s) + int_s^inf bracket_integrand dx."""
    v0 = airy_ops.functionals(s, m, T).v[0]
    integral = airy_ops.compose_integral(
        bracket_integrand, s, m, T, outer_m, outer_T, workers=workers
    )
    return float((20.0 * c * c - 3.0) * v0 + integral)


def terms(
    s: float,
    c: float = DEFAULT_C,
    variant: str = DEFAULT_VARIANT,
    with_integral: bool = False,
    m: int = DEFAULT_M,
    T: float = DEFAULT_T,
) -> EdgeworthTerms:
    """F_2(s) and both correction terms; the integral form only on request."""
    f = airy_ops.functionals(s, m, T)
    term2_integral = bracket_integral(s, c, m, T) / 20.0 if with_integral else float("nan")
    return EdgeworthTerms(
        s=float(s),
        c=float(c),
        f2=airy_ops.f2_cdf(s, "determinant", m, T),
        term1=float(c * f.u[0]),
        term2_closed=-ec2_from(f, c, variant) / 20.0,
        term2_integral=term2_integral,
    )


def edgeworth_cdf(
    n: int,
    c: float,
    s: float,
    order: int = 2,
    variant: str = DEFAULT_VARIANT,
    m: int = DEFAULT_M,
    T: float = DEFAULT_T,
) -> float:
    """F_2(s){1 + c u_0 n^{-1/3} - E_{c,2} n^{-2/3}/20} truncated at order."""
    if n < 1:
        raise RegimeError("n", n, "n >= 1")
    if order not in (0, 1, 2):
        raise RegimeError("order", order, "order in {0, 1, 2}")
    return terms(s, c, variant, m=m, T=T).assembled(n, order)


def order_estimate(
    c: float,
    s: float,
    n_list: Sequence[int],
    m: int = DEFAULT_M,
    variant: str = DEFAULT_VARIANT,
    workers: Optional[int] = 1,
) -> Dict[int, SlopeFit]:
    """
    Log-log slopes of |cdf_fredholm(n, tau(s)) - edgeworth_cdf(n, c, s, order)|.

    Expected near -1/3 (order 0, c != 0), -2/3 (order 1) and -1 (order 2).
    """
    n_list = [int(n) for n in n_list]
    if len(n_list) < 4:
        raise RegimeError("n_list", n_list, "at least 4 values")
    parts = terms(s, c, variant, m=m)

    def exact(n: int) -> float:
        return hermite_n.cdf_fredholm(n, ScalingMap(n, c).tau(s), m)

    exact_values = parallel_map(exact, n_list, workers)
    residuals = {
        order: [abs(F - parts.assembled(n, order)) for n, F in zip(n_list, exact_values)]
        for order in (0, 1, 2)
    }
    return fit_slopes(f"edgeworth(c={c:g},s={s:g})", n_list, residuals, ORDER_NOISE_FLOOR)


def first_order_sequence(
    c: float, s: float, n_values: Iterable[int], m: int = DEFAULT_M
) -> Tuple[List[float], float]:
    """n^{1/3}(F_{n,2}(tau(s)) - F_2(s)) over n, and the limit c u_0(s) F_2(s)."""
    parts = terms(s, c, m=m)
    seq = [
        n ** (1.0 / 3.0) * (hermite_n.cdf_fredholm(n, ScalingMap(n, c).tau(s), m) - parts.f2)
        for n in n_values
    ]
    return seq, parts.term1 * parts.f2


def adjudicate(
    s_values: Iterable[float] = (-2.0, 0.0, 2.0),
    c: float = DEFAULT_C,
    tolerance: float = ADJUDICATION_TOL,
    m: int = DEFAULT_M,
    workers: Optional[int] = 1,
) -> AdjudicationReport:
    """Compare bracket_integral with -E_{c,2} under the printed and tilde readings."""
    s_values = [float(s) for s in s_values]
    gap_printed: List[float] = []
    gap_tilde: List[float] = []
    for s in s_values:
        bracket = bracket_integral(s, c, m, workers=workers)
        f = airy_ops.functionals(s, m)
        gap_printed.append(abs(bracket + ec2_from(f, c, "printed")))
        gap_tilde.append(abs(bracket + ec2_from(f, c, "tilde")))
    report = AdjudicationReport(
        s_values=s_values, c=c, gap_printed=gap_printed, gap_tilde=gap_tilde, tolerance=tolerance
    )
    logger.info(
        "adjudication: printed gap %.2e, tilde gap %.2e -> %s",
        max(gap_printed),
        max(gap_tilde),
        report.winner,
    )
    return report


# -- integrand expansion and integral identities ---------------------------------


def integrand_terms(f: AiryFunctionals, c: float) -> Tuple[float, float]:
    """a(x) and b(x) of n^{-1/3} q_n p_n = q^2 + a n^{-1/3} + b n^{-2/3}/20 at one point."""
    q, q1, q2 = f.q
    p, p1, p2 = f.p
    u, u1, u2 = f.u
    v, v1, _ = f.v
    c2 = c * c
    a = 2.0 * c * (p * q - u * q * q)
    b = (
        (20.0 * c2 + 3.0) * q * q1
        + 2.0 * p2 * q
        + (-60.0 * c2 + 3.0) * q * q * v
        + 2.0 * p1 * q * v
        + 2.0 * p * q * v1
        - 2.0 * q2 * q * u
        - 2.0 * q1 * q * u1
        - 2.0 * q * q * u2
        + 60.0 * c2 * q * q * u * u
        + (-60.0 * c2 + 3.0) * p * q * u
        + (20.0 * c2 - 5.0) * p * p
    )
    return float(a), float(b)


def integrand_expansion_check(
    n_values: Iterable[int], c: float, X: Sequence[float], m: int = DEFAULT_M
) -> ExpansionReport:
    """n^{-1/3} q_n(tau(X)) p_n(tau(X)) against q^2 + a n^{-1/3} + b n^{-2/3}/20."""
    n_values = [int(n) for n in n_values]
    fs = [airy_ops.functionals(x, m) for x in X]
    lead = np.array([f.q[0] ** 2 for f in fs])
    ab = np.array([integrand_terms(f, c) for f in fs])

    residuals: Dict[int, List[float]] = {0: [], 1: [], 2: []}
    for n in n_values:
        scaling = ScalingMap(n, c)
        values = []
        for x in X:
            qn, pn = hermite_n.endpoint_qp(n, scaling.tau(x), m)
            values.append(n ** (-1.0 / 3.0) * qn * pn)
        eps = n ** (-1.0 / 3.0)
        r0 = np.array(values) - lead
        r1 = r0 - ab[:, 0] * eps
        r2 = r1 - ab[:, 1] * eps * eps / 20.0
        for order, r in enumerate((r0, r1, r2)):
            residuals[order].append(float(np.max(np.abs(r))))
    report = ExpansionReport(name="integrand", n_values=n_values, residuals=residuals)
    report.fits = fit_slopes("integrand", n_values, residuals)
    return report


def _weighted_integral(
    integrand: Callable[[AiryFunctionals], float], s: float, m: int, workers: Optional[int]
) -> float:
    return airy_ops.compose_integral(integrand, s, m, weight=lambda x: x - s, workers=workers)


def first_term_identity(
    s: float, c: float, m: int = DEFAULT_M, workers: Optional[int] = 1
) -> Tuple[float, float]:
    """(-int_s^inf (x - s) a(x) dx, c u_0(s))."""
    lhs = -_weighted_integral(lambda f: integrand_terms(f, c)[0], s, m, workers)
    return lhs, float(c * airy_ops.functionals(s, m).u[0])


def c_term_identity(
    s: float, m: int = DEFAULT_M, workers: Optional[int] = 1
) -> Tuple[float, float]:
    """(int_s^inf (x - s)(q q_1 - 3q^2 v + 3q^2 u^2 - 3pqu + p^2) dx, u^2/2 - v)."""

    def integrand(f: AiryFunctionals) -> float:
        q, q1 = f.q[0], f.q[1]
        p, u, v = f.p[0], f.u[0], f.v[0]
        return q * q1 - 3 * q * q * v + 3 * q * q * u * u - 3 * p * q * u + p * p

    f = airy_ops.functionals(s, m)
    return _weighted_integral(integrand, s, m, workers), float(0.5 * f.u[0] ** 2 - f.v[0])


def v_term_identity(
    s: float, m: int = DEFAULT_M, workers: Optional[int] = 1
) -> Tuple[float, float]:
    """(int_s^inf (x - s)(-3 q_1 q + 3 q^2 v - 3 p^2 + 3 u p q) dx, 3 v(s))."""

    def integrand(f: AiryFunctionals) -> float:
        q, q1 = f.q[0], f.q[1]
        p, u, v = f.p[0], f.u[0], f.v[0]
        return -3 * q1 * q + 3 * q * q * v - 3 * p * p + 3 * u * p * q

    return _weighted_integral(integrand, s, m, workers), float(3.0 * airy_ops.functionals(s, m).v[0])


def matching_identity(
    s: float, m: int = DEFAULT_M, workers: Optional[int] = 1
) -> Tuple[float, float]:
    """(int_s^inf (6u_1 + 2v_2 + 2v_1 v_0 - 2u_2 u_0 - u_1^2 - 2w_0) dx,
    2w_1 - 3u_2 + u_1 v_0 - u_0 vt_1)."""
    lhs = -airy_ops.compose_integral(bracket_integrand, s, m, workers=workers)
    f = airy_ops.functionals(s, m)
    rhs = 2.0 * f.w[1] - 3.0 * f.u[2] + f.u[1] * f.v[0] - f.u[0] * f.vt[1]
    return float(lhs), float(rhs)
