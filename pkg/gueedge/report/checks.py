"""
Named verification checks for `gueedge verify`.

Each check measures one quantity and compares it with a tolerance.
Residual checks pass when the measured value is at most the tolerance;
slope checks pass when the fitted slope is within the tolerance of its
expected value. A --tolerance override replaces every default.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional

import numpy as np

from ..errors import GueEdgeError
from ..models import CheckResult, ScalingMap
from ..operators import airy_ops, edgeworth, hermite_n, painleve2
from ..operators.fitting import fit_slope
from ..operators.specfun import erf

logger = logging.getLogger(__name__)

IDENTITY_S = (-4.0, -2.0, 0.0, 2.0)
INTEGRAL_S = (-2.0, 0.0, 2.0)
TW_S = (-8.0, -6.0, -4.0, -2.0, 0.0, 2.0, 4.0)
SLOPE_N = (64, 128, 256, 512, 1024)
EDGEWORTH_N = (16, 32, 64, 128, 256, 512)
KERNEL_N = (64, 128, 256, 512, 1024, 2048, 4096)


@dataclass(frozen=True)
class Check:
    name: str
    fn: Callable[[int, float, Optional[int]], CheckResult]
    tolerance: float
    description: str
    expected: Optional[float] = None


CHECKS: Dict[str, Check] = {}


def register(name: str, tolerance: float, description: str, expected: Optional[float] = None):
    """Add fn(m, tolerance, workers) -> CheckResult to the registry."""

    def wrap(fn):
        CHECKS[name] = Check(name, fn, tolerance, description, expected)
        return fn

    return wrap


def _residual(name: str, measured: float, tolerance: float, detail: str = "") -> CheckResult:
    passed = math.isfinite(measured) and measured <= tolerance
    return CheckResult(name, float(measured), tolerance, bool(passed), detail)


def _slope(name: str, slope: float, expected: float, tolerance: float, detail: str = "") -> CheckResult:
    passed = math.isfinite(slope) and abs(slope - expected) <= tolerance
    return CheckResult(
        name, float(slope), tolerance, bool(passed), f"expected {expected:+.3f}; {detail}".strip("; ")
    )


def _worst(pairs: Iterable) -> float:
    return max(abs(lhs - rhs) for lhs, rhs in pairs)


# -- Tracy-Widom and finite-n cross routes ---------------------------------------


@register("tw-cross-route", 1e-7, "F_2 by determinant against the Hastings-McLeod q-integral")
def check_tw_cross_route(m, tolerance, workers):
    grid = painleve2.default_grid()
    return _residual(
        "tw-cross-route",
        _worst((airy_ops.f2_cdf(s, "determinant", m), painleve2.f2_from_q(grid, s)) for s in TW_S),
        tolerance,
        f"s in {list(TW_S)}",
    )


@register("finite-cross-route", 1e-7, "F_{n,2} by the q_n p_n integral against the determinant")
def check_finite_cross_route(m, tolerance, workers):
    gaps = []
    for n in (1, 2, 4, 8, 16):
        for c in (0.0, 1.0):
            for s in INTEGRAL_S:
                t = ScalingMap(n, c).tau(s)
                gaps.append(
                    abs(hermite_n.cdf_via_qp(n, t, workers=workers) - hermite_n.cdf_fredholm(n, t, m))
                )
    return _residual("finite-cross-route", max(gaps), tolerance, "n in {1,2,4,8,16}")


@register("closed-form-n1", 1e-10, "F_{1,2}(t) = (1 + erf t)/2")
def check_closed_form(m, tolerance, workers):
    ts = np.linspace(-2.0, 2.5, 10)
    return _residual(
        "closed-form-n1",
        _worst((hermite_n.cdf_fredholm(1, t, m), 0.5 * (1.0 + erf(t))) for t in ts),
        tolerance,
    )


# -- identities of the Airy functionals ------------------------------------------


@register("identity-derivatives", 1e-6, "u_0' = -q_0^2 and v_0' = -p_0 q_0 by central differences")
def check_derivatives(m, tolerance, workers):
    h = 1e-4
    gaps = []
    for s in IDENTITY_S:
        f = airy_ops.functionals(s, m)
        lo, hi = airy_ops.functionals(s - h, m), airy_ops.functionals(s + h, m)
        gaps.append(abs((hi.u[0] - lo.u[0]) / (2 * h) + f.q[0] ** 2))
        gaps.append(abs((hi.v[0] - lo.v[0]) / (2 * h) + f.p[0] * f.q[0]))
    return _residual("identity-derivatives", max(gaps), tolerance)


@register("identity-q1", 1e-8, "q_1 = s q_0 - v_0 q_0 + u_0 p_0")
def check_q1(m, tolerance, workers):
    fs = [airy_ops.functionals(s, m) for s in IDENTITY_S]
    return _residual(
        "identity-q1",
        _worst((f.q[1], f.s * f.q[0] - f.v[0] * f.q[0] + f.u[0] * f.p[0]) for f in fs),
        tolerance,
    )


@register("identity-u1", 1e-8, "u_1 - u_0 v_0 + w_0 = -p_0 q_0")
def check_u1(m, tolerance, workers):
    fs = [airy_ops.functionals(s, m) for s in IDENTITY_S]
    return _residual(
        "identity-u1",
        _worst((f.u[1] - f.u[0] * f.v[0] + f.w[0], -f.p[0] * f.q[0]) for f in fs),
        tolerance,
    )


@register("identity-commutator", 1e-8, "v_1 - vt_1 = v_0^2 - u_0 w_0")
def check_commutator(m, tolerance, workers):
    fs = [airy_ops.functionals(s, m) for s in IDENTITY_S]
    return _residual(
        "identity-commutator",
        _worst((f.v[1] - f.vt[1], f.v[0] ** 2 - f.u[0] * f.w[0]) for f in fs),
        tolerance,
    )


@register("identity-matching", 1e-5, "integral of the bracket terms against its closed form")
def check_matching(m, tolerance, workers):
    return _residual(
        "identity-matching",
        _worst(edgeworth.matching_identity(s, m, workers) for s in IDENTITY_S),
        tolerance,
    )


@register("identity-first-term", 1e-5, "-int (x-s) a(x) dx = c u_0(s) at c = 1")
def check_first_term(m, tolerance, workers):
    return _residual(
        "identity-first-term",
        _worst(edgeworth.first_term_identity(s, 1.0, m, workers) for s in INTEGRAL_S),
        tolerance,
    )


@register("identity-c-term", 1e-5, "int (x-s)(q q_1 - 3q^2 v + ...) dx = u^2/2 - v")
def check_c_term(m, tolerance, workers):
    return _residual(
        "identity-c-term",
        _worst(edgeworth.c_term_identity(s, m, workers) for s in INTEGRAL_S),
        tolerance,
    )


@register("identity-v-term", 1e-5, "int (x-s)(-3 q_1 q + ...) dx = 3 v(s)")
def check_v_term(m, tolerance, workers):
    return _residual(
        "identity-v-term",
        _worst(edgeworth.v_term_identity(s, m, workers) for s in INTEGRAL_S),
        tolerance,
    )


@register("resolvent-inner-products", 1e-9, "(Z^i Ai, R(., Y)) = Q_i(Y) - Y^i Ai(Y) and the Ai' analogue")
def check_inner_products(m, tolerance, workers):
    worst = max(
        max(airy_ops.resolvent_identity_residuals(airy_ops.build_resolvent(s, m)).values())
        for s in INTEGRAL_S
    )
    return _residual("resolvent-inner-products", worst, tolerance)


# -- finite-n differential identities --------------------------------------------


def _relative(pairs: Iterable) -> float:
    return max(abs(lhs - rhs) / max(abs(rhs), 1e-300) for lhs, rhs in pairs)


@register("log-derivative", 1e-4, "d/dt log F_{n,2}(t) = R_n(t,t;t) at n = 8")
def check_log_derivative(m, tolerance, workers):
    scaling = ScalingMap(8)
    return _residual(
        "log-derivative",
        _relative(hermite_n.log_derivative_identity(8, scaling.tau(s), m=m) for s in INTEGRAL_S),
        tolerance,
        "relative error",
    )


@register("resolvent-derivative", 1e-4, "d/dt R_n(t,t;t) = -2 q_n p_n at n = 8")
def check_resolvent_derivative(m, tolerance, workers):
    scaling = ScalingMap(8)
    return _residual(
        "resolvent-derivative",
        _relative(
            hermite_n.resolvent_derivative_identity(8, scaling.tau(s), m=m) for s in INTEGRAL_S
        ),
        tolerance,
        "relative error",
    )


@register("christoffel-darboux", 1e-8, "R_n(x,y) = (Q_n(x)P_n(y) - P_n(x)Q_n(y))/(x - y) at n = 8")
def check_christoffel_darboux(m, tolerance, workers):
    scaling = ScalingMap(8)
    state = hermite_n.state_at(8, scaling.tau(0.0), m=m)
    x = scaling.tau(np.linspace(0.1, 3.0, 6))
    return _residual(
        "christoffel-darboux", hermite_n.christoffel_darboux_resolvent_check(state, x), tolerance
    )


# -- large-n decay rates ---------------------------------------------------------


@register("kernel-slope", 0.2, "scaled Hermite kernel minus its n^{-2/3} expansion", expected=-1.0)
def check_kernel_slope(m, tolerance, workers):
    X, Y, c = 0.3, -0.2, 0.5
    residuals = [
        abs(
            hermite_n.scaled_kernel(ScalingMap(n, c), X, Y)
            - hermite_n.kernel_expansion_rhs(c, X, Y, 2, n)
        )
        for n in KERNEL_N
    ]
    fit = fit_slope("kernel", KERNEL_N, residuals)
    return _slope("kernel-slope", fit.slope, -1.0, tolerance)


def _report_slope(name: str, report, tolerance: float) -> CheckResult:
    fit = report.fits[2]
    return _slope(name, fit.slope, -1.0, tolerance, "degenerate" if fit.degenerate else "")


@register("resolvent-slope", 0.25, "scaled R_n against its expansion, order 2", expected=-1.0)
def check_resolvent_slope(m, tolerance, workers):
    report = hermite_n.resolvent_n_check(SLOPE_N, 0.5, 0.0, m=m, workers=workers)
    return _report_slope("resolvent-slope", report, tolerance)


@register("qp-slope", 0.25, "scaled Q_n, P_n against their expansions, order 2", expected=-1.0)
def check_qp_slope(m, tolerance, workers):
    report = hermite_n.qp_expansion_check(SLOPE_N, 0.5, 0.0, m=m, workers=workers)
    return _report_slope("qp-slope", report, tolerance)


@register("phi-slope", 0.25, "scaled phi~ against its expansion, order 2", expected=-1.0)
def check_phi_slope(m, tolerance, workers):
    report = hermite_n.phi_expansion_check(SLOPE_N, 0.5, np.linspace(-2.0, 2.0, 9))
    return _report_slope("phi-slope", report, tolerance)


@register("integrand-slope", 0.25, "n^{-1/3} q_n p_n against q^2 + a + b/20, order 2", expected=-1.0)
def check_integrand_slope(m, tolerance, workers):
    report = edgeworth.integrand_expansion_check(SLOPE_N, 0.5, (-1.0, 0.0, 1.0), m)
    return _report_slope("integrand-slope", report, tolerance)


def _edgeworth_slope(
    name: str, c: float, order: int, expected: float, m, tolerance, workers, note: str = ""
):
    fits = edgeworth.order_estimate(c, 0.0, EDGEWORTH_N, m, workers=workers)
    fit = fits[order]
    detail = "; ".join(part for part in (note, "degenerate" if fit.degenerate else "") if part)
    return _slope(name, fit.slope, expected, tolerance, detail)


@register("edgeworth-order0", 0.1, "F_exact - F_2 at c = 1", expected=-1.0 / 3.0)
def check_edgeworth_order0(m, tolerance, workers):
    return _edgeworth_slope("edgeworth-order0", 1.0, 0, -1.0 / 3.0, m, tolerance, workers)


@register("edgeworth-order1", 0.1, "first-order remainder at c = 1", expected=-2.0 / 3.0)
def check_edgeworth_order1(m, tolerance, workers):
    return _edgeworth_slope("edgeworth-order1", 1.0, 1, -2.0 / 3.0, m, tolerance, workers)


@register("edgeworth-order2", 0.25, "second-order remainder at c = 1/2", expected=-1.0)
def check_edgeworth_order2(m, tolerance, workers):
    return _edgeworth_slope("edgeworth-order2", 0.5, 2, -1.0, m, tolerance, workers)


@register(
    "edgeworth-order2-unshifted", 0.15, "second-order remainder at c = 0", expected=-4.0 / 3.0
)
def check_edgeworth_order2_unshifted(m, tolerance, workers):
    return _edgeworth_slope(
        "edgeworth-order2-unshifted",
        0.0,
        2,
        -4.0 / 3.0,
        m,
        tolerance,
        workers,
        "n^{-1} coefficient vanishes at c = 0, so the remainder is O(n^{-4/3})",
    )


@register("adjudication", 1e-5, "bracket_integral = -E_{c,2} for exactly the shipped reading")
def check_adjudication(m, tolerance, workers):
    report = edgeworth.adjudicate(INTEGRAL_S, 0.0, tolerance, m, workers)
    gaps = report.gap_printed if edgeworth.DEFAULT_VARIANT == "printed" else report.gap_tilde
    detail = (
        f"printed gap {max(report.gap_printed):.2e}, tilde gap {max(report.gap_tilde):.2e}, "
        f"winner {report.winner}"
    )
    passed = report.winner == edgeworth.DEFAULT_VARIANT
    return CheckResult("adjudication", float(max(gaps)), tolerance, passed, detail)


def check_names() -> List[str]:
    return list(CHECKS)


def run_check(name: str, m: int, tolerance: Optional[float] = None, workers: Optional[int] = 1) -> CheckResult:
    """Run one check; numerical failures are reported as a failed row."""
    check = CHECKS[name]
    tol = check.tolerance if tolerance is None else tolerance
    logger.info("running %s", name)
    try:
        return check.fn(m, tol, workers)
    except GueEdgeError as exc:
        logger.warning("%s raised %s", name, exc)
        return CheckResult(name, math.nan, tol, False, f"{type(exc).__name__}: {exc}")
