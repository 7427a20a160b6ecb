"""
The four gueedge commands. Each builds a Report from a validated RunConfig.
"""

import logging
from typing import List, Tuple

import numpy as np

from ..models import RunConfig, SamplerConfig, ScalingMap
from ..operators import airy_ops, edgeworth, gue_mc, hermite_n, painleve2
from ..operators.fitting import fit_slopes
from . import checks
from .output import Report

logger = logging.getLogger(__name__)

TW_COLUMNS = ("s", "F2_det", "F2_qint", "q", "u0", "v0")
EDGEWORTH_COLUMNS = (
    "n",
    "c",
    "s",
    "F_exact",
    "F_order0",
    "F_order1",
    "F_order2",
    "residual0",
    "residual1",
    "residual2",
)
VERIFY_COLUMNS = ("name", "measured", "tolerance", "passed", "detail")
MC_COLUMNS = ("n", "t", "empirical", "halfwidth", "fredholm", "inside_CI")

MC_DEFAULT_S = np.linspace(-4.0, 2.0, 20)


def cmd_tw_table(cfg: RunConfig) -> Report:
    """F_2 by both routes, with q, u_0, v_0, over cfg.s_grid."""
    report = Report("tw-table", TW_COLUMNS)
    grid = painleve2.default_grid()
    values = airy_ops.functionals_many(cfg.s_grid, cfg.m, cfg.T, cfg.workers)
    for s, f in zip(cfg.s_grid, values):
        report.add_row(
            s=float(s),
            F2_det=airy_ops.f2_cdf(s, "determinant", cfg.m, cfg.T),
            F2_qint=painleve2.f2_from_q(grid, s),
            q=float(f.q[0]),
            u0=float(f.u[0]),
            v0=float(f.v[0]),
        )
    return report


def cmd_edgeworth(cfg: RunConfig) -> Report:
    """
    Exact F_{n,2}(tau(s)) next to the Edgeworth approximations of order 0, 1, 2.

    With four or more n values a slope per order and s is fitted, the
    same fit order_estimate reports.
    """
    report = Report("edgeworth", EDGEWORTH_COLUMNS)
    per_s = {}
    for s in cfg.s_grid:
        parts = edgeworth.terms(s, cfg.c, m=cfg.m, T=cfg.T)
        residuals = {0: [], 1: [], 2: []}
        for n in cfg.n_list:
            exact = hermite_n.cdf_fredholm(n, ScalingMap(n, cfg.c).tau(s), cfg.m)
            approx = [parts.assembled(n, order) for order in (0, 1, 2)]
            for order in (0, 1, 2):
                residuals[order].append(abs(exact - approx[order]))
            report.add_row(
                n=int(n),
                c=float(cfg.c),
                s=float(s),
                F_exact=exact,
                F_order0=approx[0],
                F_order1=approx[1],
                F_order2=approx[2],
                residual0=residuals[0][-1],
                residual1=residuals[1][-1],
                residual2=residuals[2][-1],
            )
        per_s[s] = residuals

    if len(cfg.n_list) >= 4:
        for s, residuals in per_s.items():
            fits = fit_slopes(
                f"edgeworth(c={cfg.c:g},s={s:g})",
                cfg.n_list,
                residuals,
                edgeworth.ORDER_NOISE_FLOOR,
            )
            for order, fit in fits.items():
                report.summary[f"slope_order{order}_s={s:g}"] = fit.slope
    return report


def cmd_verify(cfg: RunConfig) -> Tuple[Report, bool]:
    """Run the selected checks (all by default); the flag is True iff every one passes."""
    names: List[str] = cfg.checks or checks.check_names()
    report = Report("verify", VERIFY_COLUMNS)
    for name in names:
        result = checks.run_check(name, cfg.m, cfg.tolerance, cfg.workers)
        report.add_row(**result.as_dict())
    all_passed = all(row["passed"] for row in report.rows)
    report.summary["passed"] = sum(1 for row in report.rows if row["passed"])
    report.summary["failed"] = sum(1 for row in report.rows if not row["passed"])
    return report, all_passed


def _mc_t_grid(cfg: RunConfig, n: int) -> List[float]:
    if cfg.t_grid:
        return list(cfg.t_grid)
    return [float(t) for t in ScalingMap(n, cfg.c).tau(MC_DEFAULT_S)]


def cmd_mc(cfg: RunConfig) -> Report:
    """Empirical CDF of sampled lambda_max against cdf_fredholm with 3-sigma bands."""
    report = Report("mc", MC_COLUMNS)
    for n in cfg.n_list:
        sampler = SamplerConfig(n=n, num_samples=cfg.num_samples, seed=cfg.seed, c=cfg.c)
        draws = gue_mc.LambdaMaxCollector(sampler, cfg.workers).sample()
        t_grid = _mc_t_grid(cfg, n)
        worst = 0.0
        for t in t_grid:
            estimate, halfwidth = gue_mc.empirical_cdf(draws, t)
            exact = hermite_n.cdf_fredholm(n, t, cfg.m)
            worst = max(worst, abs(estimate - exact))
            report.add_row(
                n=int(n),
                t=float(t),
                empirical=estimate,
                halfwidth=halfwidth,
                fredholm=exact,
                inside_CI=bool(abs(estimate - exact) <= halfwidth),
            )
        report.summary[f"ks_n={n}"] = worst
        logger.info("n=%d: %d draws, KS distance %.4f", n, draws.size, worst)
    return report
