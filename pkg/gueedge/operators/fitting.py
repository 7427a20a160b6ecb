"""
Log-log slope fits of residual decay against n.
"""

import logging
import math
from typing import Dict, List, Sequence

import numpy as np

from ..models import SlopeFit

logger = logging.getLogger(__name__)

DEFAULT_NOISE_FLOOR = 1e-11


def fit_slope(
    label: str,
    n_values: Sequence[int],
    residuals: Sequence[float],
    noise_floor: float = DEFAULT_NOISE_FLOOR,
) -> SlopeFit:
    """Least-squares slope of log|residual| against log n."""
    n_arr = np.asarray(n_values, dtype=float)
    r_arr = np.abs(np.asarray(residuals, dtype=float))
    degenerate = bool(n_arr.size < 2 or np.any(r_arr <= noise_floor))
    if degenerate:
        logger.warning("%s: residuals reach the %.0e noise floor; slope is unreliable", label, noise_floor)
    safe = np.maximum(r_arr, np.finfo(float).tiny)
    if n_arr.size >= 2:
        slope, intercept = np.polyfit(np.log(n_arr), np.log(safe), 1)
    else:
        slope, intercept = math.nan, math.nan
    return SlopeFit(
        label=label,
        n_values=[int(n) for n in n_values],
        residuals=[float(r) for r in r_arr],
        slope=float(slope),
        intercept=float(intercept),
        degenerate=degenerate,
    )


def fit_slopes(
    name: str,
    n_values: Sequence[int],
    residuals: Dict[int, List[float]],
    noise_floor: float = DEFAULT_NOISE_FLOOR,
) -> Dict[int, SlopeFit]:
    """One fit per order."""
    return {
        order: fit_slope(f"{name}/order{order}", n_values, values, noise_floor)
        for order, values in residuals.items()
    }
