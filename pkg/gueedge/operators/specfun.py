"""
Scalar special functions: Airy Ai and Ai', the orthonormal Hermite
oscillator functions phi_k, and erf.

Airy and erf come from scipy.special. The oscillator functions use the
orthonormal three-term recurrence with a separate log-scale accumulator,
so phi_k stays finite near the turning point for k in the thousands.
"""

import logging
import math
from typing import Tuple, Union

import numpy as np
from scipy import special

from ..errors import RegimeError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

PI_QUARTER = math.pi ** -0.25
MAX_HERMITE_ORDER = 10 ** 6
RESCALE_EVERY = 10


def _scalar_or_array(values: np.ndarray, like) -> ArrayLike:
    if np.ndim(like) == 0:
        return float(np.asarray(values).reshape(-1)[0])
    return values


def airy_pair(x: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
    """Return (Ai(x), Ai'(x))."""
    ai, aip, _, _ = special.airy(np.asarray(x, dtype=float))
    return _scalar_or_array(ai, x), _scalar_or_array(aip, x)


def airy_ai(x: ArrayLike) -> ArrayLike:
    """Airy function Ai(x); underflows to 0 for large positive x."""
    return airy_pair(x)[0]


def airy_ai_prime(x: ArrayLike) -> ArrayLike:
    """Derivative Ai'(x)."""
    return airy_pair(x)[1]


def erf(x: ArrayLike) -> ArrayLike:
    """Standard error function."""
    return _scalar_or_array(special.erf(np.asarray(x, dtype=float)), x)


def hermite_phi_block(k_lo: int, k_hi: int, x: ArrayLike) -> np.ndarray:
    """
    Evaluate phi_k(x) for k = k_lo..k_hi.

    Returns an array of shape (k_hi - k_lo + 1, x.size); x of any shape is
    flattened. Negative orders
    evaluate to zero, which is what the derivative identities expect at
    k = 0.
    """
    if k_hi < 0 or k_hi < k_lo:
        raise RegimeError("k_hi", k_hi, "k_hi >= max(k_lo, 0)")
    if k_hi > MAX_HERMITE_ORDER:
        raise RegimeError("k", k_hi, f"k <= {MAX_HERMITE_ORDER}")

    xs = np.asarray(x, dtype=float).ravel()
    out = np.zeros((k_hi - k_lo + 1, xs.size))

    # phi_k = mantissa * exp(log_scale); phi_0 mantissa is pi^{-1/4}
    log_scale = -0.5 * xs * xs
    prev = np.zeros_like(xs)
    cur = np.full_like(xs, PI_QUARTER)
    if k_lo <= 0:
        out[0 - k_lo] = cur * np.exp(log_scale)

    for k in range(k_hi):
        nxt = xs * math.sqrt(2.0 / (k + 1)) * cur - math.sqrt(k / (k + 1)) * prev
        prev, cur = cur, nxt

        if (k + 1) % RESCALE_EVERY == 0:
            scale = np.maximum(np.abs(prev), np.abs(cur))
            scale = np.where(scale > 0.0, scale, 1.0)
            prev = prev / scale
            cur = cur / scale
            log_scale = log_scale + np.log(scale)

        if k + 1 >= k_lo:
            out[k + 1 - k_lo] = cur * np.exp(log_scale)

    return out


def hermite_phi(k: int, x: ArrayLike) -> ArrayLike:
    """Orthonormal oscillator function phi_k(x) = H_k(x) e^{-x^2/2} / (2^k k! sqrt(pi))^{1/2}."""
    if k < 0:
        raise RegimeError("k", k, "k >= 0")
    values = hermite_phi_block(k, k, x)[0].reshape(np.shape(x))
    return _scalar_or_array(values, x)


def hermite_phi_prime(k: int, x: ArrayLike) -> ArrayLike:
    """phi_k'(x) = sqrt(k/2) phi_{k-1}(x) - sqrt((k+1)/2) phi_{k+1}(x)."""
    if k < 0:
        raise RegimeError("k", k, "k >= 0")
    block = hermite_phi_block(k - 1, k + 1, x)
    values = math.sqrt(k / 2.0) * block[0] - math.sqrt((k + 1) / 2.0) * block[2]
    values = values.reshape(np.shape(x))
    return _scalar_or_array(values, x)
