"""
Monte Carlo sampling of the largest GUE_n eigenvalue.

Draws come from the beta = 2 Hermite tridiagonal model: diagonal
entries N(0, 1/2), sub-diagonal entry k distributed as chi_{2(n-k)}/2.
Its eigenvalue law is proportional to exp(-sum l^2) prod |l_i - l_j|^2,
the same density as a dense GUE matrix under exp(-Tr H^2).

The stream is cut into fixed-size chunks, each with its own child of
SeedSequence(seed), so the draws do not depend on how many workers
produce them.
"""

import logging
import math
from dataclasses import replace
from functools import partial
from typing import Iterable, List, Optional, Tuple

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from ..config import DEFAULT_M
from ..errors import RegimeError
from ..models import SamplerConfig, ScalingMap
from ..parallel import parallel_map
from . import hermite_n

logger = logging.getLogger(__name__)

MIN_DRAWS = 100
# below this size a batched dense eigvalsh beats per-matrix tridiagonal solves
DENSE_BATCH_MAX_N = 16


def _chunk_sizes(cfg: SamplerConfig) -> List[int]:
    full, rest = divmod(cfg.num_samples, cfg.chunk_size)
    return [cfg.chunk_size] * full + ([rest] if rest else [])


def _tridiagonal_entries(
    rng: np.random.Generator, n: int, size: int
) -> Tuple[np.ndarray, np.ndarray]:
    diag = rng.normal(0.0, math.sqrt(0.5), size=(size, n))
    if n == 1:
        return diag, np.empty((size, 0))
    dof = 2.0 * np.arange(n - 1, 0, -1)
    off = 0.5 * np.sqrt(rng.chisquare(dof, size=(size, n - 1)))
    return diag, off


def _dense(diag: np.ndarray, off: np.ndarray) -> np.ndarray:
    size, n = diag.shape
    H = np.zeros((size, n, n))
    idx = np.arange(n)
    H[:, idx, idx] = diag
    H[:, idx[:-1], idx[1:]] = off
    H[:, idx[1:], idx[:-1]] = off
    return H


def _top_eigenvalues(diag: np.ndarray, off: np.ndarray) -> np.ndarray:
    n = diag.shape[1]
    if n == 1:
        return diag[:, 0].copy()
    if n <= DENSE_BATCH_MAX_N:
        return np.linalg.eigvalsh(_dense(diag, off))[:, -1]
    return np.array(
        [
            eigvalsh_tridiagonal(d, e, select="i", select_range=(n - 1, n - 1))[0]
            for d, e in zip(diag, off)
        ]
    )


def sample_chunk(cfg: SamplerConfig, index: int) -> np.ndarray:
    """Draws of chunk `index`; identical for a given (seed, n, chunk_size)."""
    sizes = _chunk_sizes(cfg)
    child = np.random.SeedSequence(cfg.seed).spawn(len(sizes))[index]
    rng = np.random.default_rng(child)
    diag, off = _tridiagonal_entries(rng, cfg.n, sizes[index])
    return _top_eigenvalues(diag, off)


def sample_lambda_max(cfg: SamplerConfig, workers: Optional[int] = 1) -> np.ndarray:
    """
    num_samples draws of lambda_max, in chunk order.

    With scaling="centered" the draws are mapped through the inverse of
    tau for (n, c).
    """
    indices = range(len(_chunk_sizes(cfg)))
    chunks = parallel_map(partial(sample_chunk, cfg), indices, workers, processes=True)
    for i, chunk in enumerate(chunks):
        logger.debug("chunk %d: %d draws", i, chunk.size)
    draws = np.concatenate(chunks)
    if cfg.scaling == "centered":
        draws = np.asarray(ScalingMap(cfg.n, cfg.c).inverse(draws))
    return draws


class LambdaMaxCollector:
    """
    Collects lambda_max draws for one SamplerConfig.

    Each call to sample() advances the seed, so successive batches are
    independent while the whole sequence stays reproducible.
    """

    def __init__(self, cfg: SamplerConfig, workers: Optional[int] = 1):
        self.cfg = cfg
        self.workers = workers
        self._batches = 0
        self._last_sample: Optional[np.ndarray] = None

    def sample(self) -> np.ndarray:
        """Collect one batch of cfg.num_samples draws."""
        cfg = replace(self.cfg, seed=self.cfg.seed + self._batches)
        draws = sample_lambda_max(cfg, self.workers)
        self._batches += 1
        self._last_sample = draws
        return draws

    def get_last_sample(self) -> Optional[np.ndarray]:
        """Return the last collected batch."""
        return self._last_sample


def empirical_cdf(draws: np.ndarray, t: float) -> Tuple[float, float]:
    """Fraction of draws <= t and its 3-sigma binomial half-width."""
    draws = np.asarray(draws)
    N = draws.size
    if N < MIN_DRAWS:
        raise RegimeError("draws", N, f"at least {MIN_DRAWS} draws")
    p = float(np.count_nonzero(draws <= t)) / N
    # keep the band nonzero when every draw falls on one side
    p_band = min(max(p, 1.0 / N), 1.0 - 1.0 / N)
    return p, 3.0 * math.sqrt(p_band * (1.0 - p_band) / N)


def ks_distance(
    draws: np.ndarray, n: int, t_grid: Iterable[float], m: int = DEFAULT_M
) -> float:
    """max over t_grid of |empirical CDF - cdf_fredholm(n, t)|."""
    return max(
        abs(empirical_cdf(draws, t)[0] - hermite_n.cdf_fredholm(n, t, m)) for t in t_grid
    )


def trace_square_mean(
    n: int, num_samples: int, seed: int = 0, chunk_size: int = 10_000
) -> Tuple[float, float]:
    """Sample mean of sum lambda_i^2 and its 3-sigma half-width; the exact mean is n^2/2."""
    cfg = SamplerConfig(n=n, num_samples=num_samples, seed=seed, chunk_size=chunk_size)
    sizes = _chunk_sizes(cfg)
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    totals = []
    for child, size in zip(children, sizes):
        diag, off = _tridiagonal_entries(np.random.default_rng(child), n, size)
        totals.append(np.sum(np.linalg.eigvalsh(_dense(diag, off)) ** 2, axis=1))
    values = np.concatenate(totals)
    return float(values.mean()), 3.0 * float(values.std(ddof=1)) / math.sqrt(values.size)
