"""
Data models for gueedge.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .config import DEFAULT_C, DEFAULT_M, DEFAULT_SEED, DEFAULT_T, GAUSS_MAX_M, TW_S_MIN
from .errors import RegimeError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadRule:
    """Gauss rule on the truncated interval [a, b] standing in for (a, inf)."""

    nodes: np.ndarray
    weights: np.ndarray
    a: float
    b: float

    @property
    def length(self) -> float:
        return self.b - self.a

    @property
    def size(self) -> int:
        return int(self.nodes.size)

    @property
    def sqrt_weights(self) -> np.ndarray:
        return np.sqrt(self.weights)

    def integrate(self, values: np.ndarray) -> float:
        """Quadrature sum of function values at the nodes."""
        return float(np.dot(self.weights, values))


@dataclass(frozen=True)
class KernelMatrix:
    """Symmetrized Nystrom matrix sqrt(w_i) K(x_i, x_j) sqrt(w_j)."""

    matrix: np.ndarray
    rule: QuadRule

    @property
    def size(self) -> int:
        return self.rule.size


@dataclass(frozen=True)
class ScalingMap:
    """Edge scaling tau(X) = sqrt(2(n+c)) + X 2^{-1/2} n^{-1/6}."""

    n: int
    c: float = DEFAULT_C

    def __post_init__(self) -> None:
        if self.n < 1:
            raise RegimeError("n", self.n, "n >= 1")
        if self.n + self.c <= 0:
            raise RegimeError("c", self.c, "n + c > 0")

    @property
    def center(self) -> float:
        return math.sqrt(2.0 * (self.n + self.c))

    @property
    def jacobian(self) -> float:
        """d tau / dX."""
        return 2.0 ** -0.5 * self.n ** (-1.0 / 6.0)

    def tau(self, X):
        value = self.center + np.asarray(X, dtype=float) * self.jacobian
        return float(value) if value.ndim == 0 else value

    def inverse(self, x):
        value = (np.asarray(x, dtype=float) - self.center) / self.jacobian
        return float(value) if value.ndim == 0 else value


@dataclass(frozen=True)
class ResolventSample:
    """Nystrom resolvent of the Airy kernel on (s, s+T).

    Q and P have shape (3, m): row i holds Q_i / P_i at the nodes.
    R holds R(X, Y; s) at node pairs.
    """

    s: float
    rule: QuadRule
    R: np.ndarray
    Q: np.ndarray
    P: np.ndarray
    lu: Tuple[np.ndarray, np.ndarray] = field(repr=False)
    residual: float = 0.0


@dataclass(frozen=True)
class AiryFunctionals:
    """q_i, p_i, u_i, v_i, vt_i, w_i for i = 0, 1, 2 at left endpoint s."""

    s: float
    q: np.ndarray
    p: np.ndarray
    u: np.ndarray
    v: np.ndarray
    vt: np.ndarray
    w: np.ndarray

    def as_dict(self) -> Dict[str, float]:
        out: Dict[str, float] = {"s": self.s}
        for name in ("q", "p", "u", "v", "vt", "w"):
            for i, value in enumerate(getattr(self, name)):
                out[f"{name}{i}"] = float(value)
        return out

    def max_abs(self) -> float:
        return float(
            max(np.max(np.abs(getattr(self, name))) for name in ("q", "p", "u", "v", "vt", "w"))
        )


@dataclass(frozen=True)
class HMGrid:
    """Hastings-McLeod solution sampled on an increasing grid.

    u and I are carried by the same collocation solve: u' = -q^2 and
    I' = -u, with I(s) = int_s^inf (x - s) q(x)^2 dx.
    """

    abscissae: np.ndarray
    q: np.ndarray
    qprime: np.ndarray
    u: np.ndarray
    I: np.ndarray
    residual: float
    solution: Any = field(default=None, repr=False, compare=False)

    @property
    def s_min(self) -> float:
        return float(self.abscissae[0])

    @property
    def s_max(self) -> float:
        return float(self.abscissae[-1])


@dataclass(frozen=True)
class HMAux:
    """u, v, p derived from an HMGrid, on the same abscissae."""

    abscissae: np.ndarray
    u: np.ndarray
    v: np.ndarray
    p: np.ndarray


@dataclass(frozen=True)
class FiniteNState:
    """Discretized Hermite kernel on (t, b) with its resolvent solves.

    Qn/Pn solve (I - K_n) Q = phi~, (I - K_n) P = psi~ for the
    (n/2)^{1/4}-weighted oscillator functions.
    """

    n: int
    c: float
    t: float
    rule: QuadRule
    K: KernelMatrix
    Qn: np.ndarray
    Pn: np.ndarray
    qn: float
    pn: float
    det: float
    lu: Tuple[np.ndarray, np.ndarray] = field(repr=False)
    residual: float = 0.0


@dataclass(frozen=True)
class EdgeworthTerms:
    """Pieces of the Edgeworth-corrected CDF at (s, c)."""

    s: float
    c: float
    f2: float
    term1: float
    term2_closed: float
    term2_integral: float

    def assembled(self, n: int, order: int = 2, integral: bool = False) -> float:
        """
        F_2(s){1 + term1 n^{-1/3} + term2 n^{-2/3}} truncated at order.

        Values above 1 are logged and returned unclamped.
        """
        factor = 1.0
        if order >= 1:
            factor += self.term1 * n ** (-1.0 / 3.0)
        if order >= 2:
            factor += (self.term2_integral if integral else self.term2_closed) * n ** (-2.0 / 3.0)
        value = self.f2 * factor
        if value > 1.0:
            logger.warning(
                "order-%d approximation %.6e exceeds 1 at n=%d, s=%g, c=%g",
                order,
                value,
                n,
                self.s,
                self.c,
            )
        return value


@dataclass
class SlopeFit:
    """Log-log least-squares fit of residual against n."""

    label: str
    n_values: List[int]
    residuals: List[float]
    slope: float
    intercept: float
    degenerate: bool = False

    def within(self, expected: float, tolerance: float) -> bool:
        return not self.degenerate and abs(self.slope - expected) <= tolerance


@dataclass
class ExpansionReport:
    """Sup-norm residuals of a large-n comparator per order."""

    name: str
    n_values: List[int]
    residuals: Dict[int, List[float]]
    fits: Dict[int, SlopeFit] = field(default_factory=dict)


@dataclass
class AdjudicationReport:
    """Outcome of bracket_integral versus -ec2 under both E_{c,2} readings."""

    s_values: List[float]
    c: float
    gap_printed: List[float]
    gap_tilde: List[float]
    tolerance: float

    @property
    def printed_passes(self) -> bool:
        return max(self.gap_printed) <= self.tolerance

    @property
    def tilde_passes(self) -> bool:
        return max(self.gap_tilde) <= self.tolerance

    @property
    def winner(self) -> Optional[str]:
        """The single passing reading, or None when neither or both pass."""
        if self.printed_passes != self.tilde_passes:
            return "printed" if self.printed_passes else "tilde"
        return None


@dataclass(frozen=True)
class SamplerConfig:
    """Monte Carlo configuration; the draw stream is fixed by (seed, n, num_samples)."""

    n: int
    num_samples: int
    seed: int = DEFAULT_SEED
    scaling: str = "raw"
    c: float = DEFAULT_C
    chunk_size: int = 10_000

    def __post_init__(self) -> None:
        if self.n < 1:
            raise RegimeError("n", self.n, "n >= 1")
        if self.num_samples < 1:
            raise RegimeError("num_samples", self.num_samples, "num_samples >= 1")
        if self.scaling not in ("raw", "centered"):
            raise RegimeError("scaling", self.scaling, "scaling in {raw, centered}")
        if self.chunk_size < 1:
            raise RegimeError("chunk_size", self.chunk_size, "chunk_size >= 1")


@dataclass
class CheckResult:
    """One row of the verification report."""

    name: str
    measured: float
    tolerance: float
    passed: bool
    detail: str = ""

    def as_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "measured": self.measured,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "detail": self.detail,
        }


COMMANDS = ("tw-table", "edgeworth", "verify", "mc")


@dataclass
class RunConfig:
    """Validated CLI configuration."""

    command: str
    s_grid: List[float] = field(default_factory=list)
    t_grid: List[float] = field(default_factory=list)
    n_list: List[int] = field(default_factory=list)
    c: float = DEFAULT_C
    m: int = DEFAULT_M
    T: float = DEFAULT_T
    seed: int = DEFAULT_SEED
    num_samples: int = 100_000
    output_format: str = "csv"
    output_path: Optional[str] = None
    checks: List[str] = field(default_factory=list)
    tolerance: Optional[float] = None
    workers: int = 1

    def provenance(self) -> Dict[str, Any]:
        """Defaults and overrides recorded in every output header."""
        return {
            "command": self.command,
            "m": self.m,
            "T": self.T,
            "c": self.c,
            "seed": self.seed,
            "num_samples": self.num_samples,
        }

    def validate(self) -> "RunConfig":
        """Check every numeric flag before any computation; raises RegimeError."""
        if self.command not in COMMANDS:
            raise RegimeError("command", self.command, f"command in {COMMANDS}")
        if self.command in ("tw-table", "edgeworth") and not self.s_grid:
            raise RegimeError("s_grid", self.s_grid, "a non-empty s grid")
        if self.command in ("edgeworth", "mc") and not self.n_list:
            raise RegimeError("n_list", self.n_list, "a non-empty n list")
        for s in self.s_grid:
            if not math.isfinite(s) or s < TW_S_MIN:
                raise RegimeError("s", s, f"s >= {TW_S_MIN}")
        for t in self.t_grid:
            if not math.isfinite(t):
                raise RegimeError("t", t, "finite t")
        for n in self.n_list:
            if n < 1:
                raise RegimeError("n", n, "n >= 1")
            if n + self.c <= 0:
                raise RegimeError("c", self.c, f"n + c > 0 for n = {n}")
        if not 1 <= self.m <= GAUSS_MAX_M:
            raise RegimeError("m", self.m, f"1 <= m <= {GAUSS_MAX_M}")
        if not self.T > 0:
            raise RegimeError("T", self.T, "T > 0")
        if self.command == "mc" and self.num_samples < 100:
            raise RegimeError("num_samples", self.num_samples, "num_samples >= 100")
        if self.output_format not in ("csv", "json"):
            raise RegimeError("format", self.output_format, "csv or json")
        if self.tolerance is not None and not self.tolerance > 0:
            raise RegimeError("tolerance", self.tolerance, "tolerance > 0")
        if self.workers < 1:
            raise RegimeError("workers", self.workers, "workers >= 1")
        return self
