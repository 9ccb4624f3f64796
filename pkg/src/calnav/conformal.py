"""Conformal quantile machinery.

Nonconformity scores are scalars (possibly +inf). The marginal rule takes the
ceil((N+1)(1-eps))-th order statistic; the dataset-conditional rule first
tightens the level to eps_hat so that the Beta-distributed conditional
coverage of the resulting order statistic is at least 1-eps with probability
1-delta over the draw of the calibration set.

The regularized incomplete beta function and its inverse are implemented
here (continued fraction plus bisection with a Newton polish) so the
quantile correction has no dependency beyond the standard library.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence


def minimal_parameter(
    predicate: Callable[[float], bool],
    bracket: tuple[float, float],
    tol: float,
) -> float:
    """Smallest theta (within tol) where a monotone predicate turns true.

    Returns the bracket floor when the predicate already holds there and
    +inf when it fails even at the ceiling. Non-monotone predicates yield
    unspecified results; that contract is the caller's to keep.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    lo, hi = float(bracket[0]), float(bracket[1])
    if lo >= hi:
        raise ValueError("bracket must satisfy lo < hi")
    if predicate(lo):
        return lo
    if not predicate(hi):
        return math.inf
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if predicate(mid):
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class ScoreSample:
    """One per-environment nonconformity score."""

    env_id: str
    score: float  # signed meters, +inf allowed


@dataclass(frozen=True)
class CalibrationConfig:
    epsilon: float
    delta: float = 0.01
    mode: str = "dataset_conditional"  # or "marginal"

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must be in (0, 1)")
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must be in (0, 1)")
        if self.mode not in ("marginal", "dataset_conditional"):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass(frozen=True)
class CalibrationResult:
    q_hat: float
    epsilon: float
    epsilon_hat: float
    v: int
    n_samples: int
    achieved_beta: float


def _sorted_scores(scores: Sequence[ScoreSample]) -> list[float]:
    # Ties broken by env_id for cross-platform determinism.
    return [s.score for s in sorted(scores, key=lambda s: (s.score, s.env_id))]


def empirical_quantile(scores: Sequence[ScoreSample], level: float) -> float:
    """Order statistic U_(ceil((N+1)*level)); +inf when the rank exceeds N."""
    if not scores:
        raise ValueError("empty score list")
    if not 0.0 < level < 1.0:
        raise ValueError("level must be in (0, 1)")
    n = len(scores)
    # Nudge guards the ceil against float roundoff when (n+1)*level is an
    # exact integer (e.g. 10*0.8 evaluating to 8.000000000000002).
    rank = math.ceil((n + 1) * level - 1e-9)
    if rank > n:
        return math.inf
    return _sorted_scores(scores)[rank - 1]


# ---------------------------------------------------------------------------
# Regularized incomplete beta I_x(a, b) and its inverse.

_MAX_CF_ITER = 300
_CF_EPS = 1e-15
_TINY = 1e-300


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_CF_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise ArithmeticError(f"incomplete beta CF failed to converge for a={a}, b={b}, x={x}")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def beta_inv_cdf(a: float, b: float, p: float) -> float:
    """x with I_x(a, b) = p, to absolute tolerance 1e-10 or better.

    Bisection guarantees the tolerance; a few Newton steps polish the root.
    """
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if not 0.0 < p < 1.0:
        raise ValueError("p must be in (0, 1)")
    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if regularized_incomplete_beta(a, b, mid) < p:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    ln_norm = math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
    for _ in range(3):
        if x <= 0.0 or x >= 1.0:
            break
        f = regularized_incomplete_beta(a, b, x) - p
        ln_pdf = ln_norm + (a - 1.0) * math.log(x) + (b - 1.0) * math.log1p(-x)
        pdf = math.exp(ln_pdf)
        if pdf <= 0.0 or not math.isfinite(pdf):
            break
        step = f / pdf
        x_new = x - step
        if not lo < x_new < hi:
            break
        x = x_new
    return x


def dataset_conditional_level(
    n: int, epsilon: float, delta: float
) -> tuple[float, int, float]:
    """(eps_hat, v, achieved_beta) for the dataset-conditional guarantee.

    Scans integer v = floor((n+1)*eps_hat) from the least conservative side
    and keeps the largest v whose Beta(n+1-v, v) delta-quantile is at least
    1-epsilon. v = 0 (q_hat = +inf, coverage 1) when no v qualifies.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    for v in range(n, 0, -1):
        achieved = beta_inv_cdf(n + 1 - v, v, delta)
        if achieved >= 1.0 - epsilon:
            return v / (n + 1), v, achieved
    return 0.0, 0, 1.0


def calibrate(scores: Sequence[ScoreSample], config: CalibrationConfig) -> CalibrationResult:
    """Quantile of the scores at the configured level, with bookkeeping.

    q_hat is reported as computed, including negative values; callers that
    apply it as a physical inflation clamp at zero themselves.
    """
    if not scores:
        raise ValueError("empty score list")
    n = len(scores)
    if config.mode == "marginal":
        eps_hat = config.epsilon
        v = math.floor((n + 1) * eps_hat)
        achieved = beta_inv_cdf(n + 1 - v, v, config.delta) if v >= 1 else 1.0
    else:
        eps_hat, v, achieved = dataset_conditional_level(n, config.epsilon, config.delta)
    if v < 1:
        q_hat = math.inf
    else:
        q_hat = empirical_quantile(scores, 1.0 - eps_hat)
    return CalibrationResult(
        q_hat=q_hat,
        epsilon=config.epsilon,
        epsilon_hat=eps_hat,
        v=v,
        n_samples=n,
        achieved_beta=achieved,
    )
