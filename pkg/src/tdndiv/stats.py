"""Pearson correlation with Fisher-z intervals and two-tailed t tests."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from statistics import NormalDist
from typing import Sequence

from scipy.special import betainc

from tdndiv.errors import DegenerateCorrelation, DegenerateSeries, InsufficientN, LengthMismatch

__all__ = [
    "CorrelationResult",
    "pearson_r",
    "fisher_ci",
    "r_p_value",
    "correlate_metric_vs_richness",
]

# |r| this close to 1 is a perfect fit up to rounding; atanh and the t statistic blow up
_DEGENERATE_EPS = 1e-12


@dataclass(frozen=True)
class CorrelationResult:
    r: float
    n: int
    ci_low: float
    ci_high: float
    p_value: float

    def as_dict(self) -> dict:
        return asdict(self)


def pearson_r(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Product-moment correlation from mean-centred, compensated sums."""
    if len(xs) != len(ys):
        raise LengthMismatch(f"series lengths differ: {len(xs)} != {len(ys)}")
    n = len(xs)
    if n < 3:
        raise InsufficientN(f"need at least 3 pairs, got {n}")
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    dx = [x - mx for x in xs]
    dy = [y - my for y in ys]
    sxx = math.fsum(d * d for d in dx)
    syy = math.fsum(d * d for d in dy)
    if sxx == 0 or syy == 0:
        raise DegenerateSeries("one of the series is constant")
    sxy = math.fsum(a * b for a, b in zip(dx, dy))
    r = sxy / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def _check_r(r: float) -> None:
    if not -1.0 <= r <= 1.0 or math.isnan(r):
        raise ValueError(f"correlation out of range: {r}")
    if 1.0 - abs(r) < _DEGENERATE_EPS:
        raise DegenerateCorrelation(f"|r| = {abs(r)} leaves no sampling variability")


def fisher_ci(r: float, n: int, level: float = 0.95) -> tuple[float, float]:
    """Confidence interval for r by the Fisher z-transform.

    ``atanh(r) -/+ z_crit / sqrt(n - 3)``, mapped back with ``tanh``.
    """
    _check_r(r)
    if n < 4:
        raise InsufficientN(f"Fisher interval needs n >= 4, got {n}")
    if not 0 < level < 1:
        raise ValueError(f"confidence level must lie in (0, 1), got {level}")
    z_crit = NormalDist().inv_cdf(0.5 + level / 2)
    z = math.atanh(r)
    half = z_crit / math.sqrt(n - 3)
    return math.tanh(z - half), math.tanh(z + half)


def r_p_value(r: float, n: int) -> float:
    """Two-tailed p-value of H0: rho = 0, Student t with n - 2 df.

    With ``t = r * sqrt(df / (1 - r**2))`` the two-tailed tail mass is the
    regularized incomplete beta ``I_{df/(df+t^2)}(df/2, 1/2)``, which
    simplifies to ``I_{1-r^2}(df/2, 1/2)``.
    """
    _check_r(r)
    if n < 3:
        raise InsufficientN(f"p-value needs n >= 3, got {n}")
    df = n - 2
    p = float(betainc(df / 2.0, 0.5, 1.0 - r * r))
    return min(1.0, max(0.0, p))


def correlate_metric_vs_richness(rows: Sequence[tuple[float, float]]) -> CorrelationResult:
    """Correlate a metric against richness over ``(R, value)`` rows."""
    rows = list(rows)
    if len(rows) < 4:
        raise InsufficientN(f"need at least 4 observations, got {len(rows)}")
    xs = [float(x) for x, _ in rows]
    ys = [float(y) for _, y in rows]
    r = pearson_r(xs, ys)
    lo, hi = fisher_ci(r, len(rows))
    return CorrelationResult(r=r, n=len(rows), ci_low=lo, ci_high=hi, p_value=r_p_value(r, len(rows)))
