"""Diversity and evenness indices over contributor frequency tables.

All logarithms are natural. Sums go through :func:`math.fsum`, which
returns the correctly rounded sum, so results do not depend on the order
of contributors.

Shannon H', Pielou J' and Simpson lambda accept an optional ``total``: the
denominator used to turn counts into proportions. It defaults to the
table's own N; passing the parent network's N evaluates a top-fraction
subpopulation with the shares it holds in the full network. Brillouin H,
McIntosh evenness and E_var are defined on raw counts and take no total.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

from tdndiv.errors import EmptyTable, UndefinedForSingleton
from tdndiv.freqtable import FULL, FrequencyTable, SubsampleSpec, top_fraction

__all__ = [
    "MetricSuite",
    "shannon_h",
    "shannon_j",
    "brillouin_h",
    "simpson_lambda",
    "mcintosh_e",
    "e_var",
    "e_var_from_abundances",
    "suite",
]


def _denominator(t: FrequencyTable, total: int | None) -> int:
    if total is None:
        return t.total
    if total < t.total:
        raise ValueError(f"proportion total {total} is smaller than the table total {t.total}")
    return total


def shannon_h(t: FrequencyTable, total: int | None = None) -> float:
    r"""Shannon-Weaver entropy :math:`H' = -\sum_j p_j \ln p_j` in nats.

    Parameters
    ----------
    t : FrequencyTable
        Contributor counts.
    total : int, optional
        Proportion denominator. Defaults to ``t.total``.

    Returns
    -------
    float
        Non-negative entropy; equals ``ln R`` for a uniform table.
    """
    n = _denominator(t, total)
    h = -math.fsum((c / n) * math.log(c / n) for c in t.values())
    # a single contributor with p = 1 gives -0.0
    return h if h > 0 else 0.0


def shannon_j(t: FrequencyTable, total: int | None = None) -> float:
    """Pielou evenness, H' / ln R.

    Raises :class:`UndefinedForSingleton` when R = 1. Bounded by 1 when the
    proportions sum to one; a truncated subpopulation can exceed it.
    """
    if t.richness < 2:
        raise UndefinedForSingleton("Shannon evenness needs at least two contributors")
    return shannon_h(t, total) / math.log(t.richness)


def brillouin_h(t: FrequencyTable) -> float:
    """Brillouin diversity, (ln N! - sum_j ln t_j!) / N, via log-gamma."""
    n = t.total
    h = (math.lgamma(n + 1) - math.fsum(math.lgamma(c + 1) for c in t.values())) / n
    return h if h > 0 else 0.0


def simpson_lambda(t: FrequencyTable, total: int | None = None) -> float:
    """Simpson dominance, sum_j p_j**2, on the [0, 1] share scale.

    This is the Herfindahl-Hirschman index for shares expressed as
    fractions. The numerator is an exact integer, so the result is the
    correctly rounded value of the rational ``sum t_j**2 / total**2``.
    """
    n = _denominator(t, total)
    return sum(c * c for c in t.values()) / (n * n)


def mcintosh_e(t: FrequencyTable) -> float:
    """McIntosh evenness, (N - sqrt(sum t_j**2)) / (N - N / sqrt(R))."""
    r = t.richness
    if r < 2:
        raise UndefinedForSingleton("McIntosh evenness needs at least two contributors")
    n = t.total
    u = math.sqrt(sum(c * c for c in t.values()))
    return (n - u) / (n - n / math.sqrt(r))


def e_var_from_abundances(values: Iterable[Union[int, Fraction]]) -> float:
    """Smith-Wilson E_var from positive abundances (counts or exact shares).

    Logs are taken of each abundance divided by the largest one. Because
    rational division rounds once, counts, integer multiples of the counts
    and exact-fraction proportions all produce the same floats, and so the
    same E_var bit for bit.
    """
    values = list(values)
    if not values:
        raise EmptyTable("E_var of an empty abundance vector")
    if any(v <= 0 for v in values):
        raise ValueError("abundances must be positive")
    top = max(values)
    logs = [math.log(_ratio(v, top)) for v in values]
    r = len(logs)
    mean = math.fsum(logs) / r
    var = math.fsum((x - mean) ** 2 for x in logs) / r
    return 1.0 - (2.0 / math.pi) * math.atan(var)


def _ratio(a, b) -> float:
    if isinstance(a, Fraction) or isinstance(b, Fraction):
        return float(Fraction(a) / Fraction(b))
    return a / b


def e_var(t: FrequencyTable) -> float:
    """Smith-Wilson E_var: 1 - (2/pi) * arctan(variance of ln p_j).

    Equals 1 exactly when all counts are equal and lies in (0, 1].
    """
    return e_var_from_abundances(t.values())


@dataclass(frozen=True)
class MetricSuite:
    """Every index for one (table, subsample) pair.

    ``shannon_j`` and ``mcintosh_e`` are ``None`` for a single contributor.
    ``simpson_lambda`` is kept on the [0, 1] scale; multiply by 1e4 for the
    percent-share HHI convention.
    """

    shannon_h: float
    shannon_j: Optional[float]
    brillouin_h: float
    simpson_lambda: float
    mcintosh_e: Optional[float]
    e_var: float

    @property
    def simpson_lambda_e4(self) -> float:
        return self.simpson_lambda * 1e4

    def as_dict(self) -> dict:
        return asdict(self)


def suite(t: FrequencyTable, spec: SubsampleSpec = FULL) -> MetricSuite:
    """Apply :func:`~tdndiv.freqtable.top_fraction` and evaluate every index."""
    sub = top_fraction(t, spec)
    kept, total = sub.table, sub.total
    single = kept.richness < 2
    return MetricSuite(
        shannon_h=shannon_h(kept, total),
        shannon_j=None if single else shannon_j(kept, total),
        brillouin_h=brillouin_h(kept),
        simpson_lambda=simpson_lambda(kept, total),
        mcintosh_e=None if single else mcintosh_e(kept),
        e_var=e_var(kept),
    )
