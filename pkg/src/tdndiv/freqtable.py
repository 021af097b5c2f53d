"""Contributor frequency tables.

A topical discussion network is modelled purely as the number of
contributions made by each contributor. Contributors play the role of
species, contributions the role of individuals.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

from tdndiv.errors import DuplicateId, EmptyTable, InvalidCount

__all__ = [
    "FrequencyTable",
    "Mode",
    "SubsampleSpec",
    "Subsample",
    "TableSummary",
    "from_counts",
    "merge",
    "merge_all",
    "top_fraction",
    "summary",
]


def _check_count(cid, count) -> None:
    # bool is an int subclass; True must not pass for 1
    if isinstance(count, bool) or not isinstance(count, int):
        raise InvalidCount(f"count for {cid!r} is not an integer: {count!r}")
    if count < 1:
        raise InvalidCount(f"count for {cid!r} must be >= 1, got {count}")


class FrequencyTable:
    """Immutable map from contributor id to contribution count.

    Contributors are stored in ascending id order, so iteration and
    serialisation do not depend on the order in which counts arrived.
    Use :func:`from_counts` to build a table from ``(id, count)`` pairs.
    """

    __slots__ = ("_counts", "_total", "_ranked")

    def __init__(self, counts: Mapping[str, int]):
        if not counts:
            raise EmptyTable("a frequency table needs at least one contributor")
        for cid, count in counts.items():
            if not isinstance(cid, str):
                raise TypeError(f"contributor ids must be str, got {type(cid).__name__}")
            _check_count(cid, count)
        self._counts = {cid: counts[cid] for cid in sorted(counts)}
        self._total = sum(self._counts.values())
        self._ranked = None

    @property
    def counts(self) -> Mapping[str, int]:
        return MappingProxyType(self._counts)

    @property
    def total(self) -> int:
        """Number of contributions, N."""
        return self._total

    @property
    def richness(self) -> int:
        """Number of distinct contributors, R."""
        return len(self._counts)

    def values(self) -> list[int]:
        return list(self._counts.values())

    def items(self):
        return self._counts.items()

    def proportions(self, total: int | None = None) -> dict[str, float]:
        """Share of contributions per contributor, ``t_j / total``.

        ``total`` defaults to this table's own N. Passing a larger parent
        total gives the shares a subpopulation holds in the full network.
        """
        n = self._total if total is None else total
        return {cid: t / n for cid, t in self._counts.items()}

    def ranked(self) -> tuple[tuple[str, int], ...]:
        """Contributors by descending count, ties broken by ascending id."""
        if self._ranked is None:
            self._ranked = tuple(sorted(self._counts.items(), key=lambda kv: (-kv[1], kv[0])))
        return self._ranked

    def __len__(self) -> int:
        return len(self._counts)

    def __iter__(self) -> Iterator[str]:
        return iter(self._counts)

    def __contains__(self, cid) -> bool:
        return cid in self._counts

    def __getitem__(self, cid: str) -> int:
        return self._counts[cid]

    def __eq__(self, other) -> bool:
        if not isinstance(other, FrequencyTable):
            return NotImplemented
        return self._counts == other._counts

    def __hash__(self) -> int:
        return hash(frozenset(self._counts.items()))

    def __repr__(self) -> str:
        head = ", ".join(f"{cid!r}: {t}" for cid, t in list(self._counts.items())[:5])
        more = ", ..." if len(self._counts) > 5 else ""
        return f"FrequencyTable({{{head}{more}}}, N={self._total}, R={self.richness})"


def from_counts(pairs: Iterable[tuple[str, int]] | Mapping[str, int]) -> FrequencyTable:
    """Build a table from ``(contributor_id, count)`` pairs or a mapping.

    Raises
    ------
    EmptyTable
        If ``pairs`` is empty.
    InvalidCount
        If any count is not a positive integer.
    DuplicateId
        If a contributor id occurs more than once.
    """
    if isinstance(pairs, Mapping):
        pairs = pairs.items()
    counts: dict[str, int] = {}
    for cid, count in pairs:
        if cid in counts:
            raise DuplicateId(f"duplicate contributor id {cid!r}")
        _check_count(cid, count)
        counts[cid] = count
    return FrequencyTable(counts)


def merge(t1: FrequencyTable, t2: FrequencyTable) -> FrequencyTable:
    """Add two tables key-wise. Commutative and associative."""
    counts = dict(t1.items())
    for cid, t in t2.items():
        counts[cid] = counts.get(cid, 0) + t
    return FrequencyTable(counts)


def merge_all(tables: Iterable[FrequencyTable]) -> FrequencyTable:
    tables = list(tables)
    if not tables:
        raise EmptyTable("nothing to merge")
    if len(tables) == 1:
        return tables[0]
    counts: dict[str, int] = {}
    for table in tables:
        for cid, t in table.items():
            counts[cid] = counts.get(cid, 0) + t
    return FrequencyTable(counts)


class Mode(str, enum.Enum):
    """How a subpopulation's proportions are computed.

    ``TRUNCATED`` keeps the parent table's total as the denominator, so the
    retained shares sum to less than one. ``RENORMALIZED`` divides by the
    subpopulation's own total.
    """

    TRUNCATED = "truncated"
    RENORMALIZED = "renormalized"


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        # repr gives the shortest decimal that round-trips: 0.2 -> 1/5, not 0.2000000000000000111
        return Fraction(repr(value))
    return Fraction(value)


@dataclass(frozen=True)
class SubsampleSpec:
    """Share of top contributors to keep, and how to compute their proportions."""

    fraction: Fraction = Fraction(1)
    mode: Mode = Mode.TRUNCATED

    def __post_init__(self):
        frac = _as_fraction(self.fraction)
        if not 0 < frac <= 1:
            raise ValueError(f"fraction must lie in (0, 1], got {self.fraction}")
        object.__setattr__(self, "fraction", frac)
        object.__setattr__(self, "mode", Mode(self.mode))

    def size(self, richness: int) -> int:
        """Contributors retained out of ``richness``: ceil(fraction * R), at least 1."""
        return max(1, math.ceil(self.fraction * richness))


FULL = SubsampleSpec()


@dataclass(frozen=True)
class Subsample:
    """A top-fraction subpopulation together with its proportion denominator."""

    table: FrequencyTable
    total: int
    spec: SubsampleSpec = field(default=FULL)

    @property
    def richness(self) -> int:
        return self.table.richness

    def proportions(self) -> dict[str, float]:
        return self.table.proportions(self.total)


def top_fraction(t: FrequencyTable, spec: SubsampleSpec = FULL) -> Subsample:
    """Keep the top ``ceil(fraction * R)`` contributors by count.

    Ties at the cut are broken by ascending contributor id, so every
    retained count is at least every excluded count. In truncated mode the
    parent's total travels with the result as the proportion denominator.

    >>> t = from_counts([("a", 5), ("b", 5), ("c", 5), ("d", 5), ("e", 5)])
    >>> sub = top_fraction(t, SubsampleSpec("0.2"))
    >>> dict(sub.table.items()), sub.total
    ({'a': 5}, 25)
    """
    k = spec.size(t.richness)
    if k >= t.richness:
        return Subsample(t, t.total, spec)
    kept = FrequencyTable(dict(t.ranked()[:k]))
    total = t.total if spec.mode is Mode.TRUNCATED else kept.total
    return Subsample(kept, total, spec)


@dataclass(frozen=True)
class TableSummary:
    total: int
    richness: int
    mean_proportion: float
    sd_proportion: float


def summary(t: FrequencyTable) -> TableSummary:
    """N, R and the mean and population standard deviation of the shares."""
    r = t.richness
    n = t.total
    mean = 1 / r
    # deviations computed exactly: t/N - 1/R = (R*t - N) / (N*R)
    sq = math.fsum(((r * c - n) / (n * r)) ** 2 for c in t.values())
    return TableSummary(total=n, richness=r, mean_proportion=mean, sd_proportion=math.sqrt(sq / r))
