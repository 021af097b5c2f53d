"""Seeded synthetic contributor populations.

Random draws use NumPy's ``PCG64`` bit generator seeded through
``numpy.random.SeedSequence(seed)``, and normal variates come from
``Generator.standard_normal`` (NumPy's ziggurat sampler). Both are part of
NumPy's stream-compatibility policy, so a given seed yields the same table
on every platform.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from tdndiv.errors import InvalidSpec
from tdndiv.freqtable import FULL, FrequencyTable, SubsampleSpec
from tdndiv.metrics import MetricSuite, suite

__all__ = ["Model", "PopulationSpec", "apportion", "generate", "richness_sweep"]


class Model(str, enum.Enum):
    UNIFORM = "uniform"
    GEOMETRIC = "geometric"
    ZIPF = "zipf"
    LOGNORMAL = "lognormal"


@dataclass(frozen=True)
class PopulationSpec:
    """Abundance model, richness, total contributions and seed.

    ``param`` is the geometric ratio k in (0, 1), the Zipf exponent s > 0
    or the lognormal sigma > 0; it is ignored for the uniform model. If
    ``individuals`` is smaller than ``richness`` only ``individuals``
    contributors are generated.
    """

    model: Model
    richness: int
    individuals: int
    param: float | None = None
    seed: int = 0

    def __post_init__(self):
        try:
            object.__setattr__(self, "model", Model(self.model))
        except ValueError:
            raise InvalidSpec(f"unknown model {self.model!r}") from None
        self.validate()

    def validate(self) -> None:
        if self.richness < 1:
            raise InvalidSpec(f"richness must be >= 1, got {self.richness}")
        if self.individuals < 1:
            raise InvalidSpec(f"individuals must be >= 1, got {self.individuals}")
        if not 0 <= self.seed < 2**64:
            raise InvalidSpec(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.model is Model.UNIFORM:
            return
        p = self.param
        if p is None or not math.isfinite(p):
            raise InvalidSpec(f"model {self.model.value} needs a finite param")
        if self.model is Model.GEOMETRIC and not 0 < p < 1:
            raise InvalidSpec(f"geometric ratio must lie in (0, 1), got {p}")
        if self.model in (Model.ZIPF, Model.LOGNORMAL) and p <= 0:
            raise InvalidSpec(f"{self.model.value} param must be > 0, got {p}")

    @property
    def effective_richness(self) -> int:
        return min(self.richness, self.individuals)


def _log_weights(spec: PopulationSpec, r: int) -> np.ndarray:
    rank = np.arange(1, r + 1, dtype=np.float64)
    if spec.model is Model.UNIFORM:
        return np.zeros(r)
    if spec.model is Model.GEOMETRIC:
        return (rank - 1) * math.log(spec.param)
    if spec.model is Model.ZIPF:
        return -spec.param * np.log(rank)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(spec.seed)))
    return spec.param * rng.standard_normal(r)


def _largest_remainder(weights: np.ndarray, seats: int) -> np.ndarray:
    quotas = weights * (seats / weights.sum())
    alloc = np.floor(quotas).astype(np.int64)
    left = seats - int(alloc.sum())
    if left > 0:
        # stable sort: equal remainders go to the lower index first
        order = np.argsort(-(quotas - alloc), kind="stable")
        alloc[order[:left]] += 1
    elif left < 0:
        # float rounding overshot; take seats back from the smallest remainders
        order = np.argsort(quotas - alloc, kind="stable")
        order = order[alloc[order] > 0]
        alloc[order[:-left]] -= 1
    return alloc


def apportion(weights: Sequence[float], individuals: int) -> np.ndarray:
    """Split ``individuals`` over contributors in proportion to ``weights``.

    Largest-remainder (Hamilton) apportionment with every contributor
    floored at one: contributors whose quota rounds to zero are pinned at
    one and the remaining individuals are re-apportioned among the rest.
    """
    w = np.asarray(weights, dtype=np.float64)
    r = w.size
    if individuals < r:
        raise InvalidSpec(f"cannot give {r} contributors at least one of {individuals} individuals")
    counts = np.ones(r, dtype=np.int64)
    free = np.arange(r)
    seats = individuals
    while free.size:
        alloc = _largest_remainder(w[free], seats)
        zero = alloc == 0
        if not zero.any():
            counts[free] = alloc
            break
        seats -= int(zero.sum())
        free = free[~zero]
    return counts


def generate(spec: PopulationSpec) -> FrequencyTable:
    """Deterministic synthetic table for ``spec``.

    Contributor ``i`` (1-based) is named ``c`` followed by ``i`` zero-padded
    to a common width, so id order matches the model's rank order.
    """
    r = spec.effective_richness
    logw = _log_weights(spec, r)
    weights = np.exp(logw - logw.max())
    counts = apportion(weights, spec.individuals)
    width = len(str(r))
    return FrequencyTable({f"c{i:0{width}d}": int(c) for i, c in enumerate(counts, start=1)})


def richness_sweep(
    model: Union[Model, str],
    param: float | None,
    individuals: Union[int, Callable[[int], int]],
    richnesses: Iterable[int],
    seeds: Iterable[int] = (0,),
    fractions: Sequence[SubsampleSpec] = (FULL,),
) -> list[tuple[int, MetricSuite]]:
    """Generate one table per (R, seed) and evaluate its metric suite.

    ``individuals`` is either a fixed N or a function of R, e.g.
    ``lambda r: 20 * r`` for a constant contributions-per-contributor
    ratio. One row is produced per requested fraction, keyed by the
    richness of the evaluated subpopulation.
    """
    richnesses = list(richnesses)
    if not richnesses:
        raise InvalidSpec("richness list is empty")
    seeds = list(seeds)
    rows = []
    for r in richnesses:
        n = individuals(r) if callable(individuals) else individuals
        for seed in seeds:
            table = generate(PopulationSpec(model, r, n, param, seed))
            for frac in fractions:
                rows.append((frac.size(table.richness), suite(table, frac)))
    return rows
