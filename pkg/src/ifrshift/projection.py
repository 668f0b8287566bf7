"""Expected deaths from demographics, lethality rates and a vaccine age shift.

Vaccination is modelled as making people behave, for lethality purposes, as
if they were ``shift_years`` younger: the demographic table is shifted down,
clamped at zero, regrouped onto the lethality partition and multiplied cell
by cell with the rates.  All arithmetic is exact; rounding belongs to the
presentation layer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np

from .agebin import (
    AgeBin,
    BinnedCountTable,
    Partition,
    RebinMode,
    exact_array,
    expand_single_years,
    rebin,
    shift_and_clamp,
)
from .errors import (
    BothAttackRateAndR0,
    IfrShiftError,
    MixedPartitions,
    NonPositiveR0,
    RateOutOfRange,
    StraddlingBinInExactMode,
    ThresholdNotOnBinBoundary,
)
from .finalsize import attack_rate as final_size

DEFAULT_SHIFT_YEARS = 15


class LethalityTable:
    """Probability of death given infection, per age bin and sex."""

    __slots__ = ("partition", "rates")

    def __init__(self, partition: Partition, rates):
        arr = exact_array(rates)
        if arr.shape != (len(partition), 2):
            raise IfrShiftError(
                f"rates shape {arr.shape} does not match {len(partition)} bins x 2 sexes")
        for (i, j), r in np.ndenumerate(arr):
            if not 0 <= r <= 1:
                raise RateOutOfRange(
                    f"rate {float(r)} for bin {partition[i].label} is outside [0, 1]")
        arr.setflags(write=False)
        self.partition = partition
        self.rates = arr

    def as_float(self) -> np.ndarray:
        return self.rates.astype(np.float64)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LethalityTable):
            return NotImplemented
        return self.partition == other.partition and np.array_equal(self.rates, other.rates)


@dataclass(frozen=True)
class Scenario:
    """Parameters of one projection.

    The attack rate comes from ``explicit_attack_rate`` or, when ``r0`` is
    given, from the final-size equation.  With neither it defaults to 1,
    i.e. everyone is eventually infected.
    """

    name: str = "scenario"
    shift_years: int = DEFAULT_SHIFT_YEARS
    vaccinated_fraction: float = 1.0
    explicit_attack_rate: Optional[float] = None
    r0: Optional[float] = None
    demographics: Optional[str] = None
    lethality: Optional[str] = None

    def __post_init__(self):
        if int(self.shift_years) != self.shift_years or self.shift_years < 0:
            raise IfrShiftError(f"shift_years must be a non-negative integer, got {self.shift_years}")
        if not 0 <= self.vaccinated_fraction <= 1:
            raise IfrShiftError(f"vaccinated_fraction must be in [0, 1], got {self.vaccinated_fraction}")
        if self.explicit_attack_rate is not None and self.r0 is not None:
            raise BothAttackRateAndR0("give either attack_rate or r0, not both")
        if self.r0 is not None and not (0 < self.r0 < float("inf")):
            raise NonPositiveR0(f"r0 must be positive and finite, got {self.r0}")
        if self.explicit_attack_rate is not None and not 0 <= self.explicit_attack_rate <= 1:
            raise IfrShiftError(f"attack_rate must be in [0, 1], got {self.explicit_attack_rate}")

    @property
    def attack_rate(self) -> float:
        if self.r0 is not None:
            return final_size(self.r0)
        if self.explicit_attack_rate is not None:
            return float(self.explicit_attack_rate)
        return 1.0


@dataclass(frozen=True, eq=False)
class DeathTable:
    """Expected deaths on the lethality partition (adjusted-age coordinates).

    ``population`` is the exposed-population table the rates were applied
    to, before the attack rate: the vaccinated-fraction blend of the shifted
    and unshifted demographics.
    """

    deaths: BinnedCountTable
    population: BinnedCountTable
    scenario: Scenario

    @property
    def partition(self) -> Partition:
        return self.deaths.partition

    @property
    def expected_deaths(self) -> np.ndarray:
        return self.deaths.counts

    def sex_totals(self) -> np.ndarray:
        return self.deaths.sex_totals()

    def total(self) -> Fraction:
        return self.deaths.total()

    def reported_bins(self) -> List[AgeBin]:
        return reported_bins(self.partition, self.scenario.shift_years)


def reported_bins(partition: Partition, shift: int) -> List[AgeBin]:
    """Adjusted bins moved back up by ``shift``; the first still starts at 0."""
    out = []
    for i, b in enumerate(partition):
        lower = 0 if i == 0 else b.lower + shift
        out.append(AgeBin(lower, None if b.is_open else b.upper + shift))
    return out


def adjusted_population(demog: BinnedCountTable, shift: int, target: Partition) -> BinnedCountTable:
    """Shift ``demog`` down by ``shift`` years and regroup onto ``target``.

    Whole-bin shifting is used when every shifted bin nests in a target bin.
    Otherwise each bin is spread over single years first, so everyone clamped
    to age zero stays at zero instead of being smeared over the merged bin.
    """
    try:
        return rebin(shift_and_clamp(demog, shift), target, RebinMode.EXACT)
    except StraddlingBinInExactMode:
        pass
    single = expand_single_years(demog, max(demog.partition.open_lower, 1))
    return rebin(shift_and_clamp(single, shift), target, RebinMode.EXACT)


def project_deaths(demog: BinnedCountTable, leth: LethalityTable,
                   scenario: Scenario = Scenario()) -> DeathTable:
    """Expected deaths per lethality bin and sex.

    ``deaths = attack * (f * shifted * rate + (1 - f) * unshifted * rate)``
    where ``f`` is the vaccinated fraction.
    """
    frac = Fraction(scenario.vaccinated_fraction)
    attack = Fraction(scenario.attack_rate)
    target = leth.partition

    pop = np.full((len(target), 2), Fraction(0), dtype=object)
    if frac != 0:
        shifted = adjusted_population(demog, scenario.shift_years, target)
        pop = pop + frac * shifted.counts
    if frac != 1:
        unshifted = adjusted_population(demog, 0, target)
        pop = pop + (1 - frac) * unshifted.counts

    deaths = attack * pop * leth.rates
    return DeathTable(BinnedCountTable(target, deaths), BinnedCountTable(target, pop), scenario)


def waning_scenario(demog: BinnedCountTable, leth: LethalityTable) -> DeathTable:
    """Vaccine protection fully lost: no shift, everyone infected."""
    sc = Scenario(name="waning", shift_years=0, vaccinated_fraction=1.0, explicit_attack_rate=1.0)
    return project_deaths(demog, leth, sc)


@dataclass(frozen=True)
class Summary:
    total_deaths: float
    male_share: float
    share_at_or_above: Dict[int, float] = field(default_factory=dict)


def _share(part: Fraction, whole: Fraction) -> float:
    return float(part / whole) if whole else 0.0


def summarize(dt: DeathTable, thresholds: Sequence[int] = ()) -> Summary:
    """Totals plus death shares by sex and by reported age threshold.

    Thresholds refer to the reported (re-shifted) bin labels and must each
    equal one of their lower bounds.
    """
    lowers = [b.lower for b in dt.reported_bins()]
    per_bin = [sum(row, Fraction(0)) for row in dt.expected_deaths]
    total = dt.total()
    male = dt.sex_totals()[0]
    shares = {}
    for t in thresholds:
        if t not in lowers:
            raise ThresholdNotOnBinBoundary(
                f"threshold {t} is not a reported bin lower bound (have {lowers})")
        shares[t] = _share(sum((d for lo, d in zip(lowers, per_bin) if lo >= t), Fraction(0)), total)
    return Summary(float(total), _share(male, total), shares)


@dataclass(frozen=True)
class ComparisonTable:
    """Per-bin total deaths for several projections side by side.

    ``values`` has one row per lethality bin plus a final ``Total`` row and
    one column per projection; ``ratios`` divides each column by the first.
    """

    names: List[str]
    labels: List[str]
    values: np.ndarray
    male_shares: List[float]
    ratios: np.ndarray


def _ratio(x: Fraction, base: Fraction) -> float:
    if base == 0:
        return 1.0 if x == 0 else float("inf")
    return float(x / base)


def compare_scenarios(reports: Sequence[DeathTable]) -> ComparisonTable:
    if not reports:
        raise IfrShiftError("need at least one projection to compare")
    part = reports[0].partition
    for r in reports[1:]:
        if r.partition != part:
            raise MixedPartitions(
                f"projection {r.scenario.name!r} uses bins {r.partition.labels}, "
                f"expected {part.labels}")

    cols = []
    for r in reports:
        per_bin = [sum(row, Fraction(0)) for row in r.expected_deaths]
        cols.append(per_bin + [r.total()])
    values = np.array([[float(v) for v in col] for col in cols]).T
    ratios = np.array([[_ratio(v, b) for v, b in zip(col, cols[0])] for col in cols]).T
    male_shares = [_share(r.sex_totals()[0], r.total()) for r in reports]
    return ComparisonTable(
        names=[r.scenario.name for r in reports],
        labels=part.labels + ["Total"],
        values=values,
        male_shares=male_shares,
        ratios=ratios,
    )
