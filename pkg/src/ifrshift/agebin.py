"""Integer age-bin algebra.

Bins are inclusive integer ranges (``0-4`` covers ages 0, 1, 2, 3 and 4); the
last bin of a partition is open-ended (``80+``).  Counts are exact rationals,
so proportional splitting, shifting and regrouping all conserve totals exactly.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import (
    FirstBinNotZero,
    GapBetweenBins,
    IfrShiftError,
    InvalidBin,
    MaxAgeInsideFiniteBin,
    NoOpenBin,
    OpenBinNotLast,
    OpenBinStraddlesFiniteTarget,
    OverlappingBins,
    StraddlingBinInExactMode,
)

SEXES = ("male", "female")

_LABEL_RE = re.compile(r"^\s*(\d+)\s*(?:-\s*(\d+)|(\+))\s*$")


@dataclass(frozen=True, order=True)
class AgeBin:
    lower: int
    upper: Optional[int] = None  # None means open-ended

    def __post_init__(self):
        # plain ints only: numpy integers would overflow inside Fraction arithmetic
        object.__setattr__(self, "lower", int(self.lower))
        if self.upper is not None:
            object.__setattr__(self, "upper", int(self.upper))
        if self.lower < 0:
            raise InvalidBin(f"bin lower bound {self.lower} is negative")
        if self.upper is not None and self.upper < self.lower:
            raise InvalidBin(f"bin {self.lower}-{self.upper} has upper < lower")

    @property
    def is_open(self) -> bool:
        return self.upper is None

    @property
    def width(self) -> Optional[int]:
        """Number of single-year ages covered, or None for the open bin."""
        if self.upper is None:
            return None
        return self.upper - self.lower + 1

    @property
    def label(self) -> str:
        if self.upper is None:
            return f"{self.lower}+"
        return f"{self.lower}-{self.upper}"

    @classmethod
    def parse(cls, text: str) -> "AgeBin":
        """Parse ``"15-19"``, ``"80+"`` or ``"60 +"``."""
        m = _LABEL_RE.match(text)
        if m is None:
            raise InvalidBin(f"cannot parse age bin label {text!r}")
        lower = int(m.group(1))
        upper = None if m.group(3) else int(m.group(2))
        return cls(lower, upper)

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class Partition:
    """Contiguous bins starting at age 0 and ending in one open bin."""

    bins: tuple

    def __post_init__(self):
        object.__setattr__(self, "bins", tuple(self.bins))
        _check_partition(self.bins)

    @classmethod
    def from_labels(cls, labels: Iterable[str]) -> "Partition":
        return cls(tuple(AgeBin.parse(s) for s in labels))

    @classmethod
    def from_lowers(cls, lowers: Sequence[int]) -> "Partition":
        """Build from ascending lower bounds; the last bin is open."""
        lowers = list(lowers)
        bins = [AgeBin(lo, hi - 1) for lo, hi in zip(lowers[:-1], lowers[1:])]
        bins.append(AgeBin(lowers[-1]))
        return cls(tuple(bins))

    def __len__(self) -> int:
        return len(self.bins)

    def __iter__(self) -> Iterator[AgeBin]:
        return iter(self.bins)

    def __getitem__(self, i) -> AgeBin:
        return self.bins[i]

    @property
    def lowers(self) -> tuple:
        return tuple(b.lower for b in self.bins)

    @property
    def open_lower(self) -> int:
        return self.bins[-1].lower

    @property
    def labels(self) -> list:
        return [b.label for b in self.bins]

    def index_of_age(self, age: int) -> int:
        """Index of the bin containing ``age``."""
        return int(np.searchsorted(self.lowers, age, side="right")) - 1


def _check_partition(bins: Sequence[AgeBin]) -> None:
    if not bins:
        raise NoOpenBin("partition has no bins")
    if bins[0].lower != 0:
        raise FirstBinNotZero(f"first bin {bins[0].label} does not start at age 0")
    for i, b in enumerate(bins):
        if b.is_open and i != len(bins) - 1:
            raise OpenBinNotLast(f"open bin {b.label} is followed by {bins[i + 1].label}")
        if i == 0:
            continue
        prev = bins[i - 1]
        if b.lower > prev.upper + 1:
            raise GapBetweenBins(
                f"gap between {prev.label} and {b.label}: "
                f"ages {prev.upper + 1}-{b.lower - 1} uncovered")
        if b.lower <= prev.upper:
            raise OverlappingBins(f"bins {prev.label} and {b.label} overlap")
    if not bins[-1].is_open:
        raise NoOpenBin(f"last bin {bins[-1].label} is not open-ended")


def validate_partition(bins: Iterable[AgeBin]) -> Partition:
    """Return a :class:`Partition`, raising on the first structural violation."""
    return Partition(tuple(bins))


def exact_array(values) -> np.ndarray:
    """Object array of :class:`~fractions.Fraction` from ints, floats, Decimals or Fractions."""
    arr = np.asarray(values, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    flat = out.reshape(-1)
    for k, v in enumerate(arr.reshape(-1)):
        if isinstance(v, np.integer):
            v = int(v)
        elif isinstance(v, np.floating):
            v = float(v)
        if isinstance(v, float) and not math.isfinite(v):
            raise IfrShiftError(f"non-finite value {v!r}")
        flat[k] = Fraction(v)
    return out


class BinnedCountTable:
    """Non-negative counts per age bin (rows) and sex (columns male, female).

    Counts are exact rationals so that splitting a bin and summing it back
    returns the original value bit for bit; :meth:`as_float` gives a float64
    view for plotting and printing.
    """

    __slots__ = ("partition", "counts")

    def __init__(self, partition: Partition, counts):
        arr = exact_array(counts)
        if arr.shape != (len(partition), len(SEXES)):
            raise IfrShiftError(
                f"counts shape {arr.shape} does not match "
                f"{len(partition)} bins x {len(SEXES)} sexes")
        if any(v < 0 for v in arr.flat):
            raise IfrShiftError("counts must be non-negative")
        arr.setflags(write=False)
        self.partition = partition
        self.counts = arr

    @property
    def male(self) -> np.ndarray:
        return self.counts[:, 0]

    @property
    def female(self) -> np.ndarray:
        return self.counts[:, 1]

    def sex_totals(self) -> np.ndarray:
        return np.array([sum(col, Fraction(0)) for col in self.counts.T], dtype=object)

    def total(self) -> Fraction:
        return sum(self.counts.flat, Fraction(0))

    def as_float(self) -> np.ndarray:
        return self.counts.astype(np.float64)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinnedCountTable):
            return NotImplemented
        return self.partition == other.partition and np.array_equal(self.counts, other.counts)

    def __repr__(self) -> str:
        return f"BinnedCountTable({len(self.partition)} bins, total={float(self.total()):g})"


def shift_and_clamp(table: BinnedCountTable, shift: int) -> BinnedCountTable:
    """Subtract ``shift`` years from every bin boundary, clamping at zero.

    Bins whose shifted lower bound clamps to zero collapse into a single bin
    ``[0, max shifted upper]``.  The open bin stays open.
    """
    if shift < 0:
        raise IfrShiftError(f"shift must be >= 0, got {shift}")
    if shift == 0:
        return table

    bins = table.partition.bins
    n_merged = sum(1 for b in bins if b.lower - shift <= 0)
    head = bins[:n_merged]
    if head[-1].is_open:
        first = AgeBin(0)
    else:
        first = AgeBin(0, max(head[-1].upper - shift, 0))
    rest = [AgeBin(b.lower - shift, None if b.is_open else b.upper - shift)
            for b in bins[n_merged:]]

    merged = [sum(col, Fraction(0)) for col in table.counts[:n_merged].T]
    counts = np.vstack([np.array([merged], dtype=object), table.counts[n_merged:]])
    return BinnedCountTable(Partition(tuple([first] + rest)), counts)


class RebinMode(Enum):
    EXACT = "exact"
    UNIFORM_SPLIT = "uniform_split"


def transfer_matrix(source: Partition, target: Partition,
                    mode: RebinMode = RebinMode.EXACT) -> np.ndarray:
    """Weights ``W[i, j]``: share of source bin ``i`` assigned to target bin ``j``.

    Each row sums to one.  In EXACT mode every row holds a single 1.
    """
    w = np.full((len(source), len(target)), Fraction(0), dtype=object)
    t_open = target.open_lower
    for i, b in enumerate(source):
        if b.is_open:
            if b.lower < t_open:
                raise OpenBinStraddlesFiniteTarget(
                    f"open source bin {b.label} starts below open target bin {target[-1].label}")
            w[i, -1] = Fraction(1)
            continue
        j_lo = target.index_of_age(b.lower)
        j_hi = target.index_of_age(b.upper)
        if j_lo == j_hi:
            w[i, j_lo] = Fraction(1)
            continue
        if mode is RebinMode.EXACT:
            raise StraddlingBinInExactMode(
                f"source bin {b.label} straddles target bins "
                f"{target[j_lo].label} and {target[j_hi].label}")
        for j in range(j_lo, j_hi + 1):
            t = target[j]
            hi = b.upper if t.is_open else min(b.upper, t.upper)
            w[i, j] = Fraction(hi - max(b.lower, t.lower) + 1, b.width)
    return w


def rebin(table: BinnedCountTable, target: Partition,
          mode: RebinMode = RebinMode.EXACT) -> BinnedCountTable:
    """Reallocate counts onto ``target``.

    EXACT only aggregates whole source bins.  UNIFORM_SPLIT additionally
    splits a straddling finite bin in proportion to the single-year ages on
    each side of the target boundary.
    """
    if table.partition == target:
        return table
    w = transfer_matrix(table.partition, target, mode)
    return BinnedCountTable(target, w.T @ table.counts)


def expand_single_years(table: BinnedCountTable, max_age: int) -> BinnedCountTable:
    """Spread each finite bin evenly over its single-year ages.

    The result has bins ``0, 1, ..., max_age - 1`` and the open bin
    ``max_age+``.  If ``max_age`` is below the source open bin it must sit on
    a bin boundary; finite bins from there on are lumped into the open bin.
    """
    src = table.partition
    if max_age < 1:
        raise MaxAgeInsideFiniteBin(f"max_age must be >= 1, got {max_age}")
    out = np.full((max_age + 1, len(SEXES)), Fraction(0), dtype=object)
    for b, row in zip(src, table.counts):
        if b.is_open or b.lower >= max_age:
            out[max_age] += row
        elif b.upper >= max_age:
            raise MaxAgeInsideFiniteBin(f"max_age {max_age} falls inside bin {b.label}")
        else:
            out[b.lower:b.upper + 1] += row / b.width
    return BinnedCountTable(Partition.from_lowers(range(max_age + 1)), out)


def is_coarsening(fine: Partition, coarse: Partition) -> bool:
    """True iff every bin of ``coarse`` is a union of consecutive ``fine`` bins."""
    return set(coarse.lowers) <= set(fine.lowers)
