"""Exception hierarchy.

Every error raised for bad input derives from :class:`IfrShiftError`, which
the CLI maps to exit status 1.
"""


class IfrShiftError(ValueError):
    """Base class for all validation and computation errors in this package."""


# Partition structure

class InvalidPartition(IfrShiftError):
    pass


class GapBetweenBins(InvalidPartition):
    pass


class OverlappingBins(InvalidPartition):
    pass


class FirstBinNotZero(InvalidPartition):
    pass


class OpenBinNotLast(InvalidPartition):
    pass


class NoOpenBin(InvalidPartition):
    pass


class InvalidBin(InvalidPartition):
    pass


# Rebinning

class PartitionMismatch(IfrShiftError):
    """Counts cannot be carried from one partition onto another."""


class StraddlingBinInExactMode(PartitionMismatch):
    pass


class OpenBinStraddlesFiniteTarget(PartitionMismatch):
    pass


class MaxAgeInsideFiniteBin(IfrShiftError):
    pass


# Final size

class NonPositiveR0(IfrShiftError):
    pass


# Projection and summaries

class ThresholdNotOnBinBoundary(IfrShiftError):
    pass


class MixedPartitions(IfrShiftError):
    pass


# File ingestion

class MissingFile(IfrShiftError):
    pass


class MalformedHeader(IfrShiftError):
    pass


class MalformedRow(IfrShiftError):
    pass


class NonIntegerCount(IfrShiftError):
    pass


class RateOutOfRange(IfrShiftError):
    pass


class MalformedScenario(IfrShiftError):
    pass


class BothAttackRateAndR0(MalformedScenario):
    pass


class NeitherAttackRateNorR0(MalformedScenario):
    pass
