"""Exception types raised by growthlab operations."""


class GrowthLabError(Exception):
    """Base class for all growthlab errors."""


class NonPositiveEntry(GrowthLabError):
    pass


class DimensionTooSmall(GrowthLabError):
    pass


class DimensionMismatch(GrowthLabError):
    pass


class PartitionCoarserThanPath(GrowthLabError):
    pass


class KernelProducedInvalidPoint(GrowthLabError):
    pass


class NonFiniteState(GrowthLabError):
    pass


class NegativeWeight(GrowthLabError):
    pass


class RejectionBudgetExceeded(GrowthLabError):
    pass


class NonPositiveReturn(GrowthLabError):
    pass


class MissingQV(GrowthLabError):
    pass


class MissingSpec(GrowthLabError):
    pass


class CertificationFailed(GrowthLabError):
    pass


class DegenerateSamples(GrowthLabError):
    pass


class NonFiniteLambda(GrowthLabError):
    pass


class NonFiniteIntegrand(GrowthLabError):
    pass


class NoAtomInBall(GrowthLabError):
    pass


class ParseError(GrowthLabError):
    pass


class NonPositivePrice(GrowthLabError):
    pass


class TooFewAssets(GrowthLabError):
    pass
