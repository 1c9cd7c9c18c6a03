"""Exception hierarchy shared by all modules."""


class ZeroCenterError(Exception):
    """Base class for every error raised by the package."""


class InvalidInput(ZeroCenterError, ValueError):
    pass


class NumericFailure(ZeroCenterError):
    """A numerical routine could not produce a trustworthy answer."""


class CapExceeded(ZeroCenterError):
    pass


# algebra / parsing
class CoefficientParseError(InvalidInput):
    pass


# numerics
class NonConvergence(NumericFailure):
    pass


class OnDiscriminant(NumericFailure):
    pass


class LeadingCoefficientVanishes(NumericFailure):
    pass


class PathTooCloseToSigma(NumericFailure):
    pass


class CollisionDetected(NumericFailure):
    pass


# monodromy
class DegenerateConfiguration(NumericFailure):
    pass


class InfinityRelationViolated(NumericFailure):
    pass


class ClosureCapExceeded(CapExceeded):
    pass


class UnexpectedPrimitive(ZeroCenterError):
    pass


class GroupMismatch(NumericFailure):
    pass


# cycles
class WeightsDoNotSumToZero(InvalidInput):
    pass


class LengthMismatch(InvalidInput):
    pass


class SizeMismatch(InvalidInput):
    pass


class AmbiguousClustering(NumericFailure):
    pass


class NonGenericSample(AmbiguousClustering):
    """Class count under a projection differs from deg F / deg h."""


# center
class IdentityViolated(NumericFailure):
    pass


class CriticalFiber(NumericFailure):
    pass


class IllConditioned(NumericFailure):
    pass


class Inconclusive(NumericFailure):
    """A numeric quantity fell in the dead band between vanish and nonvanish."""


class InconsistentVerdict(NumericFailure):
    pass
