"""Exception types shared across the package."""


class ZxError(Exception):
    """Base class for all package errors."""


class DanglingEdge(ZxError):
    pass


class PortReuse(ZxError):
    pass


class BadPhase(ZxError):
    pass


class ArityMismatch(ZxError):
    pass


class ParseError(ZxError):
    pass


class TooLarge(ZxError):
    pass


class UnknownEdge(ZxError):
    pass


class UnsupportedPhase(ZxError):
    pass


class InvalidWeb(ZxError):
    pass


class NotASubdiagram(ZxError):
    pass


class BoundaryMismatch(ZxError):
    pass


class NoMatch(ZxError):
    pass


class MultisetMismatch(ZxError):
    pass


class PreconditionFailed(ZxError):
    pass


class NotABasis(ZxError):
    pass


class NotStabilising(ZxError):
    pass


class SameItem(ZxError):
    pass


class BadPartition(ZxError):
    pass


class BadParams(ZxError):
    pass


class ChainConditionViolated(ZxError):
    pass


class DistanceTooSmall(ZxError):
    pass


class Unschedulable(ZxError):
    pass


class UnrecognizedPattern(ZxError):
    pass


class DanglingDetector(ZxError):
    pass


class NondeterministicDetector(ZxError):
    pass


class NotMatchable(ZxError):
    pass


class PreconditionAsserted(UserWarning):
    """Warning attached when a rewrite precondition was asserted, not verified."""
