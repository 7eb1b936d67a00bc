"""
Exception hierarchy for riesz-lab.

Every decision procedure and construction raises a subclass of LabError when
its precondition fails, so callers (and the CLI) can tell input problems apart
from a negative verdict.
"""

from typing import Any, Optional, Tuple


class LabError(Exception):
    """Base class for all riesz-lab errors."""


class SchemaError(LabError):
    """
    Raised when a JSON input or catalog keyword cannot be decoded.

    Args:
        message: What went wrong
        location: JSON-path style location of the offending value
    """

    def __init__(self, message: str, location: str = "$"):
        super().__init__(f"{location}: {message}")
        self.location = location


class PointOutsideSpaceError(LabError):
    def __init__(self, point: Any):
        super().__init__(f"Point {point} lies in no component of the space")
        self.point = point


class SpaceMismatchError(LabError):
    def __init__(self, message: str = "Operands live on different spaces"):
        super().__init__(message)


class EmptyRegionError(LabError):
    pass


class NotOpenError(LabError):
    pass


class NotClosedError(LabError):
    pass


class NotRegularOpenError(LabError):
    pass


class CompactNotInsideOpenError(LabError):
    """The compact set K is not contained in the open set U."""


class CompactNotInsideSupportError(LabError):
    """The compact set K is not contained in the support of the ideal."""


class PreconditionViolatedError(LabError):
    pass


class NotInSublatticeError(LabError):
    pass


class NotProjectionBandError(LabError):
    pass


class NotOrderDenseError(LabError):
    pass


class RegionsIntersectError(LabError):
    pass


class CoverViolatedError(LabError):
    pass


class NoWitnessRegionError(LabError):
    pass


class InvalidSequenceRuleError(LabError):
    pass


class FamilyNotInIdealError(LabError):
    pass


class UnsupportedIdealShapeError(LabError):
    pass


class NotAPartialOrderError(LabError):
    def __init__(self, message: str, witness: Optional[Tuple[int, ...]] = None):
        super().__init__(message)
        self.witness = witness


class NotALatticeError(LabError):
    def __init__(self, pair: Optional[Tuple[int, int]], kind: str):
        if pair is None:
            super().__init__(f"Poset has no {kind}")
        else:
            super().__init__(f"Elements {pair[0]} and {pair[1]} have no {kind}")
        self.pair = pair
        self.kind = kind


class NotDistributiveError(LabError):
    def __init__(self, triple: Tuple[int, int, int]):
        super().__init__(f"Lattice is not distributive, witness triple {triple}")
        self.triple = triple


class SizeLimitError(LabError):
    pass
