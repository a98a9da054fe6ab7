"""Exception types raised by the packing pipeline."""
from __future__ import annotations


class PolypackError(Exception):
    """Base class for all package errors."""


class NonConvexInput(PolypackError):
    """Input polygon has a reflex vertex beyond tolerance."""


class DegenerateInput(PolypackError):
    """Input is geometrically degenerate (zero area, coincident points, ...)."""


class SweepStall(PolypackError):
    """The parallelogram sweep could not locate the next event."""

    def __init__(self, message: str, state=None):
        super().__init__(message)
        self.state = state


class PivotalConfiguration(PolypackError):
    """Configuration sits at a breakpoint of the piecewise-linear sweep."""


class ExceptionalConfiguration(PolypackError):
    """Configuration matches one of the degenerate vertex-incidence patterns."""

    def __init__(self, pattern: str):
        super().__init__(f"exceptional configuration: {pattern}")
        self.pattern = pattern


class VertexCoincidence(PolypackError):
    """A parallelogram vertex coincides with a polygon vertex."""

    def __init__(self, label: int):
        super().__init__(f"labeled point p{label} lies on a polygon vertex")
        self.label = label


class RankDeficiencyUnexpected(PolypackError):
    """Constraint Jacobian rank below 8; contact geometry is degenerate."""


class GradientNotInRowSpace(PolypackError):
    """Objective gradient has a component along the constraint null space."""
