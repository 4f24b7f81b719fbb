"""Exception hierarchy shared by every module."""


class RatioCutError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(RatioCutError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class GeometryError(RatioCutError):
    """A geometric construction failed (arc leaves the domain, open loop, ...)."""


class OrientationError(GeometryError):
    """A boundary loop is traversed clockwise where counter-clockwise is required."""


class OutOfRegimeError(DomainError):
    """Parameters violate the validity gate of the perturbative model."""


class ConvergenceError(RatioCutError):
    """An iterative solver stopped without meeting its tolerance."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SingularSystemError(RatioCutError):
    """A linear system that must be solved is singular or badly conditioned."""


class GraphError(RatioCutError):
    """Graph construction or partitioning failed (disconnected graph, no cut)."""
