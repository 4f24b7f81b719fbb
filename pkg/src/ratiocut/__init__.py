"""Ratio cuts of nearly rectangular planar domains."""

from .errors import (
    ConvergenceError,
    DomainError,
    GeometryError,
    GraphError,
    OrientationError,
    OutOfRegimeError,
    RatioCutError,
    SingularSystemError,
)
from .geometry import CutParams, DomainParams

__version__ = "0.1.0"
