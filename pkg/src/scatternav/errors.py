"""Exception hierarchy shared across the engine.

Every error carries a machine-readable ``code`` (its class name) so the
service layer can surface module errors to clients without string matching.
"""

from __future__ import annotations


class ScatterNavError(Exception):
    """Base class for all engine errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


# --- data loading -----------------------------------------------------------

class DataError(ScatterNavError):
    pass


class MissingColumn(DataError):
    pass


class NonFiniteCoordinate(DataError):
    pass


class DuplicateId(DataError):
    pass


class RaggedFeatures(DataError):
    pass


class EmptyDataset(DataError):
    pass


class IoFailure(DataError):
    pass


# --- sampling / tree --------------------------------------------------------

class EmptyInput(ScatterNavError):
    pass


class NoRepresentatives(ScatterNavError):
    pass


class InvalidConfig(ScatterNavError):
    pass


# --- focus layout -----------------------------------------------------------

class LayoutError(ScatterNavError):
    pass


class NotAChild(LayoutError):
    pass


class AlreadyFocused(LayoutError):
    pass


class EmptyStack(LayoutError):
    pass


class NotComparing(LayoutError):
    pass


class OutOfRange(LayoutError):
    pass


# --- overlap removal --------------------------------------------------------

class TooManyMarkers(ScatterNavError):
    pass


# --- service ----------------------------------------------------------------

class UnknownDataset(ScatterNavError):
    pass


class UnknownSession(ScatterNavError):
    pass


class UnknownNode(ScatterNavError):
    pass


class NotALeaf(ScatterNavError):
    pass


class BuildFailure(ScatterNavError):
    pass
