"""Shared exception types."""


class CoxtileError(Exception):
    """Base class for all library errors."""


class ValidationError(CoxtileError):
    """Malformed input data (matrix, palette, config)."""


class SizeLimitError(CoxtileError):
    """Enumeration exceeded the configured element cap."""

    def __init__(self, message, partial_count=None):
        super().__init__(message)
        self.partial_count = partial_count


class OutOfBallError(CoxtileError):
    """An element lies outside the enumerated ball."""


class WindowError(CoxtileError):
    """A scan window is invalid or exceeds the available data."""


class InconclusiveError(CoxtileError):
    """A verdict cannot be settled at the current radius."""


class StructureError(CoxtileError):
    """A structural invariant failed (e.g. a cycle in a wall tree)."""


class GeometryError(CoxtileError):
    """A geometric construction is impossible or degenerate."""
