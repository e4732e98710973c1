"""
sinrgraph/errors.py
===================
Exception hierarchy. Everything subclasses ValueError so callers that only
care about bad input can keep catching that.
"""


class SinrGraphError(ValueError):
    """Base class for all library errors."""


class InvalidInstanceError(SinrGraphError):
    """A link, instance or power assignment violates its invariants."""


class ParameterRangeError(SinrGraphError):
    """A model parameter (alpha, delta, tau, gamma, ...) is out of range."""


class ConflictGraphError(SinrGraphError):
    """Unknown vertex ids or malformed graph input."""


class RateControlError(SinrGraphError):
    """Utility specs are missing, empty, or not monotone."""


class McmaError(SinrGraphError):
    """Missing node capabilities or dangling virtual links."""


class SchemaError(SinrGraphError):
    """A JSON document failed schema validation."""

    def __init__(self, message: str, errors: dict | list | None = None):
        super().__init__(message)
        self.errors = errors or {}


class InvariantViolation(SinrGraphError):
    """A produced solution failed its own re-verification."""
