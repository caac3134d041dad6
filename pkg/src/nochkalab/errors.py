"""Exception hierarchy.

Validation problems (bad input, points on divisors, caps exceeded) derive from
:class:`ValidationError`; the CLI maps them to exit code 1.  A failed exact
self-check is an :class:`InternalCheckError` and maps to exit code 2.
"""

from __future__ import annotations


class NochkaLabError(Exception):
    """Base class for all library errors."""


class ValidationError(NochkaLabError, ValueError):
    """Input does not satisfy a documented precondition."""


class ConfigSyntaxError(ValidationError):
    """Malformed polynomial or configuration text."""

    def __init__(self, message: str, position: int | None = None, source: str | None = None):
        self.position = position
        self.source = source
        if position is not None:
            message = f"{message} (at position {position})"
            if source is not None:
                message += f"\n  {source}\n  {' ' * position}^"
        super().__init__(message)


class PointOnDivisorError(ValidationError):
    """A local height was requested at a point lying on the divisor."""


class FactorizationLimitError(ValidationError):
    """An integer that must be factored exceeds the configured size cap."""


class NodeLimitError(ValidationError):
    """Intersection lattice construction would exceed the node cap."""


class InternalCheckError(NochkaLabError, AssertionError):
    """An exact identity or inequality that must hold was violated."""
