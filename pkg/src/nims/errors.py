"""Error types shared across the package."""

from __future__ import annotations


class NimsError(Exception):
    """Base class for all package errors."""


class InvalidInput(NimsError):
    """Malformed argument: wrong shape, empty input, mismatched lengths."""


class InvalidSequence(NimsError):
    """Sequence fails the completeness-capability check required by the operation."""


class OutOfRange(NimsError):
    """Requested target lies outside what the sequence can express."""


class RangeError(NimsError):
    """Computation would exceed a configured size cap."""


class Infeasible(NimsError):
    """No design satisfies the given constraints."""


class DegenerateTarget(NimsError):
    """Nonzero voltage requested but the expressed multiple is zero."""


class ParseError(NimsError):
    """Device or config document could not be parsed.

    Carries an optional row/field location for CSV sources.
    """

    def __init__(self, message: str, row: int | None = None, field: str | None = None):
        loc = []
        if row is not None:
            loc.append(f"row {row}")
        if field is not None:
            loc.append(f"field {field!r}")
        if loc:
            message = f"{', '.join(loc)}: {message}"
        super().__init__(message)
        self.row = row
        self.field = field
