"""Exception hierarchy shared by every module."""

from __future__ import annotations


class EclError(Exception):
    """Base class for all errors raised by the package."""


class ParseError(EclError, ValueError):
    """Malformed input text. ``pos`` is a character offset when known."""

    def __init__(self, message: str, pos: int | None = None):
        self.pos = pos
        if pos is not None:
            message = f"{message} (at offset {pos})"
        super().__init__(message)


class UnknownSymbolError(ParseError):
    pass


class ArityError(ParseError):
    pass


class SignatureError(EclError, ValueError):
    """A formula, structure or translation does not fit its signature."""


class ResourceLimitError(EclError):
    """A configured search cap was hit; the search was not truncated silently."""


class InvariantViolation(EclError, AssertionError):
    """An internal consistency check failed. Always indicates a bug."""
