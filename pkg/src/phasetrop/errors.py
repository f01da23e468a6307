"""Shared exception types."""

from __future__ import annotations


class ParseError(ValueError):
    """Syntax error with a 1-based source position."""

    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"{message} (line {line}, col {col})")
        self.message = message
        self.line = line
        self.col = col


class NonConvergenceError(RuntimeError):
    """An iterative computation hit its cap; carries any partial result."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class RamifiedRootError(ValueError):
    """The residue root is multiple; lifting such roots is out of scope."""


class InternalInvariantError(RuntimeError):
    """A mathematically impossible state was reached; signals a bug."""
