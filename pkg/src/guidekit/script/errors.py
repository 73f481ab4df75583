"""Errors raised while parsing or running callback scripts.

All carry a 1-based source position so spec files can surface the exact
offending spot to their author.
"""

from __future__ import annotations


class ScriptError(Exception):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(message)
        self.message = message
        self.line = line
        self.col = col

    def __str__(self) -> str:
        if self.line:
            return f"{self.message} (line {self.line}, col {self.col})"
        return self.message


class ScriptSyntaxError(ScriptError):
    """Parse failure: where it happened, what was seen, what would have fit."""

    def __init__(self, message: str, line: int, col: int, token: str, expected: str):
        super().__init__(message, line, col)
        self.token = token
        self.expected = expected

    def __str__(self) -> str:
        return (
            f"{self.message} at line {self.line}, col {self.col}: "
            f"got {self.token!r}, expected {self.expected}"
        )


class ScriptRuntimeError(ScriptError):
    """Evaluation failure: unknown name, type mismatch, bad index, zero division..."""


class BudgetExceeded(ScriptError):
    """The script ran more statements than its env allows."""
