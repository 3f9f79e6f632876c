from __future__ import annotations

from typing import Any


class RainbowError(ValueError):
    """Base class for every error raised by the rainbow services."""


class InputFormatError(RainbowError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None) -> None:
        self.line = line
        self.column = column
        location = ""
        if line is not None:
            location = f"line {line}"
            if column is not None:
                location += f", column {column}"
            location += ": "
        super().__init__(f"{location}{message}")


class InvalidParameterError(RainbowError):
    pass


class NotRainbowRegularError(RainbowError):
    def __init__(self, message: str, verdict: Any = None) -> None:
        self.verdict = verdict
        super().__init__(message)


class VerificationError(RainbowError):
    """An internal cross-check disagreed; always points at a bug."""
