"""Positioned diagnostics and the exceptions that carry them."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    line: int
    column: int
    message: str
    code: str = ""

    def format(self, filename: str = "<input>") -> str:
        text = f"{filename}:{self.line}:{self.column}: {self.severity.value}: {self.message}"
        if self.code:
            text += f" [{self.code}]"
        return text

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR


def error(line: int, column: int, message: str, code: str = "") -> Diagnostic:
    return Diagnostic(Severity.ERROR, line, column, message, code)


def warning(line: int, column: int, message: str, code: str = "") -> Diagnostic:
    return Diagnostic(Severity.WARNING, line, column, message, code)


class DiagnosticError(Exception):
    """Raised by a front-end phase that produced at least one error."""

    def __init__(self, diagnostics: Iterable[Diagnostic]):
        self.diagnostics = list(diagnostics)
        first = next((d for d in self.diagnostics if d.is_error), None)
        super().__init__(first.format() if first else "diagnostics reported")

    @property
    def codes(self) -> list[str]:
        return [d.code for d in self.diagnostics if d.is_error]


class ParseError(DiagnosticError):
    pass


class ResolveError(DiagnosticError):
    pass


class ValidationError(DiagnosticError):
    pass
