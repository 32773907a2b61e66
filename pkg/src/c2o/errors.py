"""Diagnostics and the exception hierarchy shared by every compiler stage."""

from __future__ import annotations

import os
from dataclasses import dataclass


@dataclass(frozen=True)
class Span:
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


NO_SPAN = Span(0, 0)


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    message: str
    span: Span = NO_SPAN
    severity: str = "error"

    def render(self, filename: str = "<input>") -> str:
        text = f"{filename}:{self.span}: {self.severity}: {self.kind}: {self.message}"
        if _color_enabled():
            code = "31" if self.severity == "error" else "33"
            text = f"\x1b[{code}m{text}\x1b[0m"
        return text


def _color_enabled() -> bool:
    return os.environ.get("C2O_COLOR", "").lower() in {"1", "always", "yes", "true"}


class C2OError(Exception):
    """Base class for all user-facing errors."""

    kind = "Error"

    def __init__(self, message: str, span: Span = NO_SPAN):
        super().__init__(message)
        self.message = message
        self.span = span

    @property
    def diagnostic(self) -> Diagnostic:
        return Diagnostic(self.kind, self.message, self.span)

    def __str__(self) -> str:
        if self.span == NO_SPAN:
            return f"{self.kind}: {self.message}"
        return f"{self.span}: {self.kind}: {self.message}"


class LexError(C2OError):
    kind = "LexError"


class ParseError(C2OError):
    kind = "ParseError"


class ResolveError(C2OError):
    kind = "UnresolvedIdentifier"


class TypeMismatch(C2OError):
    kind = "TypeMismatch"


class WellFormednessError(C2OError):
    """Raised with every temporal diagnostic collected for a contract."""

    kind = "WellFormedness"

    def __init__(self, diagnostics: list[Diagnostic]):
        first = diagnostics[0]
        super().__init__("; ".join(f"{d.kind} at {d.span}" for d in diagnostics), first.span)
        self.diagnostics = diagnostics


class RecursiveNodeError(C2OError):
    kind = "RecursiveNode"

    def __init__(self, cycle: list[str]):
        super().__init__("recursive node cycle: " + " -> ".join(cycle))
        self.cycle = cycle


class CombinationalCycle(C2OError):
    kind = "CombinationalCycle"

    def __init__(self, names: list[str]):
        super().__init__("same-step dependency cycle: " + ", ".join(names))
        self.names = names


class ConstantOverflow(C2OError):
    kind = "ConstantOverflow"


class ConfigError(C2OError):
    kind = "ConfigError"


class OSLParseError(C2OError):
    kind = "OSLParseError"


class DivisionByZero(C2OError):
    """Runtime trap raised by the step interpreter."""

    kind = "DivisionByZero"

    def __init__(self, step: int, where: str):
        super().__init__(f"division by zero at step {step} in {where}")
        self.step = step
        self.where = where


class BottomObserved(C2OError):
    """The reference evaluator saw an undefined `pre` value reach a verdict."""

    kind = "BottomObserved"


class InterfaceMismatch(C2OError):
    kind = "InterfaceMismatch"

    def __init__(self, details: list[str]):
        super().__init__("; ".join(details))
        self.details = details


class BindingError(C2OError):
    kind = "BindingError"
