"""Diagnostics and exceptions shared by every module."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Diagnostic:
    """One violated law instance, named by kind plus the offending data."""

    kind: str
    detail: tuple = ()
    message: str = ""

    def __str__(self) -> str:
        args = ", ".join(repr(d) for d in self.detail)
        text = f"{self.kind}({args})"
        return f"{text}: {self.message}" if self.message else text

    def to_json(self) -> dict:
        from famcat.ids import to_jsonable

        return {"kind": self.kind, "detail": to_jsonable(list(self.detail)), "message": self.message}


class FamcatError(Exception):
    """Base class for all library errors."""


class ValidationError(FamcatError):
    """Raised when input data violates structural laws; carries every violation found."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        head = "; ".join(str(d) for d in self.diagnostics[:5])
        more = f" (+{len(self.diagnostics) - 5} more)" if len(self.diagnostics) > 5 else ""
        super().__init__(head + more)

    @property
    def kinds(self) -> set[str]:
        return {d.kind for d in self.diagnostics}


@dataclass
class DecisionFailure(FamcatError):
    """A decision procedure answered "no"; ``kind`` names the reason and ``witness`` the evidence."""

    kind: str
    witness: Any = None
    message: str = ""
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        super().__init__(f"{self.kind}({self.witness!r}) {self.message}".strip())


class BoundExceeded(FamcatError):
    """An input or search exceeded a configured size bound."""


class CapExceeded(FamcatError):
    """An operation on a truncated structure left the represented fragment."""
