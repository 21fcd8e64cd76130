"""Exception types shared by every module."""

from __future__ import annotations


class ConnsiteError(Exception):
    """Base class for all errors raised by connsite."""


class MalformedInputError(ConnsiteError, ValueError):
    """Input does not describe a well-formed object (bad mask, unknown label, bad file)."""


class InvalidStructureError(MalformedInputError):
    """A family of sets fails the connectivity-structure axioms."""

    def __init__(self, report):
        self.report = report
        super().__init__("not a connectivity structure: " + "; ".join(report.describe()))


class NotConnectedError(ConnsiteError, ValueError):
    """A set that must be connected is not a member of the structure."""


class DomainError(ConnsiteError, ValueError):
    """Arguments are individually well-formed but outside an operation's domain."""


class EnumerationCapError(ConnsiteError):
    """An enumeration would produce more than ``cap`` results."""

    def __init__(self, cap: int, partial_count: int, what: str = "items", where: str | None = None):
        self.cap = cap
        self.partial_count = partial_count
        self.what = what
        self.where = where
        msg = f"more than {cap} {what}"
        if where is not None:
            msg += f" on {where}"
        msg += f" (stopped after {partial_count})"
        super().__init__(msg)
