"""Exception hierarchy shared by every tdndiv module."""

from __future__ import annotations


class TdnError(Exception):
    """Base class for all errors raised by tdndiv."""


class EmptyTable(TdnError, ValueError):
    pass


class _RowError(TdnError, ValueError):
    def __init__(self, message: str, row: int | None = None):
        self.message = message
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)

    def __reduce__(self):
        return type(self), (self.message, self.row)


class InvalidCount(_RowError):
    pass


class DuplicateId(_RowError):
    pass


class UndefinedForSingleton(TdnError, ValueError):
    """Raised by indices whose denominator vanishes when only one contributor exists."""


class LengthMismatch(TdnError, ValueError):
    pass


class DegenerateSeries(TdnError, ValueError):
    """One of the paired series has zero variance."""


class DegenerateCorrelation(TdnError, ValueError):
    """|r| = 1, so the Fisher transform and the t statistic diverge."""


class InsufficientN(TdnError, ValueError):
    pass


class InvalidSpec(TdnError, ValueError):
    pass


class MalformedRecord(TdnError, ValueError):
    def __init__(self, lineno: int, reason: str):
        super().__init__(f"line {lineno}: {reason}")
        self.lineno = lineno
        self.reason = reason

    def __reduce__(self):
        return type(self), (self.lineno, self.reason)


class ParseError(TdnError, ValueError):
    def __init__(self, row: int, reason: str):
        super().__init__(f"row {row}: {reason}")
        self.row = row
        self.reason = reason

    def __reduce__(self):
        return type(self), (self.row, self.reason)
