"""Exception hierarchy and source positions shared across the engine."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SourceSpan:
    """1-based line/column of a token in its source text."""

    line: int
    column: int

    def __str__(self) -> str:
        return f"line {self.line}, column {self.column}"


class CuratorError(Exception):
    """Base class for every error raised by this package."""


class UnknownArgumentError(CuratorError):
    """An operation referenced an argument the framework does not contain."""


class FrameworkTooLargeError(CuratorError):
    """Enumerating semantics was requested beyond the configured size cap."""


class EmptyPromotesError(CuratorError):
    """A domain argument without promoted values has no rank."""


class ApxError(CuratorError):
    """Problem in an apx text, with the 1-based offending line."""

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.reason = message


class ApxSyntaxError(ApxError):
    """A line of apx text that matches neither arg(...) nor att(...)."""


class UndeclaredArgumentError(ApxError):
    """An att(...) line referenced a name never declared by an arg(...) line."""


class ContextError(CuratorError):
    """A request context failed validation."""


class UnclassifiableError(ContextError):
    """No topic tag maps to a sphere and none was supplied explicitly."""


class EmptyRequestError(ContextError):
    """The context carries neither request text nor topic tags."""


class DslError(CuratorError):
    """Problem in a rule or scenario file, with the offending source span."""

    def __init__(self, message: str, span: SourceSpan | None = None) -> None:
        location = f" at {span}" if span is not None else ""
        super().__init__(f"{message}{location}")
        self.reason = message
        self.span = span


class DslSyntaxError(DslError):
    """Text that does not follow the rule/scenario grammar."""


class UnknownFieldError(DslError):
    """A condition atom or context entry named an undeclared field."""


class UnknownValueError(DslError):
    """A literal outside the vocabulary of its field."""


class UnknownStanceError(DslError):
    """A stance keyword that is not one of the five stances."""


class KbLogError(CuratorError):
    """Problem with a knowledge-base log file."""


class BadHeaderError(KbLogError):
    """The log file does not start with the expected version header."""


class CorruptEntryError(KbLogError):
    """A log entry could not be replayed, with the offending file line."""

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.reason = message


class KbValidationError(KbLogError):
    """A rule offered for appending did not validate."""

    def __init__(self, message: str, span: SourceSpan | None = None) -> None:
        location = f" at {span}" if span is not None else ""
        super().__init__(f"{message}{location}")
        self.reason = message
        self.span = span
