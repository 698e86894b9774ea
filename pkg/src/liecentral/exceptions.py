"""Exception hierarchy for the liecentral engine."""

from typing import Any


class LieCentralError(Exception):
    """Base class for all engine errors."""


class AlgebraDocumentError(LieCentralError, ValueError):
    """Invalid algebra document."""

    def __init__(self, message: str, location: str | None = None) -> None:
        self.location = location
        super().__init__(f"{message} (at {location})" if location else message)


class UnknownGeneratorError(AlgebraDocumentError):
    """Bracket references a generator that is not in the basis."""


class DuplicateBracketError(AlgebraDocumentError):
    """The same generator pair is bracketed twice."""


class DiagonalBracketError(AlgebraDocumentError):
    """A generator is bracketed with itself."""


class RationalFormatError(AlgebraDocumentError):
    """Coefficient is not a p/q decimal rational literal."""


class SubalgebraError(LieCentralError):
    """Generator subset is not closed under the bracket."""


class TemplateError(LieCentralError):
    """Matrix does not match its family template."""


class ParameterError(TemplateError, ValueError):
    """Group parameters are incomplete or violate a constraint."""


class FamilyMismatchError(TemplateError):
    """Group elements from different families or sizes were combined."""


class SpanError(LieCentralError):
    """Vector is not in the span of the given basis."""


class ResourceLimitError(LieCentralError):
    """Computation would exceed a configured size ceiling."""

    def __init__(self, message: str, report: dict[str, Any]) -> None:
        self.report = report
        super().__init__(message)
