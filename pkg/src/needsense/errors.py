"""Exception types raised by the engine."""


class NeedsenseError(Exception):
    """Base class for all engine errors."""


class TraceParseError(NeedsenseError, ValueError):
    """A trace document failed validation.

    ``line`` is the 1-based line of the offending record, or None when the
    error is not tied to one line.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"{message} at line {line}"
        super().__init__(message)


class CatalogError(NeedsenseError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class BaselineError(NeedsenseError, ValueError):
    """Malformed baseline document; ``location`` is a line:col or key path."""

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)


class CalibrationError(NeedsenseError, ValueError):
    pass


class MissingBaselineError(NeedsenseError, KeyError):
    def __init__(self, signal: str):
        self.signal = signal
        super().__init__(f"no baseline for signal {signal!r}")

    def __str__(self) -> str:
        return self.args[0]


class UnknownFeatureError(NeedsenseError, ValueError):
    def __init__(self, feature: str, reason: str = "not in catalog"):
        self.feature = feature
        super().__init__(f"feature {feature!r}: {reason}")


class RuleParseError(NeedsenseError, ValueError):
    """Syntax error in a rules document, positioned at a 1-based line/column."""

    def __init__(self, message: str, line: int, col: int, expected: tuple[str, ...] = ()):
        self.line = line
        self.col = col
        self.expected = tuple(expected)
        self.detail = message
        text = f"{line}:{col}: {message}"
        if self.expected:
            text += f" (expected {' | '.join(self.expected)})"
        super().__init__(text)


class RuleSemanticError(RuleParseError):
    """Well-formed statement that violates a rule invariant."""


class RuleFeatureError(RuleSemanticError):
    """A rule names a feature absent from the catalog."""
