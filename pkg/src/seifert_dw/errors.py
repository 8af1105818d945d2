"""Exception hierarchy; each class maps to one CLI exit code."""


class SeifertDWError(Exception):
    exit_code = 1


class SeifertValidationError(SeifertDWError, ValueError):
    """Malformed or invalid input data."""

    exit_code = 1


class TriangulationError(SeifertDWError, ValueError):
    """A gluing table that is structurally broken or fails validation."""

    exit_code = 1


class ParseError(SeifertDWError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)

    exit_code = 1


class SelfCheckError(SeifertDWError, RuntimeError):
    """Two independent computations disagreed; always an implementation bug."""

    exit_code = 2


class BudgetExceeded(SeifertDWError, RuntimeError):
    """The requested computation is larger than the configured limit."""

    exit_code = 3
