"""Typed errors raised across the toolkit.

Every error is a ``ValueError`` so callers that only care about "bad input"
can keep catching that. ``exit_code`` is what the command line returns.
"""

from typing import Iterable, Optional, Sequence


class IsDesignError(ValueError):
    """Bazowy wyjątek pakietu."""

    exit_code: int = 2


class ParameterError(IsDesignError):
    """Invalid generator / optimizer / model parameter."""


class SchemaError(IsDesignError):
    """Malformed configuration file or flag combination."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


class ParseError(IsDesignError):
    """Unreadable edge-list, design or outcome file."""

    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class DimensionError(IsDesignError):
    """Vector length does not match its scope."""


class PreconditionError(IsDesignError):
    """Input violates an estimator precondition (e.g. unbalanced arms)."""


class DataError(IsDesignError):
    """Observed data is incomplete."""

    exit_code = 3

    def __init__(self, message: str, missing_ids: Optional[Iterable[int]] = None):
        self.missing_ids: Sequence[int] = sorted(missing_ids or [])
        if self.missing_ids:
            message = f"{message}: {', '.join(str(i) for i in self.missing_ids)}"
        super().__init__(message)


class DegenerateDesignError(IsDesignError):
    """Design makes a variance formula or estimator undefined."""

    exit_code = 4


class SingularDesignError(DegenerateDesignError):
    """Least-squares design matrix is rank deficient."""

    def __init__(self, columns: Sequence[str], message: str = "design matrix is singular"):
        self.columns = list(columns)
        super().__init__(f"{message}; collinear columns: {', '.join(self.columns)}")


class MissingCoefficientError(DegenerateDesignError):
    """Requested effect needs a coefficient the fit does not have."""
