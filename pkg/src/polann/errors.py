"""Exception types shared across the toolkit."""


class PolannError(Exception):
    """Base class for all toolkit errors."""


class ParseError(PolannError):
    """Malformed input file (CoNLL-U, TSV, JSON-lines)."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ValidationError(PolannError):
    """Input violates a documented precondition or invariant."""


class FitError(PolannError):
    """Mixture fitting failed (ill-conditioned covariance, divergent likelihood)."""


class TrainingError(PolannError):
    """Classifier training failed (non-finite loss, no usable trials)."""
