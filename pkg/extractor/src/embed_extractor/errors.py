class ExtractorError(Exception):
    """Base class for everything this package raises on purpose."""


class InputError(ExtractorError):
    """Malformed sentence input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ModelError(ExtractorError):
    """Model could not be loaded or does not support the requested pooling."""


class ValidationError(ExtractorError):
    """Job parameters violate a documented constraint."""
