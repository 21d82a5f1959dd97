"""Exception types shared across the package.

The command line maps any :class:`TokgapError` to exit code 2 (bad data),
keeping exit code 1 for usage mistakes.
"""


class TokgapError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(TokgapError):
    """Malformed input file; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DataError(TokgapError):
    """Input that parses but violates a documented precondition."""


class DegenerateInventoryError(DataError):
    """No character edit can produce a changed form."""


class SpecError(TokgapError):
    """Invalid tag conversion specification."""


class ConversionError(TokgapError):
    """Tag conversion failed on a concrete token."""


class CorrelationError(TokgapError):
    """Base class for rank correlation input problems."""


class LengthMismatchError(CorrelationError):
    pass


class TooFewSamplesError(CorrelationError):
    pass


class ConstantInputError(CorrelationError):
    pass
