"""Exception hierarchy shared across the pipeline."""


class FlagdomError(Exception):
    """Base class for all package errors."""


class ResourceLimitError(FlagdomError):
    """Requested computation exceeds the supported size bounds."""


class SizeMismatchError(FlagdomError):
    """Operands have incompatible orders or colour counts."""


class FormatError(FlagdomError):
    """A text artefact (graph line, certificate, problem dump) is malformed."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DimensionMismatchError(FlagdomError):
    """Matrix or block dimensions disagree with the declared structure."""


class RoundingFailedError(FlagdomError):
    """Exact rounding could not repair the solution within its budget."""


class SolverError(FlagdomError):
    """The external SDP solver failed or produced unusable output."""
