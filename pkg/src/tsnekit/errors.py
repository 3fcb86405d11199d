"""Exception and warning types shared across the package.

Plain argument mistakes (out-of-range parameters, shape mismatches) raise the
builtin ``ValueError``; the classes below cover failures that callers may want
to distinguish: bad input files, bad data, and numerical breakdowns.
"""


class TsnekitError(Exception):
    """Base class for package-specific errors."""


class ParseError(TsnekitError):
    """Malformed input file content.

    Carries ``line`` (1-based) when the offending line is known.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class FormatError(TsnekitError):
    """Input does not match the expected file format (wrong header, etc.)."""


class ValidationError(TsnekitError):
    """Parsed data violates a dataset invariant (e.g. duplicate ids)."""


class FeaturizationError(TsnekitError):
    """A sequence cannot be converted to a k-mer spectrum."""


class DegenerateInputError(TsnekitError):
    """Numerically degenerate input: rank deficiency, all-zero rows, ..."""


class DivergenceError(TsnekitError):
    """The optimizer produced non-finite values."""

    def __init__(self, iteration: int, message: str | None = None):
        if message is None:
            message = (
                f"non-finite values at iteration {iteration}; "
                "consider lowering the learning rate"
            )
        super().__init__(message)
        self.iteration = iteration


class ConvergenceWarning(UserWarning):
    """An iterative routine stopped before reaching its tolerance."""
