"""Exception classes shared across the package.

The split matters for the command line tool: validation problems
(:class:`DomainError`, :class:`DataError`, :class:`SeriesParseError`) map to
exit code 2, numerical failures (:class:`ConvergenceError`) to exit code 3.
"""


class HeavytailError(Exception):
    """Base class for all package-specific errors."""


class DomainError(HeavytailError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DataError(HeavytailError, ValueError):
    """Input data is unusable: empty, non-finite, degenerate or too short."""


class SeriesParseError(DataError):
    """A series file contains tokens that cannot be read as finite numbers."""


class ConvergenceError(HeavytailError, RuntimeError):
    """An iterative numerical routine failed to converge."""


class NotFittedError(HeavytailError, RuntimeError):
    """A transformer method was called before ``fit``."""
