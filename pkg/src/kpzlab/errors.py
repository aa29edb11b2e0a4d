"""Exception types shared across the package."""


class KpzlabError(Exception):
    """Base class for all package errors."""


class ArgumentError(KpzlabError, ValueError):
    """An argument violates an operation's preconditions."""


class RangeError(KpzlabError, ValueError):
    """A query lies outside the window or line range of a field."""


class EstimationError(KpzlabError, ValueError):
    """An estimator received degenerate or insufficient input."""
