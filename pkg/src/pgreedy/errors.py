"""Exception hierarchy shared by all modules."""


class PGreedyError(Exception):
    """Base class for errors raised by this package."""


class InputError(PGreedyError, ValueError):
    """Malformed input: wrong dimension, empty set, bad parameter."""


class DegenerateInputError(InputError):
    """Input that would make a kernel matrix singular (e.g. repeated points)."""


class BreakdownError(PGreedyError, ArithmeticError):
    """A Newton pivot collapsed below the numerical floor."""


class ExhaustedError(PGreedyError):
    """Every remaining candidate has zero Power Function value."""


class ConditioningError(PGreedyError, ArithmeticError):
    """A dense factorization failed or produced an inconsistent result."""


class InsufficientDataError(InputError):
    """Too few samples in a fit window."""


class ConfigError(PGreedyError):
    """Invalid experiment configuration."""
