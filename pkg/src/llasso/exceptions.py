"""Exception hierarchy shared by all modules."""


class LlassoError(Exception):
    """Base class for package errors."""


class InputError(LlassoError, ValueError):
    """Invalid user input: bad files, shapes, or parameter ranges."""


class NumericError(LlassoError, RuntimeError):
    """Numerical failure: singular systems, failed factorizations."""
