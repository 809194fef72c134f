"""Exception hierarchy. The CLI maps each family to an exit code."""


class FibratrixError(Exception):
    """Base class for all library errors."""


class ParameterizationError(FibratrixError, ValueError):
    """Malformed input forms (wrong count, not homogeneous, degree mismatch)."""


class ValidationError(FibratrixError):
    """A fatal hypothesis check failed."""


class MathError(FibratrixError):
    """An operation is undefined for the given data."""


class DegenerateParameterizationError(MathError):
    pass


class PreimageError(MathError):
    pass


class BasePointError(MathError):
    pass


class FittingError(MathError):
    pass
