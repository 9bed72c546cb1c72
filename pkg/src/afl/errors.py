"""Exception hierarchy shared by every module of the package."""


class AFLError(Exception):
    """Base class for all library errors."""


class UnsupportedOrderError(AFLError, ValueError):
    """Bessel order outside the supported range."""


class NumericalFailure(AFLError, RuntimeError):
    """A numerical procedure (root bracketing, quadrature, ...) did not converge.

    Attributes
    ----------
    context : dict
        Diagnostic values attached by the raising code (offending index,
        achieved tolerance, ...).
    """

    def __init__(self, message, **context):
        super().__init__(message)
        self.context = context


class ConstructionError(NumericalFailure):
    """A filter bank or frame failed its construction-time invariants."""


class IndexOutOfTable(AFLError, IndexError):
    """A frame index lies outside the truncation bounds of a table."""


class InvalidParameters(AFLError, ValueError):
    """Parameters violate a documented precondition."""
