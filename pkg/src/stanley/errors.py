"""Exception types raised across the package."""


class StanleyError(Exception):
    """Base class for all errors raised by this package."""


class APFoundError(StanleyError, ValueError):
    """A set that must be p-free contains a progression.

    The offending progression is kept on ``witness``.
    """

    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


class ZeroNotInSetError(StanleyError, ValueError):
    """A modular set was given without the residue 0."""


class NotModularError(StanleyError, ValueError):
    """Verification of a modular set failed; ``report`` holds the details."""

    def __init__(self, message, report):
        super().__init__(message)
        self.report = report


class NotIndependentError(StanleyError, ValueError):
    pass


class HorizonError(StanleyError, RuntimeError):
    """Too few terms to decide the question at hand."""


class SumCollisionError(StanleyError, ValueError):
    """Two digit vectors over a basis produced the same value."""

    def __init__(self, message, first, second):
        super().__init__(message)
        self.first = first
        self.second = second


class TheoremContradiction(StanleyError, RuntimeError):
    """A construction that should succeed by a proven result did not.

    Either the implementation is wrong or the inputs fall outside the
    hypotheses; this is never silently swallowed.
    """
