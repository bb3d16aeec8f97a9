"""Exception hierarchy shared by every module."""


class WheelError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(WheelError, ValueError):
    """Parameters or indices outside the admissible domain."""


class ChebyshevOverflowError(WheelError, OverflowError):
    """A Chebyshev recurrence left the range of double precision."""


class SingularMatrixError(WheelError, ArithmeticError):
    pass


class AxiomViolationError(WheelError, ArithmeticError):
    """A computed group inverse fails the defining identities."""


class UnresolvedReconstructionError(WheelError):
    """No candidate reading of a printed formula matched the trusted path."""


class LedgerStateError(WheelError, RuntimeError):
    pass
