"""Exception and warning types shared by all modules."""


class EllipGammaError(Exception):
    """Base class for every error raised by this package."""


class DomainError(EllipGammaError, ValueError):
    """A modular parameter lies outside the region where products converge fast enough."""


class ParameterError(EllipGammaError, ValueError):
    """Invalid or mutually inconsistent arguments."""


class PoleProximity(EllipGammaError, ArithmeticError):
    """A denominator factor is within ``pole_guard`` of zero."""


class TermCapExceeded(EllipGammaError, ArithmeticError):
    """The requested accuracy would need more than ``max_terms_per_axis`` factors."""


class NotInvertible(EllipGammaError, ArithmeticError):
    """A truncated series has a constant term other than +1 or -1."""


class TooManySkips(EllipGammaError, RuntimeError):
    """More than 5% of sampled points were too close to a pole."""


class BranchWarning(UserWarning):
    """A principal-branch complex power was taken of a value with |arg| > pi/2."""
