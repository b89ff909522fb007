"""Elliptic gamma function, its relatives, and checks of their identities."""

from .errors import (
    BranchWarning,
    DomainError,
    EllipGammaError,
    NotInvertible,
    ParameterError,
    PoleProximity,
    TermCapExceeded,
    TooManySkips,
)
from .numerics import (
    DEFAULT_CONFIG,
    EvalConfig,
    UpperHalfPoint,
    elliptic_gamma,
    elliptic_number,
    euler_gamma,
    gamma_bar,
    nome,
    q_gamma,
    q_number,
    qpochhammer,
    theta0,
    truncation_order,
)

__version__ = "0.1.0"
