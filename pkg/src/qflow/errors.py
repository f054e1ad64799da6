"""Exception hierarchy shared by every qflow module."""


class QflowError(Exception):
    """Base class for all library errors."""


class DomainError(QflowError, ValueError):
    """Arguments outside the domain of an operation (bad indices, r = 0, ...)."""


class PoleError(DomainError):
    """Vector quantity requested on the polar axis where u_phi is undefined."""


class NodeError(DomainError):
    """Velocity requested where the density vanishes."""


class NumericError(QflowError, ArithmeticError):
    """Non-finite samples or a failed internal consistency check."""
