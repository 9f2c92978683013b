"""Exception types shared across the package."""


class InvalidSpaceError(ValueError):
    """Raised when a mode space is malformed (e.g. a truncation dim < 2)."""


class ModeIndexError(IndexError):
    """Raised when a mode index is outside the space's mode range."""


class TruncationError(ValueError):
    """Raised when a construction would lose more probability to the
    truncation than the configured tolerance allows."""


class OutOfRangeError(ValueError):
    """Raised when an occupation number exceeds its mode's truncation."""


class ParameterError(ValueError):
    """Raised for physically invalid parameters (negative rates, T outside
    [0, 1], ...)."""


class ContractError(ValueError):
    """Raised when an operation's preconditions on its operands are violated
    (shape mismatch, non-hermitian operator where one is required, ...)."""


class DomainError(ValueError):
    """Raised when a closed-form expression is evaluated outside its domain
    of validity (at/above threshold, non-positive radicand, ...)."""


class NumericsError(RuntimeError):
    """Raised when an integrator or solver fails or produces non-finite
    values; carries diagnostics in the message."""


class AmbiguityError(RuntimeError):
    """Raised when a steady-state solve detects a degenerate null space."""
