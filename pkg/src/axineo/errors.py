"""Exception types shared across the package."""

from __future__ import annotations


class InfeasibleDeterminantError(ValueError):
    """Raised when a volume ratio is not strictly positive.

    ``index`` is the offending quadrature point (or entry) when known and
    ``value`` the corresponding determinant.
    """

    def __init__(self, message: str, index: int | None = None, value: float | None = None):
        super().__init__(message)
        self.index = index
        self.value = value


class ConstraintError(ValueError):
    """Boundary data or a field violates the axisymmetry constraint v1 >= 0."""


class ContractError(ValueError):
    """A diagnostic was called outside its documented preconditions."""


class ConfigError(ValueError):
    """Invalid or unknown run-configuration entry."""
