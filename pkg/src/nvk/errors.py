"""Semantic exceptions shared across the package."""


class NvkError(Exception):
    """Base class for all library errors."""


class DomainError(NvkError, ValueError):
    """Input outside the mathematical domain (e.g. a point with Im z <= 0)."""


class DimensionMismatchError(DomainError):
    """Operands live on spaces of different dimension."""


class IntegrandError(NvkError):
    """The integrand returned a non-finite value at a quadrature node."""


class GrowthConditionError(NvkError):
    """A representation integral diverged numerically."""


class QuadratureFailure(NvkError):
    """A quadrature that a verification step relies on did not converge."""


class InconsistencyError(NvkError):
    """An internal cross-check failed (wrong pole multiplicity, residue mismatch)."""
