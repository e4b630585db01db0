"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input violates a documented invariant (norm defect, bad shape, ...)."""


class DimensionError(ValidationError):
    """Operation requires a specific local dimension."""


class DomainError(ValueError):
    """Scalar argument outside its documented domain."""


class ConditioningError(RuntimeError):
    """Feasibility problem is numerically degenerate (near-zero row)."""


class CertificationError(RuntimeError):
    """A certification step that must succeed for valid inputs did not."""
