"""Shared exception types."""


class InvariantViolation(RuntimeError):
    """A numerical invariant (orthogonality, unit norm, level set) was breached."""


class RegionBoundaryError(ValueError):
    """Covector energy too close to a region boundary for elliptic coordinates."""


class TransversalityError(ValueError):
    """Covector violates the transversality condition for the given base point."""
