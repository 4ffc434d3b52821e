"""Exception types raised across the package."""


class StructureError(ValueError):
    """Input has the wrong shape or cannot be repaired into a metric."""


class DomainError(ValueError):
    """A numeric argument lies outside the domain of a closed-form rule."""


class ContractError(ValueError):
    """A user-supplied function broke its documented contract."""
