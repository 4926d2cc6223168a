"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class PreconditionError(ValueError):
    """Inputs are well-formed but violate a documented precondition."""


class InfeasibleError(PreconditionError):
    """No parameter choice satisfies the requested sizing rule."""
