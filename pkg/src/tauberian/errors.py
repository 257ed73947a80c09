"""Exception types shared across the package."""


class ContractError(ValueError):
    """A numeric contract could not be met (certification, convergence, bounds)."""


class QuadratureError(ContractError):
    """Adaptive quadrature reported non-convergence."""
