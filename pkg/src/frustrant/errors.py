"""Exception hierarchy shared by the library and the CLI."""


class FrustrantError(Exception):
    """Base class for all library errors."""


class DomainError(FrustrantError, ValueError):
    """An argument falls outside the domain of the operation."""


class ZeroNormError(DomainError):
    """A state has (numerically) zero norm and cannot be normalized."""


class OrthogonalInitialError(DomainError):
    """The initial product state has no overlap with the ground manifold."""


class ResourceCapError(FrustrantError):
    """The requested computation exceeds a configured size cap."""


class DegenerateDenominatorError(FrustrantError):
    """A classical ground state has no negative-energy term."""

    def __init__(self, config: int, num_sites: int):
        self.config = config
        self.num_sites = num_sites
        bits = "".join(str((config >> i) & 1) for i in range(num_sites))
        super().__init__(f"ground configuration {bits} has no non-frustrated term")
