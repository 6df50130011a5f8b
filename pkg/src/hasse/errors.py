"""Exception types shared across the package."""


class HasseError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(HasseError, ValueError):
    """An argument violates the documented precondition of an operation."""


class NoInverse(InvalidInput):
    pass


class PreconditionFailed(InvalidInput):
    pass


class NotStrong(InvalidInput):
    pass


class BudgetExceeded(HasseError):
    """A requested enumeration or factorization is beyond the configured budget."""


class IdentityCheckFailed(HasseError, AssertionError):
    """An internal algebraic identity did not hold. Indicates a bug."""


class DerivativeVanishes(InvalidInput):
    pass


class RootSearchFailed(HasseError):
    pass


class NoPrimitiveImage(InvalidInput):
    pass
