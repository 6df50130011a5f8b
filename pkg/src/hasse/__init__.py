"""Local-global solvability of aU^2 + bV^2 + cW^2 = dZ^2, UW = V^2."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BudgetExceeded,
    HasseError,
    IdentityCheckFailed,
    InvalidInput,
    NoPrimitiveImage,
    NotStrong,
    PreconditionFailed,
)
from .system import Classification, SolutionQuadruple, SystemCoeffs  # noqa: E402

__all__ = [
    "BudgetExceeded",
    "Classification",
    "HasseError",
    "IdentityCheckFailed",
    "InvalidInput",
    "NoPrimitiveImage",
    "NotStrong",
    "PreconditionFailed",
    "SolutionQuadruple",
    "SystemCoeffs",
    "__version__",
]
