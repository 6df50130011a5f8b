"""Coefficient and solution containers for the system

    a U^2 + b V^2 + c W^2 = d Z^2,    U W = V^2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import InvalidInput

EXACT = None  # modulus marker for integer (not modular) solutions


class Classification(str, Enum):
    TRIVIAL = "trivial"
    NONTRIVIAL = "nontrivial"
    PRIMITIVE = "primitive"
    STRONG = "strong"


@dataclass(frozen=True)
class SystemCoeffs:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.c * self.d == 0:
            raise InvalidInput(f"a*c*d must be nonzero, got {self.as_tuple()}")

    @classmethod
    def of(cls, a: int, c: int, d: int) -> "SystemCoeffs":
        """The b = 0 system (a, c, d)."""
        return cls(a, 0, c, d)

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def require_b_zero(self) -> None:
        if self.b != 0:
            raise InvalidInput("this operation needs b = 0")

    def require_smooth(self) -> None:
        if self.discriminant == 0:
            raise InvalidInput("b^2 - 4ac must be nonzero")

    def residual(self, u: int, v: int, w: int, z: int) -> tuple[int, int]:
        """(first equation LHS - RHS, UW - V^2) as exact integers."""
        return (self.a * u * u + self.b * v * v + self.c * w * w - self.d * z * z,
                u * w - v * v)

    def satisfied_by(self, sol, modulus: int | None = None) -> bool:
        u, v, w, z = sol
        e1, e2 = self.residual(u, v, w, z)
        if modulus is None:
            return e1 == 0 and e2 == 0
        return e1 % modulus == 0 and e2 % modulus == 0


@dataclass(frozen=True)
class SolutionQuadruple:
    u: int
    v: int
    w: int
    z: int
    modulus: int | None = EXACT
    classification: Classification = Classification.NONTRIVIAL

    def __iter__(self):
        return iter((self.u, self.v, self.w, self.z))

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.u, self.v, self.w, self.z)


def _prime_of(modulus: int) -> int:
    """The prime p when ``modulus`` is a prime power p^k."""
    for p in range(2, math.isqrt(modulus) + 1):
        if modulus % p == 0:
            m = modulus
            while m % p == 0:
                m //= p
            if m != 1:
                raise InvalidInput(f"{modulus} is not a prime power")
            return p
    return modulus


def classify_tuple(sol, coeffs: SystemCoeffs | tuple, p: int, k: int) -> Classification:
    """Classify ``sol`` modulo ``p**k``.

    trivial: every entry vanishes mod p^k.  primitive: some entry is prime
    to p.  strong: primitive and one of a*u, c*w, d*z is nonzero mod p.
    Whether ``sol`` actually solves the system is not checked here.
    """
    if k < 1:
        raise InvalidInput("k must be >= 1")
    if isinstance(coeffs, SystemCoeffs):
        a, c, d = coeffs.a, coeffs.c, coeffs.d
    elif len(coeffs) == 4:
        a, _, c, d = coeffs
    else:
        a, c, d = coeffs
    u, v, w, z = sol
    m = p**k
    if all(x % m == 0 for x in (u, v, w, z)):
        return Classification.TRIVIAL
    if all(x % p == 0 for x in (u, v, w, z)):
        return Classification.NONTRIVIAL
    if any((coef * x) % p for coef, x in ((a, u), (c, w), (d, z))):
        return Classification.STRONG
    return Classification.PRIMITIVE


def is_strong_solution(sol, coeffs, p: int, k: int) -> bool:
    """``sol`` solves the system mod p^k and is a strong solution there."""
    if isinstance(coeffs, SystemCoeffs):
        sc = coeffs
    else:
        sc = SystemCoeffs(*coeffs) if len(coeffs) == 4 else SystemCoeffs.of(*coeffs)
    return sc.satisfied_by(sol, p**k) and classify_tuple(sol, sc, p, k) is Classification.STRONG


def is_primitive_mod(sol, modulus: int) -> bool:
    g = 0
    for x in sol:
        g = math.gcd(g, x)
    return math.gcd(g, modulus) == 1
