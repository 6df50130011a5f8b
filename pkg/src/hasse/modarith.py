"""Exact modular arithmetic primitives.

Every residue is canonicalised to ``[0, m)``.  Values are plain Python ints;
the public functions reject inputs whose magnitude reaches ``2**63`` so that
results agree with a fixed-width implementation of the same routines.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidInput, NoInverse

INT_LIMIT = 1 << 63

# Deterministic Miller-Rabin bases for n < 3.3e24 (covers all 64-bit inputs).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


@dataclass(frozen=True)
class Residue:
    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise InvalidInput(f"modulus must be >= 2, got {self.modulus}")
        if not 0 <= self.value < self.modulus:
            raise InvalidInput(f"{self.value} is not reduced mod {self.modulus}")

    def __int__(self):
        return self.value


@dataclass(frozen=True)
class LiftRequest:
    """Ask for an ``r``-th root of ``N`` modulo ``p**k``."""

    N: int
    r: int
    p: int
    k: int

    def __post_init__(self):
        if self.r < 1 or self.k < 1:
            raise InvalidInput("r and k must be >= 1")
        if not is_prime(self.p):
            raise InvalidInput(f"{self.p} is not prime")


def _check_int(x: int, name: str = "value") -> int:
    if not isinstance(x, int):
        raise InvalidInput(f"{name} must be an integer, got {type(x).__name__}")
    if abs(x) >= INT_LIMIT:
        raise InvalidInput(f"{name}={x} exceeds the 63-bit magnitude limit")
    return x


def _check_modulus(m: int) -> int:
    _check_int(m, "modulus")
    if m < 2:
        raise InvalidInput(f"modulus must be >= 2, got {m}")
    return m


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n < 2**64."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int, limit: int | None = None) -> dict[int, int]:
    """Prime factorisation of ``|n|`` by trial division.

    ``limit`` bounds ``|n|``; larger inputs raise :class:`BudgetExceeded`.
    """
    from .errors import BudgetExceeded

    n = abs(n)
    if n == 0:
        raise InvalidInput("cannot factor 0")
    if limit is not None and n > limit:
        raise BudgetExceeded(f"|{n}| exceeds factorization budget {limit}")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for q in (f, f + 2):
            while n % q == 0:
                out[q] = out.get(q, 0) + 1
                n //= q
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise InvalidInput("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for e in factorize(n).values())


def mod_pow(base: int, exp: int, m: int) -> int:
    _check_modulus(m)
    _check_int(base, "base")
    if exp < 0:
        raise InvalidInput("exponent must be non-negative")
    return pow(base % m, exp, m)


def inverse_mod(a: int, m: int) -> int:
    _check_modulus(m)
    _check_int(a, "a")
    a %= m
    if math.gcd(a, m) != 1:
        raise NoInverse(f"{a} has no inverse modulo {m}")
    return pow(a, -1, m)


def _require_odd_prime(p: int) -> None:
    _check_int(p, "p")
    if p == 2 or not is_prime(p):
        raise InvalidInput(f"{p} is not an odd prime")


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p, via Euler's criterion."""
    _require_odd_prime(p)
    _check_int(a, "a")
    return _legendre(a, p)


def _legendre(a: int, p: int) -> int:
    # Unchecked variant for hot loops; p must be an odd prime.
    t = pow(a % p, (p - 1) // 2, p)
    return -1 if t == p - 1 else t


def is_rth_power_mod(a: int, r: int, m: int) -> tuple[bool, int | None]:
    """Exhaustive test whether ``a`` is an ``r``-th power mod ``m``.

    Returns ``(True, least witness)`` or ``(False, None)``.  Cost is O(m);
    use :func:`is_fourth_power_mod_p` or :func:`legendre` on hot paths.
    """
    _check_modulus(m)
    _check_int(a, "a")
    if r < 1:
        raise InvalidInput("r must be >= 1")
    a %= m
    for x in range(m):
        if pow(x, r, m) == a:
            return True, x
    return False, None


def is_fourth_power_mod_p(a: int, p: int) -> bool:
    """Fast test for ``a`` being a fourth power in F_p (0 counts)."""
    a %= p
    if a == 0 or p == 2:
        return True
    g = math.gcd(4, p - 1)
    return pow(a, (p - 1) // g, p) == 1


def _tonelli_shanks(a: int, p: int) -> int:
    # a is a nonzero quadratic residue mod the odd prime p.
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while _legendre(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def sqrt_mod_p(a: int, p: int) -> int | None:
    """Least square root of ``a`` mod the odd prime ``p``, or None."""
    _require_odd_prime(p)
    _check_int(a, "a")
    return _sqrt_mod_p(a, p)


def _sqrt_mod_p(a: int, p: int) -> int | None:
    a %= p
    if a == 0:
        return 0
    if _legendre(a, p) != 1:
        return None
    r = _tonelli_shanks(a, p)
    return min(r, p - r)


def sqrt_mod_p_scan(a: int, p: int) -> int | None:
    """Exhaustive-scan square root; the oracle for :func:`sqrt_mod_p` (p < 1000)."""
    a %= p
    for x in range(p):
        if x * x % p == a:
            return x
    return None


def fourth_root_mod_p(a: int, p: int) -> int | None:
    """Least fourth root of ``a`` modulo the odd prime ``p``, or None."""
    a %= p
    if a == 0:
        return 0
    s = _sqrt_mod_p(a, p)
    if s is None:
        return None
    roots = []
    for y in (s, p - s):
        x = _sqrt_mod_p(y, p)
        if x is not None:
            roots.extend((x, p - x))
    return min(roots) if roots else None


def rth_root_mod_p(a: int, r: int, p: int) -> int | None:
    """Least ``x`` in ``[0, p)`` with ``x**r == a (mod p)``, or None."""
    a %= p
    if a == 0:
        return 0
    if p < 4096:
        for x in range(1, p):
            if pow(x, r, p) == a:
                return x
        return None
    if pow(a, (p - 1) // math.gcd(r, p - 1), p) != 1:
        return None
    from sympy.ntheory.residue_ntheory import nthroot_mod

    roots = nthroot_mod(a, r, p, all_roots=True)
    return min(int(x) for x in roots) if roots else None
