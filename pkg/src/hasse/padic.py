"""Truncated p-adic integers, Hensel lifting and Z_p-points of the general system."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .conics import solve_general_fp
from .errors import BudgetExceeded, DerivativeVanishes, InvalidInput, RootSearchFailed
from .modarith import is_prime
from .system import SystemCoeffs

DEFAULT_PRECISION = 8
EXTENSION_BUDGET = 10**4


@dataclass(frozen=True)
class PadicApprox:
    """An element of Z_p known modulo p^K, stored as all K truncations.

    ``digits[k-1]`` is the residue modulo p^k; consecutive entries are coherent.
    """

    p: int
    K: int
    digits: tuple[int, ...]

    def __post_init__(self):
        if self.K < 1 or len(self.digits) != self.K:
            raise InvalidInput("need exactly K >= 1 truncations")
        if not self.is_coherent():
            raise InvalidInput(f"incoherent p-adic digits {self.digits}")

    @classmethod
    def from_residue(cls, x: int, p: int, K: int) -> "PadicApprox":
        return cls(p, K, tuple(x % p**k for k in range(1, K + 1)))

    @property
    def value(self) -> int:
        """The residue modulo p^K."""
        return self.digits[-1]

    def is_coherent(self) -> bool:
        pk = self.p
        for k in range(self.K):
            if not 0 <= self.digits[k] < pk:
                return False
            if k + 1 < self.K and self.digits[k + 1] % pk != self.digits[k]:
                return False
            pk *= self.p
        return True

    def is_unit(self) -> bool:
        return self.digits[0] != 0

    def _check(self, other: "PadicApprox") -> None:
        if (self.p, self.K) != (other.p, other.K):
            raise InvalidInput(f"mismatched p-adic parameters {(self.p, self.K)} vs {(other.p, other.K)}")

    def __add__(self, other):
        return padic_add(self, other)

    def __mul__(self, other):
        return padic_mul(self, other)

    def __neg__(self):
        return PadicApprox.from_residue(-self.value, self.p, self.K)

    def __sub__(self, other):
        return padic_add(self, -other)


def padic_from_int(n: int, p: int, K: int) -> PadicApprox:
    if not is_prime(p):
        raise InvalidInput(f"{p} is not prime")
    return PadicApprox.from_residue(n, p, K)


def padic_add(x: PadicApprox, y: PadicApprox) -> PadicApprox:
    x._check(y)
    pk = [x.p**k for k in range(1, x.K + 1)]
    return PadicApprox(x.p, x.K, tuple((a + b) % m for a, b, m in zip(x.digits, y.digits, pk)))


def padic_mul(x: PadicApprox, y: PadicApprox) -> PadicApprox:
    x._check(y)
    pk = [x.p**k for k in range(1, x.K + 1)]
    return PadicApprox(x.p, x.K, tuple(a * b % m for a, b, m in zip(x.digits, y.digits, pk)))


@dataclass(frozen=True)
class PolyOverZp:
    """Polynomial with coefficients in Z_p, ascending degree order."""

    coeffs: tuple[PadicApprox, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise InvalidInput("empty polynomial")
        if len({(c.p, c.K) for c in self.coeffs}) != 1:
            raise InvalidInput("coefficients must share p and K")

    @classmethod
    def from_ints(cls, coeffs: Sequence[int], p: int, K: int) -> "PolyOverZp":
        return cls(tuple(padic_from_int(c, p, K) for c in coeffs))

    @property
    def p(self) -> int:
        return self.coeffs[0].p

    @property
    def K(self) -> int:
        return self.coeffs[0].K

    @property
    def degree(self) -> int:
        nz = [i for i, c in enumerate(self.coeffs) if c.value]
        return nz[-1] if nz else -1

    def derivative(self) -> "PolyOverZp":
        if len(self.coeffs) == 1:
            return PolyOverZp((padic_from_int(0, self.p, self.K),))
        return PolyOverZp(tuple(
            padic_from_int(i * c.value, self.p, self.K) for i, c in enumerate(self.coeffs) if i
        ))

    def eval_mod(self, t: int, m: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * t + c.value) % m
        return acc

    def __call__(self, x: PadicApprox) -> PadicApprox:
        acc = padic_from_int(0, self.p, self.K)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def hensel_lift_root(f: PolyOverZp, t0: int, K: int | None = None) -> PadicApprox:
    """The unique root of f in Z_p congruent to t0 mod p, to precision K.

    Newton steps u <- u - f(u)/f'(u) double the precision each round.
    """
    p = f.p
    K = f.K if K is None else K
    if K > f.K:
        raise InvalidInput(f"precision {K} exceeds coefficient precision {f.K}")
    df = f.derivative()
    if f.eval_mod(t0, p):
        raise InvalidInput(f"f({t0}) is not 0 mod {p}")
    if df.eval_mod(t0, p) == 0:
        raise DerivativeVanishes(f"f'({t0}) == 0 mod {p}")
    pK = p**K
    u, prec = t0 % p, 1
    while prec < K:
        prec = min(2 * prec, K)
        m = p**prec
        u = (u - f.eval_mod(u, m) * pow(df.eval_mod(u, m), -1, m)) % m
    u %= pK
    if f.eval_mod(u, pK):
        raise AssertionError("Newton iteration did not converge")
    return padic_from_int(u, p, K)


def _quartic_hypotheses(a: int, b: int, c: int, p: int) -> None:
    if not is_prime(p):
        raise InvalidInput(f"{p} is not prime")
    if (2 * a * c * (b * b - 4 * a * c)) % p == 0:
        raise InvalidInput(f"p={p} divides 2ac(b^2-4ac)")


def quartic_root_lift(a: int, b: int, c: int, p: int, t0: int | None = None,
                      K: int = DEFAULT_PRECISION) -> PadicApprox:
    """Z_p-root of a T^4 + b T^2 + c lifting ``t0`` (or the least root mod p)."""
    _quartic_hypotheses(a, b, c, p)
    f = PolyOverZp.from_ints((c, 0, b, 0, a), p, K)
    if t0 is None:
        roots = [t for t in range(p) if f.eval_mod(t, p) == 0]
        if not roots:
            raise RootSearchFailed(f"{a}T^4 + {b}T^2 + {c} has no root modulo {p}")
        t0 = roots[0]
    if f.eval_mod(t0, p):
        raise InvalidInput(f"{t0} is not a root modulo {p}")
    # nonvanishing derivative is forced by p !| 2ac(b^2-4ac)
    assert f.derivative().eval_mod(t0, p) != 0
    return hensel_lift_root(f, t0, K)


@dataclass(frozen=True)
class PadicSolution:
    u: PadicApprox
    v: PadicApprox
    w: PadicApprox
    z: PadicApprox
    swapped: bool = False

    def __iter__(self):
        return iter((self.u, self.v, self.w, self.z))

    def truncation(self, k: int) -> tuple[int, int, int, int]:
        return tuple(x.digits[k - 1] for x in self)


def p_local_solve_general(coeffs: SystemCoeffs, p: int, K: int = DEFAULT_PRECISION) -> PadicSolution:
    """Nontrivial Z_p-solution to precision K for p !| 2acd(b^2 - 4ac).

    Starts from a mod-p solution, scales w to 1 (exchanging U and W first if w
    is not a unit), then lifts either a root of a T^4 + b T^2 + c (z = 0 mod p)
    or a root of d T^2 - (a v^4 + b v^2 + c).
    """
    a, b, c, d = coeffs.as_tuple()
    if not is_prime(p):
        raise InvalidInput(f"{p} is not prime")
    if (2 * a * c * d * (b * b - 4 * a * c)) % p == 0:
        raise InvalidInput(f"p={p} divides 2acd(b^2-4ac)")
    u0, v0, w0, z0 = solve_general_fp(a, b, c, d, p).as_tuple()
    swapped = w0 % p == 0
    if swapped:
        a, c, u0, w0 = c, a, w0, u0
    inv = pow(w0, -1, p)
    v, z = v0 * inv % p, z0 * inv % p
    if z == 0:
        t = quartic_root_lift(a, b, c, p, v, K)
        sol = (t * t, t, padic_from_int(1, p, K), padic_from_int(0, p, K))
    else:
        f = PolyOverZp.from_ints((-(a * v**4 + b * v**2 + c), 0, d), p, K)
        t = hensel_lift_root(f, z, K)
        sol = (padic_from_int(v * v, p, K), padic_from_int(v, p, K), padic_from_int(1, p, K), t)
    if swapped:
        sol = (sol[2], sol[1], sol[0], sol[3])
    return PadicSolution(*sol, swapped=swapped)


def _normalised_solutions(coeffs: SystemCoeffs, p: int, lam: int):
    # Every primitive solution mod p^lam is a unit multiple of exactly the
    # shapes below: u = 1; or p | u, w = 1; or p | u, v, w and z = 1.
    N = p**lam
    a, b, c, d = (x % N for x in coeffs.as_tuple())
    roots: dict[int, list[int]] = {}
    for z in range(N):
        roots.setdefault(d * z * z % N, []).append(z)
    v = np.arange(N, dtype=np.int64)
    v2 = v * v % N
    rhs = (a + b * v2 + c * (v2 * v2 % N)) % N
    for vi, wi, r in zip(v.tolist(), v2.tolist(), rhs.tolist()):
        for z in roots.get(r, ()):
            yield (1, vi, wi, z)
    for vi in range(0, N, p):
        ui = vi * vi % N
        for z in roots.get((a * ui * ui + b * ui + c) % N, ()):
            yield (ui, vi, 1, z)
    if lam > 1 and d % (p * p):
        return
    mult = list(range(0, N, p))
    vroots: dict[int, list[int]] = {}
    for x in mult:
        vroots.setdefault(x * x % N, []).append(x)
    for u in mult:
        for w in mult:
            for vi in vroots.get(u * w % N, ()):
                if (a * u * u + b * vi * vi + c * w * w - d) % N == 0:
                    yield (u, vi, w, 1)


def extendable_solutions(coeffs: SystemCoeffs, p: int, k: int, lam: int,
                         budget: int = EXTENSION_BUDGET) -> list[tuple[int, int, int, int]]:
    """Primitive solutions mod p^k that are reductions of primitive solutions mod p^lam."""
    if not is_prime(p):
        raise InvalidInput(f"{p} is not prime")
    if not 1 <= k <= lam:
        raise InvalidInput("need 1 <= k <= lam")
    if p**lam > budget:
        raise BudgetExceeded(f"p^lam = {p**lam} exceeds extension budget {budget}")
    pk = p**k
    base = {tuple(x % pk for x in s) for s in _normalised_solutions(coeffs, p, lam)}
    units = [x for x in range(1, pk) if x % p]
    if len(base) * len(units) > 2_000_000:
        raise BudgetExceeded("too many extendable solutions to list")
    out = {tuple(s_i * e % pk for s_i in s) for s in base for e in units}
    return sorted(out)
