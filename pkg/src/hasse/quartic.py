"""Translation between the system and the quartic a X^4 + b X^2 Y^2 + c Y^4 = d Z^2."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidInput, NoPrimitiveImage
from .system import EXACT, Classification, SolutionQuadruple, SystemCoeffs


@dataclass(frozen=True)
class QuarticTriple:
    x: int
    y: int
    z: int
    modulus: int | None = EXACT

    def __iter__(self):
        return iter((self.x, self.y, self.z))

    def is_trivial(self) -> bool:
        if self.modulus is None:
            return self.x == self.y == self.z == 0
        return all(t % self.modulus == 0 for t in self)

    def is_primitive(self) -> bool:
        if self.modulus is None:
            return math.gcd(math.gcd(self.x, self.y), self.z) == 1
        return math.gcd(math.gcd(math.gcd(self.x, self.y), self.z), self.modulus) == 1


def quartic_residual(coeffs, x: int, y: int, z: int) -> int:
    a, b, c, d = coeffs
    return a * x**4 + b * x * x * y * y + c * y**4 - d * z * z


def _classify(t: tuple[int, int, int, int], modulus: int | None) -> Classification:
    g = 0
    for x in t:
        g = math.gcd(g, x)
    if modulus is None:
        return Classification.TRIVIAL if g == 0 else Classification.NONTRIVIAL
    if all(x % modulus == 0 for x in t):
        return Classification.TRIVIAL
    return Classification.PRIMITIVE if math.gcd(g, modulus) == 1 else Classification.NONTRIVIAL


def quartic_to_system(t: QuarticTriple) -> SolutionQuadruple:
    """(x, y, z) -> (x^2, x y, y^2, z)."""
    if t.is_trivial():
        raise InvalidInput("trivial quartic triple")
    x, y, z = t
    sol = (x * x, x * y, y * y, z)
    if t.modulus is not None:
        sol = tuple(s % t.modulus for s in sol)
    return SolutionQuadruple(*sol, t.modulus, _classify(sol, t.modulus))


def system_to_quartic(s, coeffs: SystemCoeffs | None = None, modulus: int | None = EXACT) -> QuarticTriple:
    """Map a system solution to a quartic solution.

    Candidates are (u, v, z u) and (v, w, z w); the first is preferred.  For
    a solution modulo p^k with p^2 not dividing d the first primitive
    candidate is returned.
    """
    if isinstance(s, SolutionQuadruple):
        modulus = s.modulus if modulus is None else modulus
    u, v, w, z = s
    cands = [QuarticTriple(u, v, z * u, modulus), QuarticTriple(v, w, z * w, modulus)]
    if modulus is None:
        for t in cands:
            if not t.is_trivial():
                return t
        raise InvalidInput("trivial system solution")
    if coeffs is None:
        raise InvalidInput("coefficients are needed for modular inputs")
    p = _prime_power_base(modulus)
    if coeffs.d % (p * p) == 0:
        raise NoPrimitiveImage(f"p^2 = {p * p} divides d = {coeffs.d}")
    cands = [QuarticTriple(*(x % modulus for x in t), modulus) for t in cands]
    for t in cands:
        if t.is_primitive():
            return t
    raise NoPrimitiveImage(f"neither image of {tuple(s)} is primitive mod {modulus}")


def _prime_power_base(n: int) -> int:
    for p in range(2, math.isqrt(n) + 1):
        if n % p == 0:
            while n % p == 0:
                n //= p
            if n != 1:
                raise InvalidInput("modulus must be a prime power")
            return p
    return n


def primitive_quartic_solution_mod(coeffs, N: int):
    """Some primitive (x, y, z) mod the prime power N, or None (exhaustive).

    Scales the first unit coordinate to 1: x = 1; or p | x, y = 1; or
    p | x, y and z = 1.
    """
    a, b, c, d = (t % N for t in coeffs)
    p = _prime_power_base(N)
    zz = np.arange(N, dtype=np.int64)
    zmin = np.full(N, -1, dtype=np.int64)
    vals, first = np.unique(d * (zz * zz % N) % N, return_index=True)
    zmin[vals] = first
    y = np.arange(N, dtype=np.int64)
    y2 = y * y % N
    hit = zmin[(a + b * y2 + c * (y2 * y2 % N)) % N]
    if (hit >= 0).any():
        i = int(np.argmax(hit >= 0))
        return (1, i, int(hit[i]))
    x = y[::p]
    x2 = x * x % N
    hit = zmin[(a * (x2 * x2 % N) + b * x2 + c) % N]
    if (hit >= 0).any():
        i = int(np.argmax(hit >= 0))
        return (int(x[i]), 1, int(hit[i]))
    for xi in x.tolist():
        xi2 = xi * xi % N
        vals = (a * (xi2 * xi2 % N) + b * xi2 * x2 + c * (x2 * x2 % N) - d) % N
        if (vals == 0).any():
            return (xi, int(x[int(np.argmax(vals == 0))]), 1)
    return None


def binary_form_primitive_zero(coeffs: Sequence[int], N: int):
    """Some primitive (X, Y) mod the prime power N with F(X, Y) == 0, or None.

    ``coeffs`` lists F = sum c_i X^(n-i) Y^i from c_0.  Exhaustive over the
    normalised pairs (1, y) and (x, 1) with p | x.
    """
    p = _prime_power_base(N)
    t = np.arange(N, dtype=np.int64)
    # F(1, y): Horner in y over reversed coefficients
    acc = np.zeros(N, dtype=np.int64)
    for cf in reversed(coeffs):
        acc = (acc * t + cf) % N
    if (acc == 0).any():
        return (1, int(np.argmax(acc == 0)))
    xs = t[::p]
    acc = np.zeros(xs.size, dtype=np.int64)
    for cf in coeffs:
        acc = (acc * xs + cf) % N
    if (acc == 0).any():
        return (int(xs[int(np.argmax(acc == 0))]), 1)
    return None


def expand_product(factors: Sequence[Sequence[int]]) -> list[int]:
    """Multiply binary forms given as coefficient lists (X-degree descending)."""
    out = [1]
    for f in factors:
        nxt = [0] * (len(out) + len(f) - 1)
        for i, x in enumerate(out):
            for j, y in enumerate(f):
                nxt[i + j] += x * y
        out = nxt
    return out


@dataclass
class TransferRecord:
    domain: str
    coeffs: tuple[int, int, int, int]
    equivalent: bool
    hypotheses: list[str] = field(default_factory=list)
    system_solvable: bool | None = None
    quartic_solvable: bool | None = None
    system_witness: tuple | None = None
    quartic_witness: tuple | None = None

    def to_dict(self) -> dict:
        return {
            "domain": self.domain,
            "coeffs": list(self.coeffs),
            "equivalent": self.equivalent,
            "hypotheses": self.hypotheses,
            "system_solvable": self.system_solvable,
            "quartic_solvable": self.quartic_solvable,
            "system_witness": list(self.system_witness) if self.system_witness else None,
            "quartic_witness": list(self.quartic_witness) if self.quartic_witness else None,
        }


def transfer_verdict(coeffs: Sequence[int], domain: str, p: int | None = None, k: int = 1,
                     height: int = 30) -> TransferRecord:
    """Solvability of the system and of the quartic in one domain, side by side.

    ``domain`` is one of "exact", "real", "fp" (needs p) or "mod" (needs p and
    k > 1 with p^2 not dividing d).  Witnesses found for either side are
    recorded; the two verdicts are computed independently and must agree.
    """
    a, b, c, d = coeffs
    tup = (a, b, c, d)
    if d == 0:
        return TransferRecord(domain, tup, True, ["d = 0"], True, True, (0, 0, 0, 1), (0, 0, 1))
    if domain == "exact":
        return _transfer_exact(tup, height)
    if domain == "real":
        from .local import real_solvable

        if a * c == 0:
            raise InvalidInput("real transfer needs a*c != 0")
        sys_ok, how = real_solvable(SystemCoeffs(*tup))
        q_ok = _quartic_real(tup)
        return TransferRecord(domain, tup, sys_ok == q_ok, ["integral domain R"], sys_ok, q_ok)
    if p is None:
        raise InvalidInput(f"domain {domain} needs a prime p")
    if domain == "fp":
        sys_w = _first_fp_system(tup, p)
        q_w = _first_fp_quartic(tup, p)
        return TransferRecord(domain, tup, (sys_w is None) == (q_w is None), ["integral domain F_p"],
                              sys_w is not None, q_w is not None, sys_w, q_w)
    if domain == "mod":
        if k <= 1:
            raise InvalidInput("modular transfer needs k > 1")
        if d % (p * p) == 0:
            raise InvalidInput("modular transfer needs p^2 not dividing d")
        from .local import primitive_solution_mod_pk

        N = p**k
        sys_w = primitive_solution_mod_pk(SystemCoeffs(*tup), p, k) if a * c else None
        q_w = primitive_quartic_solution_mod(tup, N)
        return TransferRecord(domain, tup, (sys_w is None) == (q_w is None),
                              [f"k = {k} > 1", f"p^2 = {p * p} does not divide d"],
                              sys_w is not None, q_w is not None, sys_w, q_w)
    raise InvalidInput(f"unknown domain {domain!r}")


def _quartic_real(coeffs) -> bool:
    # a X^4 + b X^2 Y^2 + c Y^4 = d Z^2 over R; put s = X^2 / Y^2.
    a, b, c, d = coeffs
    if a * d > 0 or c * d > 0:
        return True
    from fractions import Fraction

    if a * b < 0:
        s = Fraction(-b, 2 * a)
        return d * (a * s * s + b * s + c) >= 0
    return False


def _first_fp_system(coeffs, p: int):
    from .conics import brute_force_fp_solutions

    return next(brute_force_fp_solutions(coeffs, p), None)


def _first_fp_quartic(coeffs, p: int):
    for x in range(p):
        for y in range(p):
            for z in range(p):
                if (x or y or z) and quartic_residual(coeffs, x, y, z) % p == 0:
                    return (x, y, z)
    return None


def _transfer_exact(coeffs, height: int) -> TransferRecord:
    from .counterexamples import global_search_height, obstruction_applies

    a, b, c, d = coeffs
    sys_w = global_search_height(SystemCoeffs(*coeffs), height) if a * c else None
    q_w = None
    if sys_w is not None:
        q_w = tuple(system_to_quartic(sys_w))
    hyps = ["integral domain Z", f"height <= {height}"]
    solvable = True if sys_w is not None else None
    if sys_w is None and obstruction_applies(coeffs):
        solvable = False
        hyps.append("fourth-power obstruction at q = -c")
    return TransferRecord("exact", coeffs, True, hyps, solvable, solvable, sys_w, q_w)
