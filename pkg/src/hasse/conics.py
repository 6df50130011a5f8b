"""Conics a x^2 + b y^2 = 1 over F_p and mod-p solutions of the full system.

Polynomials over F_p are coefficient tuples in ascending degree order,
``(c0, c1, c2)`` meaning ``c0 + c1*T + c2*T^2``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import IdentityCheckFailed, InvalidInput
from .modarith import _legendre, _require_odd_prime, _sqrt_mod_p, is_prime
from .system import SolutionQuadruple, SystemCoeffs, classify_tuple

Poly = tuple[int, ...]


@dataclass(frozen=True)
class ConicPoint:
    x0: int
    y0: int
    a: int
    b: int
    p: int

    def __post_init__(self):
        if (self.a * self.x0**2 + self.b * self.y0**2 - 1) % self.p:
            raise InvalidInput(f"({self.x0}, {self.y0}) is not on {self.a}x^2 + {self.b}y^2 = 1 mod {self.p}")


@dataclass(frozen=True)
class ConicParam:
    """q1, q2, q3 with a*q1^2 + b*q2^2 = q3^2 in F_p[T]."""

    p: int
    a: int
    b: int
    q1: Poly
    q2: Poly
    q3: Poly

    def at(self, t: int) -> tuple[int, int, int]:
        return tuple(poly_eval(q, t, self.p) for q in (self.q1, self.q2, self.q3))


def poly_trim(f: Poly) -> Poly:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return tuple(f)


def poly_degree(f: Poly) -> int:
    """Degree, with -1 for the zero polynomial."""
    return len(poly_trim(f)) - 1


def poly_eval(f: Poly, t: int, p: int) -> int:
    acc = 0
    for coef in reversed(f):
        acc = (acc * t + coef) % p
    return acc


def poly_add(f: Poly, g: Poly, p: int) -> Poly:
    n = max(len(f), len(g))
    f = tuple(f) + (0,) * (n - len(f))
    g = tuple(g) + (0,) * (n - len(g))
    return tuple((x + y) % p for x, y in zip(f, g))


def poly_scale(f: Poly, s: int, p: int) -> Poly:
    return tuple(s * x % p for x in f)


def poly_mul(f: Poly, g: Poly, p: int) -> Poly:
    out = [0] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        for j, y in enumerate(g):
            out[i + j] = (out[i + j] + x * y) % p
    return tuple(out)


def are_associates(f: Poly, g: Poly, p: int) -> bool:
    """True when f and g are nonzero and f = lambda * g for a unit lambda."""
    f, g = poly_trim([x % p for x in f]), poly_trim([x % p for x in g])
    if not f or not g or len(f) != len(g):
        return False
    n = len(f)
    return all((f[i] * g[j] - f[j] * g[i]) % p == 0 for i in range(n) for j in range(n))


def find_conic_point(a: int, b: int, p: int) -> ConicPoint:
    """A point on a x^2 + b y^2 = 1 over F_p.

    Scans y = 0, 1, ... and takes the least x for the first y that works,
    so a = 1 always yields (1, 0).
    """
    if not is_prime(p):
        raise InvalidInput(f"{p} is not prime")
    a, b = a % p, b % p
    if a == 0 or b == 0:
        raise InvalidInput("a and b must be nonzero mod p")
    if p == 2:
        return ConicPoint(1, 0, a, b, p)
    a_inv = pow(a, -1, p)
    for y in range(p):
        x = _sqrt_mod_p((1 - b * y * y) * a_inv, p)
        if x is not None:
            return ConicPoint(x, y, a, b, p)
    raise IdentityCheckFailed(f"no point on {a}x^2 + {b}y^2 = 1 over F_{p}")


def parametrize_conic(a: int, b: int, p: int, pt: ConicPoint | None = None) -> ConicParam:
    _require_odd_prime(p)
    a, b = a % p, b % p
    if a == 0 or b == 0:
        raise InvalidInput("a and b must be nonzero mod p")
    if pt is None:
        pt = find_conic_point(a, b, p)
    x0, y0 = pt.x0 % p, pt.y0 % p
    if (a * x0 * x0 + b * y0 * y0 - 1) % p:
        raise InvalidInput("base point is not on the conic")
    q1 = ((-a * x0) % p, (-2 * b * y0) % p, (b * x0) % p)
    q2 = ((a * y0) % p, (-2 * a * x0) % p, (-b * y0) % p)
    q3 = (a, 0, b)
    lhs = poly_add(poly_scale(poly_mul(q1, q1, p), a, p), poly_scale(poly_mul(q2, q2, p), b, p), p)
    if poly_trim(lhs) != poly_trim(poly_mul(q3, q3, p)):
        raise IdentityCheckFailed(f"a*q1^2 + b*q2^2 != q3^2 for a={a}, b={b}, p={p}")
    return ConicParam(p, a, b, q1, q2, q3)


def _sweep(q1: Poly, q2: Poly, q3: Poly, p: int) -> tuple[int, int, int, int]:
    # First t with (q1(t)/p) != -(q2(t)/p); then q1(t) q2(t) is a square.
    for t in range(p):
        f, g = poly_eval(q1, t, p), poly_eval(q2, t, p)
        if _legendre(f, p) != -_legendre(g, p):
            v = _sqrt_mod_p(f * g, p)
            return f, v, g, poly_eval(q3, t, p)
    raise IdentityCheckFailed("Legendre sweep found no admissible t")


def solve_general_fp(a: int, b: int, c: int, d: int, p: int) -> SolutionQuadruple:
    """Nontrivial F_p-solution of a U^2 + b V^2 + c W^2 = d Z^2, UW = V^2.

    Needs p odd and a*c*d*(b^2 - 4ac) nonzero mod p.  Completes the square
    in a X^2 + b XY + c Y^2 and parametrizes the resulting diagonal conic.
    """
    _require_odd_prime(p)
    if (a * c * d * (b * b - 4 * a * c)) % p == 0:
        raise InvalidInput(f"a*c*d*(b^2-4ac) vanishes mod {p}")
    d_inv = pow(d, -1, p)
    A, B, C = a * d_inv % p, b * d_inv % p, c * d_inv % p
    half_b_over_a = B * pow(2 * A, -1, p) % p
    C2 = (C - B * B * pow(4 * A, -1, p)) % p
    par = parametrize_conic(A, C2, p)
    q1 = poly_add(par.q1, poly_scale(par.q2, -half_b_over_a, p), p)
    u, v, w, z = _sweep(q1, par.q2, par.q3, p)
    coeffs = (a, c, d)
    return SolutionQuadruple(u, v, w, z, p, classify_tuple((u, v, w, z), coeffs, p, 1))


def solve_system_fp(a: int, c: int, d: int, p: int) -> SolutionQuadruple:
    """Nontrivial F_p-solution of a U^2 + c W^2 = d Z^2, UW = V^2 (p odd, p not dividing acd)."""
    _require_odd_prime(p)
    if (a * c * d) % p == 0:
        raise InvalidInput(f"a*c*d vanishes mod {p}")
    d_inv = pow(d, -1, p)
    par = parametrize_conic(a * d_inv, c * d_inv, p)
    u, v, w, z = _sweep(par.q1, par.q2, par.q3, p)
    return SolutionQuadruple(u, v, w, z, p, classify_tuple((u, v, w, z), (a, c, d), p, 1))


def brute_force_fp_solutions(coeffs: SystemCoeffs | tuple, p: int):
    """Yield every nontrivial solution mod p (p small); used as an oracle."""
    a, b, c, d = coeffs.as_tuple() if isinstance(coeffs, SystemCoeffs) else coeffs
    sq = {}
    for z in range(p):
        sq.setdefault(d * z * z % p, []).append(z)
    for u in range(p):
        for v in range(p):
            for w in range(p):
                if (u * w - v * v) % p:
                    continue
                for z in sq.get((a * u * u + b * v * v + c * w * w) % p, ()):
                    if u or v or w or z:
                        yield (u, v, w, z)
