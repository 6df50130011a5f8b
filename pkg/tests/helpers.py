"""Shared oracles for the test suite."""
import math

from hasse.local import primitive_solution_mod_pk, reduce_system
from hasse.system import SystemCoeffs


def oracle_depth(p: int) -> int:
    # primitive solutions mod p^4 (mod 2^6 at p = 2) decide normalised systems
    return 6 if p == 2 else 4


def oracle_p_local(a: int, c: int, d: int, p: int, depth: int | None = None) -> bool:
    """p-local solvability by exhaustive search on the normalised system.

    The system is first brought to p !| a, p^4 !| c, p^2 !| d by the
    equivalence moves, then a primitive solution is sought mod p^k for every
    k up to the depth.
    """
    A, C, D = reduce_system(a, c, d, p).final
    coeffs = SystemCoeffs.of(A, C, D)
    depth = depth or oracle_depth(p)
    return all(primitive_solution_mod_pk(coeffs, p, k) is not None for k in range(1, depth + 1))


def is_solution(coeffs, sol, m) -> bool:
    a, b, c, d = coeffs
    u, v, w, z = sol
    return (u * w - v * v) % m == 0 and (a * u * u + b * v * v + c * w * w - d * z * z) % m == 0


def is_primitive(sol, p) -> bool:
    g = 0
    for x in sol:
        g = math.gcd(g, x)
    return math.gcd(g, p) == 1
