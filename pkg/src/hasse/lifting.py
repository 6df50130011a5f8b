"""Lifting roots and strong solutions from mod p (or mod 16) to mod p^k."""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidInput, NotStrong, PreconditionFailed
from .modarith import LiftRequest, is_prime, rth_root_mod_p
from .system import Classification, SolutionQuadruple, SystemCoeffs, classify_tuple


@dataclass(frozen=True)
class StrongSolutionChain:
    """Strong solutions mod p^k, one per exponent.

    Entries are built independently for each k, so entry k+1 need not reduce
    to entry k.
    """

    p: int
    coeffs: SystemCoeffs
    solutions: dict[int, SolutionQuadruple] = field(default_factory=dict)

    def __getitem__(self, k: int) -> SolutionQuadruple:
        return self.solutions[k]

    def exponents(self) -> list[int]:
        return sorted(self.solutions)


def lift_rth_power(req: LiftRequest) -> int:
    """An ``a`` with ``a**r == N (mod p**k)``.

    Starts from the least r-th root mod p and refines one p-adic digit at a
    time: if N = a^r + c p^j, solve r a^(r-1) x == c (mod p) and replace a by
    a + x p^j.
    """
    N, r, p, k = req.N, req.r, req.p, req.k
    if (r * N) % p == 0:
        raise PreconditionFailed(f"p={p} divides r*N={r * N}")
    a = rth_root_mod_p(N, r, p)
    if a is None:
        raise PreconditionFailed(f"{N} is not an {r}-th power modulo {p}")
    pj = p
    for _ in range(1, k):
        c = (N - pow(a, r)) // pj
        x = c * pow(r * pow(a, r - 1, p), -1, p) % p
        a += x * pj
        pj *= p
    return a % pj


def lift_fourth_power_2adic(N: int, k: int) -> int:
    """Least ``a`` in ``[0, 2**k)`` with ``a**4 == N (mod 2**k)``, for N == 1 (mod 16).

    The induction starts at a = 1 (mod 16); writing N = a^4 + c 2^j the next
    approximation is a + c 2^(j-2).  The result is then reduced to the least
    member of its class {+-a + i 2^(k-2)}, all of which are fourth roots.
    """
    if k < 1:
        raise InvalidInput("k must be >= 1")
    if N % 16 != 1:
        raise PreconditionFailed(f"{N} is not 1 modulo 16")
    if k <= 4:
        return 1
    a = 1
    for j in range(4, k):
        c = (N - a**4) >> j
        a = (a + (c % 2) * (1 << (j - 2))) % (1 << (j + 1))
    step = 1 << (k - 2)
    return min(s * a % step for s in (1, -1))


def classify_solution(s, coeffs: SystemCoeffs | tuple, p: int, k: int) -> Classification:
    return classify_tuple(s, coeffs, p, k)


def _normalize(coeffs: SystemCoeffs, base, p: int, m: int):
    # Returns (swapped, A, C, v, z) with the unit coordinate scaled to 1.
    u0, v0, w0, z0 = base
    a, c = coeffs.a, coeffs.c
    if (a * u0) % p:
        inv = pow(u0, -1, m)
        return False, a, c, v0 * inv, z0 * inv
    if (c * w0) % p:
        inv = pow(w0, -1, m)
        return True, c, a, v0 * inv, z0 * inv
    raise NotStrong("neither a*u nor c*w is a unit")


def lift_strong_solution(coeffs: SystemCoeffs, p: int, base, K: int) -> StrongSolutionChain:
    """Strong solutions mod p^k for every k up to K.

    ``base`` must be a strong solution mod p (p odd) or mod 16 (p = 2).  The
    coordinate normalised to 1 is u if a*u is a unit, otherwise w (with the
    roles of (a, U) and (c, W) exchanged).  Then m^4 == a^-1 (d z^2 - c v^4)
    is lifted and (m^2, m v, v^2, z) emitted.
    """
    coeffs.require_b_zero()
    if not is_prime(p):
        raise InvalidInput(f"{p} is not prime")
    base = tuple(base)
    m0, k0 = (16, 4) if p == 2 else (p, 1)
    if not coeffs.satisfied_by(base, m0) or classify_tuple(base, coeffs, p, k0) is not Classification.STRONG:
        raise NotStrong(f"{base} is not a strong solution modulo {m0}")
    swapped, A, C, v, z = _normalize(coeffs, base, p, m0)
    d = coeffs.d
    chain = StrongSolutionChain(p, coeffs)
    for k in range(k0, K + 1):
        pk = p**k
        vk, zk = v % pk, z % pk
        N = pow(A, -1, pk) * (d * zk * zk - C * pow(vk, 4, pk)) % pk
        if p == 2:
            m = lift_fourth_power_2adic(N, k)
        else:
            m = lift_rth_power(LiftRequest(N, 4, p, k))
        sol = (m * m % pk, m * vk % pk, vk * vk % pk, zk)
        if swapped:
            sol = (sol[2], sol[1], sol[0], sol[3])
        cls = classify_tuple(sol, coeffs, p, k)
        if cls is not Classification.STRONG or not coeffs.satisfied_by(sol, pk):
            raise AssertionError(f"lift produced a non-strong solution {sol} mod {pk}")
        chain.solutions[k] = SolutionQuadruple(*sol, pk, cls)
    return chain
