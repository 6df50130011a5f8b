"""p-local and real solvability of a U^2 + c W^2 = d Z^2, UW = V^2.

The p-local decision follows the classical reduction: equivalence moves
bring (a, c, d) to a shape with p not dividing a, p^4 not dividing c and
p^2 not dividing d, after which solvability is decided by the existence of
a strong solution modulo p (odd p) or modulo 16 (p = 2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .conics import solve_system_fp
from .errors import BudgetExceeded, InvalidInput
from .modarith import (
    _legendre,
    _sqrt_mod_p,
    factorize,
    fourth_root_mod_p,
    is_fourth_power_mod_p,
    is_prime,
)
from .system import SystemCoeffs, is_strong_solution

FACTOR_BUDGET = 10**12
BRUTE_FORCE_BUDGET = 10**4

CASE_PLAIN = "(a,c,d)"
CASE_CP = "(a,cp,d)"
CASE_DP = "(a,c,dp)"
CASE_CP2 = "(a,cp^2,d)"
CASE_CP3 = "(a,cp^3,d)"
CASE_IMPOSSIBLE = "impossible"
CASE_TAGS = (CASE_PLAIN, CASE_CP, CASE_DP, CASE_CP3, CASE_CP2, CASE_IMPOSSIBLE)

_CASE_BY_VALUATION = {
    (0, 0): CASE_PLAIN,
    (1, 0): CASE_CP,
    (0, 1): CASE_DP,
    (3, 0): CASE_CP3,
    (2, 0): CASE_CP2,
    (2, 1): CASE_IMPOSSIBLE,
}


# ---------------------------------------------------------------- real place

def real_solvable(coeffs: SystemCoeffs) -> tuple[bool, str]:
    """Nontrivial real solvability, decided in closed form.

    W = 0 forces V = 0 and needs sign(a) = sign(d).  Otherwise scale W = 1 and
    put s = V^2 = U >= 0; a solution exists iff d * h(s) >= 0 somewhere on
    [0, oo) for h(s) = a s^2 + b s + c.  The maximum of d*h there is reached
    at s = 0, at infinity, or at the vertex.
    """
    a, b, c, d = coeffs.as_tuple()
    if a * d > 0:
        return True, "W = V = 0, U^2 = (d/a) Z^2 with d/a > 0"
    if c * d > 0:
        return True, "U = V = 0, W^2 = (d/c) Z^2 with d/c > 0"
    if b * a < 0:
        vertex = Fraction(-b, 2 * a)
        h = a * vertex**2 + b * vertex + c
        if d * h >= 0:
            return True, f"W = 1, U = V^2 = {vertex}, d*h(U) = {d * h} >= 0"
    return False, "a*U^2 + b*V^2 + c*W^2 never takes the sign of d on UW = V^2"


# ---------------------------------------------------------------- reduction

@dataclass(frozen=True)
class Move:
    name: str
    before: tuple[int, int, int]
    after: tuple[int, int, int]


@dataclass
class ReductionTranscript:
    p: int
    start: tuple[int, int, int]
    moves: list[Move] = field(default_factory=list)

    @property
    def final(self) -> tuple[int, int, int]:
        return self.moves[-1].after if self.moves else self.start

    def apply(self, name: str, after: tuple[int, int, int]) -> tuple[int, int, int]:
        self.moves.append(Move(name, self.final, after))
        return after

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "start": list(self.start),
            "moves": [{"move": m.name, "before": list(m.before), "after": list(m.after)} for m in self.moves],
            "final": list(self.final),
        }


def reduce_system(a: int, c: int, d: int, p: int) -> ReductionTranscript:
    """Normalise (a, c, d) at p to p !| a, p^4 !| c, p^2 !| d.

    Each recorded move is one of the generators
    (a,c,d) ~ (c,a,d) ~ (pa,pc,pd) ~ (ap^2,cp^2,d) ~ (a,c,dp^2) ~ (ap^4,c,d) ~ (a,cp^4,d).
    """
    if a * c * d == 0:
        raise InvalidInput("a*c*d must be nonzero")
    if not is_prime(p):
        raise InvalidInput(f"{p} is not prime")
    tr = ReductionTranscript(p, (a, c, d))
    p2, p4 = p * p, p**4
    while True:
        a, c, d = tr.final
        if d % p2 == 0:
            tr.apply("(a,c,dp^2)->(a,c,d)", (a, c, d // p2))
        elif a % p == 0 and c % p == 0:
            if d % p:
                a, c, d = tr.apply("(a,c,d)->(a,c,dp^2)", (a, c, d * p2))
            tr.apply("(pa,pc,pd)->(a,c,d)", (a // p, c // p, d // p))
        else:
            break
    a, c, d = tr.final
    if a % p == 0:
        a, c, d = tr.apply("(a,c,d)->(c,a,d)", (c, a, d))
    while c % p4 == 0:
        a, c, d = tr.apply("(a,cp^4,d)->(a,c,d)", (a, c // p4, d))
    return tr


def _terminal_case(tr: ReductionTranscript) -> str:
    """Finish the reduction of a normalised transcript and return its case tag.

    (a, cp, dp) and (a, cp^3, dp) are rewritten to (c, ap^3, d) and (c, ap, d).
    """
    p = tr.p
    p2, p4 = p * p, p**4
    a, c, d = tr.final
    key = (_val(c, p), _val(d, p))
    if key == (1, 1):
        a, c, d = tr.apply("(a,c,d)->(ap^4,c,d)", (a * p4, c, d))
        a, c, d = tr.apply("(pa,pc,pd)->(a,c,d)", (a // p, c // p, d // p))
        tr.apply("(a,c,d)->(c,a,d)", (c, a, d))
        return CASE_CP3
    if key == (3, 1):
        a, c, d = tr.apply("(a,c,d)->(ap^4,c,d)", (a * p4, c, d))
        a, c, d = tr.apply("(pa,pc,pd)->(a,c,d)", (a // p, c // p, d // p))
        a, c, d = tr.apply("(a,c,d)->(a,c,dp^2)", (a, c, d * p2))
        a, c, d = tr.apply("(pa,pc,pd)->(a,c,d)", (a // p, c // p, d // p))
        a, c, d = tr.apply("(pa,pc,pd)->(a,c,d)", (a // p, c // p, d // p))
        tr.apply("(a,c,d)->(c,a,d)", (c, a, d))
        return CASE_CP
    return _CASE_BY_VALUATION[key]


def _val(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# ---------------------------------------------------------------- strong solutions

def strong_search_mod(coeffs: SystemCoeffs, m: int, restricted: bool = False):
    """Least strong solution in lexicographic order mod m, or None.

    ``m`` is an odd prime p or 16 (for p = 2).  With ``restricted`` and a, c, d
    odd the search is limited to u, v, w in {0, 1} and z in {0, 1, 2, 3}.
    """
    coeffs.require_b_zero()
    if m == 16:
        p = 2
    elif is_prime(m) and m != 2:
        p = m
    else:
        raise InvalidInput(f"modulus must be an odd prime or 16, got {m}")
    a, c, d = coeffs.a, coeffs.c, coeffs.d
    if restricted:
        if (a * c * d) % 2 == 0 or m != 16:
            raise InvalidInput("restricted search needs m = 16 and a, c, d odd")
        for u in (0, 1):
            for v in (0, 1):
                for w in (0, 1):
                    for z in range(4):
                        if is_strong_solution((u, v, w, z), coeffs, 2, 4):
                            return (u, v, w, z)
        return None
    zroots: dict[int, list[int]] = {}
    for z in range(m):
        zroots.setdefault(d * z * z % m, []).append(z)
    for u in range(m):
        for v in range(m):
            vv = v * v % m
            for w in range(m):
                if (u * w - vv) % m:
                    continue
                r = (a * u * u + c * w * w) % m
                for z in zroots.get(r, ()):
                    if not (u % p or v % p or w % p or z % p):
                        continue
                    if (a * u % p) or (c * w % p) or (d * z % p):
                        return (u, v, w, z)
    return None


def find_strong_mod_p(a: int, c: int, d: int, p: int):
    """Some strong solution mod the odd prime p of the system (a, c, d), or None.

    Coefficients may vanish mod p.  Tries, in order: the conic-sweep solver
    when p !| acd, then (m, 0, 0, 1), (0, 0, m, 1), (1, v, v^2, 0) and
    (v^2, v, 1, 0).  Every strong solution mod p is equivalent to one of
    these shapes, so None means no strong solution exists.
    """
    sc = SystemCoeffs.of(a, c, d)
    A, C, D = a % p, c % p, d % p
    if A and C and D:
        sol = solve_system_fp(a, c, d, p).as_tuple()
        if is_strong_solution(sol, sc, p, 1):
            return sol
    candidates = []
    if A:
        m = _sqrt_mod_p(D * pow(A, -1, p), p)
        if m is not None:
            candidates.append((m, 0, 0, 1))
    if C:
        m = _sqrt_mod_p(D * pow(C, -1, p), p)
        if m is not None:
            candidates.append((0, 0, m, 1))
        v = fourth_root_mod_p(-A * pow(C, -1, p), p)
        if v is not None:
            candidates.append((1, v, v * v % p, 0))
    if A:
        v = fourth_root_mod_p(-C * pow(A, -1, p), p)
        if v is not None:
            candidates.append((v * v % p, v, 1, 0))
    for sol in candidates:
        if is_strong_solution(sol, sc, p, 1):
            return sol
    return None


def _strong_witness(system: tuple[int, int, int], p: int):
    if p == 2:
        return strong_search_mod(SystemCoeffs.of(*system), 16)
    return find_strong_mod_p(*system, p)


@dataclass
class PLocalVerdict:
    p: int
    solvable: bool
    case: str
    transcript: ReductionTranscript
    witness: tuple[int, int, int, int] | None = None
    witness_system: tuple[int, int, int] | None = None

    @property
    def modulus(self) -> int:
        return 16 if self.p == 2 else self.p

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "solvable": self.solvable,
            "case": self.case,
            "witness": list(self.witness) if self.witness else None,
            "modulus": self.modulus if self.witness else None,
            "system": list(self.witness_system) if self.witness_system else None,
            "transcript": self.transcript.to_dict(),
        }


def decide_p_local(a: int, c: int, d: int, p: int) -> PLocalVerdict:
    """Decide p-local solvability of the system (a, c, d)."""
    tr = reduce_system(a, c, d, p)
    case = _terminal_case(tr)
    system = tr.final
    if case == CASE_IMPOSSIBLE:
        return PLocalVerdict(p, False, case, tr)
    wit = _strong_witness(system, p)
    if wit is not None:
        return PLocalVerdict(p, True, case, tr, wit, system)
    if case == CASE_CP2:
        A, C, D = system
        alt = (A * p * p, C // (p * p), D)
        wit = _strong_witness(alt, p)
        if wit is not None:
            return PLocalVerdict(p, True, case, tr, wit, alt)
    return PLocalVerdict(p, False, case, tr)


def fast_path_odd(a: int, c: int, d: int, p: int, case: str | None = None) -> bool | None:
    """Closed-form p-local verdict for a normalised system at an odd prime.

    ``(a, c, d)`` must satisfy p !| a, p^4 !| c, p^2 !| d.  Returns None for
    p = 2.  Writing c = c0 p^i and d = d0 p^j:

    (a,c,d): always solvable; (a,cp,d), (a,cp^3,d): a d0 is a square;
    (a,c,dp): -a c0^3 is a fourth power; (a,cp^2,d): a d0 or c0 d0 is a
    square; (a,cp^2,dp): never.  The shapes (a,cp,dp) and (a,cp^3,dp) are
    equivalent to (c,ap^3,d) and (c,ap,d), giving c0 d0 a square.
    """
    if p == 2:
        return None
    if not is_prime(p):
        raise InvalidInput(f"{p} is not prime")
    i, j = _val(c, p), _val(d, p)
    if a % p == 0 or i > 3 or j > 1:
        raise InvalidInput(f"({a}, {c}, {d}) is not normalised at p={p}")
    c0, d0 = c // p**i, d // p**j
    derived = _CASE_BY_VALUATION.get((i, j))
    if case is not None and case not in (derived, "(a,cp^2,dp)"):
        raise InvalidInput(f"case {case} does not match valuations ({i}, {j})")
    if (i, j) == (0, 0):
        return True
    if (i, j) in ((1, 0), (3, 0)):
        return _legendre(a * d0, p) == 1
    if (i, j) == (0, 1):
        return is_fourth_power_mod_p(-a * c0**3, p)
    if (i, j) == (2, 0):
        return _legendre(a * d0, p) == 1 or _legendre(c0 * d0, p) == 1
    if (i, j) == (2, 1):
        return False
    return _legendre(c0 * d0, p) == 1


# ---------------------------------------------------------------- full report

@dataclass
class LocalReport:
    coeffs: SystemCoeffs
    real: bool
    real_witness: str
    primes: list[PLocalVerdict]

    @property
    def locally_solvable(self) -> bool:
        return self.real and all(v.solvable for v in self.primes)

    def failing_places(self) -> list[str]:
        out = [] if self.real else ["real"]
        return out + [str(v.p) for v in self.primes if not v.solvable]

    def to_dict(self) -> dict:
        return {
            "coeffs": list(self.coeffs.as_tuple()),
            "locally_solvable": self.locally_solvable,
            "real": {"solvable": self.real, "witness": self.real_witness},
            "primes": [v.to_dict() for v in self.primes],
            "other_primes": "odd p not dividing acd: solvable (conic sweep + lifting)",
        }


def bad_primes(coeffs: SystemCoeffs, budget: int = FACTOR_BUDGET) -> list[int]:
    """2 together with every prime dividing a*c*d."""
    n = coeffs.a * coeffs.c * coeffs.d
    if abs(n) > budget:
        raise BudgetExceeded(f"|acd| = {abs(n)} exceeds the factorization budget {budget}")
    return sorted({2} | set(factorize(n)))


def decide_local(coeffs: SystemCoeffs, budget: int = FACTOR_BUDGET) -> LocalReport:
    """Local solvability report for a b = 0 system."""
    coeffs.require_b_zero()
    real, how = real_solvable(coeffs)
    verdicts = [decide_p_local(coeffs.a, coeffs.c, coeffs.d, p) for p in bad_primes(coeffs, budget)]
    return LocalReport(coeffs, real, how, verdicts)


# ---------------------------------------------------------------- oracles

def brute_force_primitive_mod(coeffs: SystemCoeffs, N: int, budget: int = BRUTE_FORCE_BUDGET):
    """Least primitive solution mod N in lexicographic (u, v, w, z) order, or None.

    Full enumeration; UW = V^2 is solved for w exactly so the cost is about
    N^2 rather than N^4.
    """
    if N < 2:
        raise InvalidInput("N must be >= 2")
    if N > budget:
        raise BudgetExceeded(f"modulus {N} exceeds brute-force budget {budget}")
    a, b, c, d = (x % N for x in coeffs.as_tuple())
    zroots: dict[int, list[int]] = {}
    for z in range(N):
        zroots.setdefault(d * z * z % N, []).append(z)
    zmin = np.full(N, -1, dtype=np.int64)
    for r, zs in zroots.items():
        zmin[r] = zs[0]
    vs_all = np.arange(N, dtype=np.int64)
    vsq_all = vs_all * vs_all % N
    for u in range(N):
        g = math.gcd(u, N)
        n_g = N // g
        ok = vsq_all % g == 0
        vs, vsq = vs_all[ok], vsq_all[ok]
        if vs.size == 0:
            continue
        inv = pow(u // g, -1, n_g) if n_g > 1 else 0
        w0 = (vsq // g) % n_g * inv % n_g if n_g > 1 else np.zeros_like(vs)
        ws = (w0[:, None] + np.arange(g, dtype=np.int64)[None, :] * n_g).ravel()
        vv = np.repeat(vs, g)
        vq = np.repeat(vsq, g)
        rhs = (a * u * u + b * vq + c * (ws * ws % N)) % N
        g3 = np.gcd(np.gcd(vv, ws), np.int64(math.gcd(u, N)))
        zs = zmin[rhs]
        good = (g3 == 1) & (zs >= 0)
        first = int(np.argmax(good)) if good.any() else len(vv)
        # entries before `first` whose u, v, w share a factor with N need a unit-compatible z
        for idx in np.nonzero((g3[:first] > 1) & (zs[:first] >= 0))[0]:
            g_uvw = int(g3[idx])
            for z in zroots[int(rhs[idx])]:
                if math.gcd(z, g_uvw) == 1:
                    return (u, int(vv[idx]), int(ws[idx]), z)
        if first < len(vv):
            return (u, int(vv[first]), int(ws[first]), int(zs[first]))
    return None


def primitive_solution_mod_pk(coeffs: SystemCoeffs, p: int, k: int):
    """Some primitive solution mod p^k, or None.

    Independent of the reduction machinery: a primitive solution can be
    scaled so that its first unit coordinate among u, w, z equals 1 (v is a
    unit only if u and w are), giving three normalised families to scan.
    """
    N = p**k
    a, b, c, d = (x % N for x in coeffs.as_tuple())
    dsq = np.full(N, -1, dtype=np.int64)
    zz = np.arange(N, dtype=np.int64)
    dsq[(d * (zz * zz % N)) % N] = zz
    v = np.arange(N, dtype=np.int64)
    v2 = v * v % N
    v4 = v2 * v2 % N
    # u = 1, w = v^2
    hit = dsq[(a + b * v2 + c * v4) % N]
    idx = np.nonzero(hit >= 0)[0]
    if idx.size:
        i = int(idx[0])
        return (1, i, int(v2[i]), int(hit[i]))
    # w = 1, p | v, u = v^2
    vp = v[::p]
    vp2 = vp * vp % N
    hit = dsq[(a * (vp2 * vp2 % N) + b * vp2 + c) % N]
    idx = np.nonzero(hit >= 0)[0]
    if idx.size:
        i = int(idx[0])
        return (int(vp2[i]), int(vp[i]), 1, int(hit[i]))
    # z = 1, p | u, v, w
    if k == 1:
        return (0, 0, 0, 1) if d == 0 else None
    if d % (p * p):
        return None
    mult = v[::p]
    vroot = np.full(N, -1, dtype=np.int64)
    vroot[(mult * mult % N)[::-1]] = mult[::-1]
    for u in mult.tolist():
        uw = u * mult % N
        ok = (vroot[uw] >= 0) & ((a * u * u + b * uw + c * (mult * mult % N) - d) % N == 0)
        idx = np.nonzero(ok)[0]
        if idx.size:
            i = int(idx[0])
            return (u, int(vroot[uw[i]]), int(mult[i]), 1)
    return None
