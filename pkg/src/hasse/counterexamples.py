"""Global obstruction, counterexample certificates and bounded integer search.

The family is U^2 - q W^2 = d Z^2, UW = V^2 with q prime.  A certificate
bundles the four arithmetic conditions on (q, d), the local witnesses and
the fourth-power obstruction, serialised so that it can be re-checked
without this package (see :func:`verify_certificate`).
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
import sympy

from .errors import BudgetExceeded, IdentityCheckFailed, InvalidInput, PreconditionFailed
from .local import CASE_CP2, LocalReport, decide_local
from .modarith import factorize, is_fourth_power_mod_p, is_prime, is_squarefree, legendre
from .system import SystemCoeffs

FAMILIES = {"mod16": 16, "mod8": 8}
HEIGHT_BUDGET = 5000
CONDITION_TEXT = {
    "c1": "q is prime and q == 1 (mod {m})",
    "c2": "d is square-free, nonzero and prime to q",
    "c3": "d is a square but not a fourth power mod q",
    "c4": "q is a fourth power mod every odd prime dividing d",
}


@dataclass(frozen=True)
class SearchConfig:
    q_bound: int
    d_bound: int
    H: int = 0
    lam: int = 4
    family: str = "mod16"

    def __post_init__(self):
        if self.q_bound < 1 or self.d_bound < 1 or self.H < 0 or self.lam < 1:
            raise InvalidInput("search bounds must be positive")
        if self.family not in FAMILIES:
            raise InvalidInput(f"unknown family {self.family!r}")


@dataclass
class CounterexampleCertificate:
    q: int
    d: int
    family: str
    conditions: dict[str, bool]
    local: LocalReport
    obstruction: bool
    height_checked: int = 0

    @property
    def coeffs(self) -> SystemCoeffs:
        return SystemCoeffs(1, 0, -self.q, self.d)

    def to_dict(self) -> dict:
        primes = []
        for v in self.local.primes:
            primes.append({
                "p": v.p,
                "case": v.case,
                "witness": list(v.witness),
                "modulus": v.modulus,
                "system": list(v.witness_system),
                "transcript": v.transcript.to_dict(),
            })
        return {
            "q": self.q,
            "d": self.d,
            "family": self.family,
            "conditions": dict(self.conditions),
            "local": {"real": self.local.real, "primes": primes},
            "obstruction": self.obstruction,
            "height_checked": self.height_checked,
        }


# ---------------------------------------------------------------- conditions

def condition_flags(q: int, d: int, family: str = "mod16") -> dict[str, bool]:
    """The four conditions on (q, d); later flags are False once one fails."""
    m = FAMILIES[family]
    flags = {"c1": False, "c2": False, "c3": False, "c4": False}
    flags["c1"] = q > 2 and is_prime(q) and q % m == 1
    if not flags["c1"]:
        return flags
    flags["c2"] = d != 0 and d % q != 0 and is_squarefree(d)
    if not flags["c2"]:
        return flags
    flags["c3"] = legendre(d, q) == 1 and not is_fourth_power_mod_p(d, q)
    if not flags["c3"]:
        return flags
    flags["c4"] = all(is_fourth_power_mod_p(q, p) for p in factorize(abs(d)) if p != 2)
    return flags


def first_failing_condition(q: int, d: int, family: str = "mod16") -> str | None:
    for name, ok in condition_flags(q, d, family).items():
        if not ok:
            return name
    return None


def fourth_power_obstruction(q: int, d: int) -> bool:
    """True iff d is not a fourth power mod q.

    For a prime q == 1 (mod 8) and square-free d prime to q this rules out
    any nontrivial integer solution of U^2 - q W^2 = d Z^2, UW = V^2.
    """
    if not (is_prime(q) and q % 8 == 1):
        raise PreconditionFailed(f"q = {q} is not a prime == 1 mod 8")
    if d == 0 or not is_squarefree(d):
        raise PreconditionFailed(f"d = {d} is not square-free and nonzero")
    if d % q == 0:
        raise PreconditionFailed(f"q = {q} divides d = {d}")
    return not is_fourth_power_mod_p(d, q)


def obstruction_applies(coeffs) -> bool:
    """Whether the fourth-power obstruction proves (a, b, c, d) globally unsolvable."""
    a, b, c, d = coeffs
    if (a, b) != (1, 0) or c >= 0:
        return False
    try:
        return fourth_power_obstruction(-c, d)
    except PreconditionFailed:
        return False


# ---------------------------------------------------------------- integer search

def global_search_height(coeffs: SystemCoeffs, H: int):
    """Least nontrivial integer solution of height <= H, or None.

    Solutions come in sign classes (u, v, w, z) ~ (-u, -v, -w, z) ~ (u, v, w, -z),
    and u w = v^2 forces u, w to share a sign, so the scan covers u, w, v, z >= 0.
    The answer minimises (max(u, v, w, z), u, v, w, z); a least-height solution
    is automatically primitive.
    """
    if H < 0:
        raise InvalidInput("H must be nonnegative")
    if H > HEIGHT_BUDGET:
        raise BudgetExceeded(f"height {H} exceeds budget {HEIGHT_BUDGET}")
    a, b, c, d = coeffs.as_tuple()
    if 3 * max(abs(a), abs(b), abs(c), abs(d)) * (H + 1) ** 2 >= 1 << 62:
        raise BudgetExceeded("coefficients too large for a 64-bit scan")
    r = np.arange(H + 1, dtype=np.int64)
    u, w = np.meshgrid(r, r, indexing="ij")
    uw = u * w
    v = np.rint(np.sqrt(uw.astype(np.float64))).astype(np.int64)
    ok = (v * v == uw) & (v <= H)
    rhs = a * u * u + b * v * v + c * w * w
    ok &= rhs % d == 0
    q = np.where(ok, rhs // d, -1)
    ok &= q >= 0
    z = np.rint(np.sqrt(np.maximum(q, 0).astype(np.float64))).astype(np.int64)
    ok &= (z * z == q) & (z <= H)
    ok &= (u | v | w | z) != 0
    if not ok.any():
        return None
    idx = np.nonzero(ok)
    cands = zip(u[idx].tolist(), v[idx].tolist(), w[idx].tolist(), z[idx].tolist())
    best = min(cands, key=lambda s: (max(s), s))
    if not coeffs.satisfied_by(best):
        raise IdentityCheckFailed(f"scan hit {best} fails exact substitution")
    return best


# ---------------------------------------------------------------- certificates

def certify_counterexample(q: int, d: int, family: str = "mod16", height: int = 0):
    """A certificate for (q, d), or None when a condition fails.

    Local solvability is decided from scratch rather than inferred from the
    conditions; an optional integer search to ``height`` is recorded too.
    """
    if family not in FAMILIES:
        raise InvalidInput(f"unknown family {family!r}")
    flags = condition_flags(q, d, family)
    if not all(flags.values()):
        return None
    coeffs = SystemCoeffs(1, 0, -q, d)
    report = decide_local(coeffs)
    if not report.locally_solvable:
        return None
    obstruction = fourth_power_obstruction(q, d)
    if height and global_search_height(coeffs, height) is not None:
        raise IdentityCheckFailed(f"integer solution found for obstructed (q, d) = ({q}, {d})")
    return CounterexampleCertificate(q, d, family, flags, report, obstruction, height)


def _certify_row(args):
    q, d_bound, family, H = args
    out = []
    for d in range(-d_bound, d_bound + 1):
        cert = certify_counterexample(q, d, family, H)
        if cert is not None:
            out.append(cert)
    return out


def candidate_primes(q_bound: int, family: str = "mod16") -> list[int]:
    m = FAMILIES[family]
    return [q for q in range(m + 1, q_bound + 1, m) if is_prime(q)]


def search_counterexamples(cfg: SearchConfig, workers: int | None = 1):
    """All certificates with q <= q_bound, |d| <= d_bound in (q, d) order."""
    qs = candidate_primes(cfg.q_bound, cfg.family)
    jobs = [(q, cfg.d_bound, cfg.family, cfg.H) for q in qs]
    workers = workers or os.cpu_count() or 1
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as ex:
            rows = list(ex.map(_certify_row, jobs))
    else:
        rows = [_certify_row(j) for j in jobs]
    return [c for row in rows for c in row]


# ---------------------------------------------------------------- verification

def _move_ok(name: str, before, after, p: int) -> bool:
    a, c, d = before
    p2, p4 = p * p, p**4
    if name == "(a,c,dp^2)->(a,c,d)":
        return d % p2 == 0 and tuple(after) == (a, c, d // p2)
    if name == "(a,c,d)->(a,c,dp^2)":
        return tuple(after) == (a, c, d * p2)
    if name == "(pa,pc,pd)->(a,c,d)":
        return a % p == c % p == d % p == 0 and tuple(after) == (a // p, c // p, d // p)
    if name == "(a,c,d)->(c,a,d)":
        return tuple(after) == (c, a, d)
    if name == "(a,cp^4,d)->(a,c,d)":
        return c % p4 == 0 and tuple(after) == (a, c // p4, d)
    if name == "(a,c,d)->(ap^4,c,d)":
        return tuple(after) == (a * p4, c, d)
    return False


def _strong_ok(system, sol, p: int, m: int) -> bool:
    a, c, d = system
    u, v, w, z = sol
    if (u * w - v * v) % m or (a * u * u + c * w * w - d * z * z) % m:
        return False
    if math.gcd(math.gcd(math.gcd(u, v), math.gcd(w, z)), p) != 1:
        return False
    return any(x % p for x in (a * u, c * w, d * z))


def verify_certificate(cert: dict) -> tuple[bool, str | None]:
    """Re-check a serialised certificate; returns (valid, first failing check).

    Uses sympy for primality and factoring and plain pow for residue tests,
    so it shares no arithmetic with the code that built the certificate.
    """
    try:
        q, d = int(cert["q"]), int(cert["d"])
        family = cert.get("family", "mod16")
        m = FAMILIES[family]
        if not (q > 2 and sympy.isprime(q) and q % m == 1):
            return False, "condition c1: " + CONDITION_TEXT["c1"].format(m=m)
        fac = sympy.factorint(abs(d)) if d else {0: 2}
        if d == 0 or d % q == 0 or any(e > 1 for e in fac.values()):
            return False, "condition c2: " + CONDITION_TEXT["c2"]
        if pow(d, (q - 1) // 2, q) != 1 or pow(d, (q - 1) // 4, q) == 1:
            return False, "condition c3: " + CONDITION_TEXT["c3"]
        for p in fac:
            if p != 2 and pow(q, (p - 1) // math.gcd(4, p - 1), p) != 1:
                return False, f"condition c4: q is not a fourth power mod {p}"
        conds = cert.get("conditions", {})
        if any(conds.get(k) is not True for k in ("c1", "c2", "c3", "c4")):
            return False, "recorded conditions are not all true"
        if cert.get("obstruction") is not True:
            return False, "obstruction flag"
        local = cert["local"]
        if local.get("real") is not True or not (d > 0 or -q * d > 0):
            return False, "real solvability"
        start = (1, -q, d)
        need = {2} | set(sympy.factorint(abs(q * d)))
        listed = [int(e["p"]) for e in local["primes"]]
        if sorted(listed) != sorted(need):
            return False, f"local primes {sorted(listed)} != {sorted(need)}"
        for e in local["primes"]:
            p = int(e["p"])
            tr = e["transcript"]
            cur = tuple(tr["start"])
            if cur != start or int(tr["p"]) != p:
                return False, f"p={p}: transcript start"
            for mv in tr["moves"]:
                if tuple(mv["before"]) != cur or not _move_ok(mv["move"], cur, mv["after"], p):
                    return False, f"p={p}: invalid move {mv['move']}"
                cur = tuple(mv["after"])
            system = tuple(e["system"])
            if system != cur:
                A, C, D = cur
                alt = (A * p * p, C // (p * p), D)
                if not (e.get("case") == CASE_CP2 and C % (p * p) == 0 and C % p**3 and system == alt):
                    return False, f"p={p}: witness system does not match the reduction"
            mod = 16 if p == 2 else p
            if int(e["modulus"]) != mod:
                return False, f"p={p}: modulus"
            if not _strong_ok(system, tuple(int(x) for x in e["witness"]), p, mod):
                return False, f"p={p}: witness is not a strong solution mod {mod}"
        return True, None
    except (KeyError, TypeError, ValueError) as exc:
        return False, f"malformed certificate: {exc}"
