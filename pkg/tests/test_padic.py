import random

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from hasse.errors import BudgetExceeded, DerivativeVanishes, InvalidInput, RootSearchFailed
from hasse.local import primitive_solution_mod_pk
from hasse.padic import (
    PadicApprox,
    PolyOverZp,
    extendable_solutions,
    hensel_lift_root,
    p_local_solve_general,
    padic_add,
    padic_from_int,
    padic_mul,
    quartic_root_lift,
)
from hasse.system import SystemCoeffs

from helpers import is_primitive, is_solution


def test_padic_from_int_examples():
    assert padic_from_int(0, 5, 4).digits == (0, 0, 0, 0)
    assert padic_from_int(17, 2, 5).digits == (1, 1, 1, 1, 17)
    assert padic_from_int(-1, 3, 3).digits == (2, 8, 26)


def test_padic_ring_examples():
    x = padic_from_int(123, 7, 4)
    assert x + padic_from_int(0, 7, 4) == x
    assert padic_from_int(12, 7, 4) * padic_from_int(-9, 7, 4) == padic_from_int(-108, 7, 4)
    p = 5
    assert padic_from_int(1 + p, p, 3) * padic_from_int(1 - p, p, 3) == padic_from_int(1 - p * p, p, 3)
    with pytest.raises(InvalidInput):
        padic_add(padic_from_int(1, 5, 3), padic_from_int(1, 5, 4))
    with pytest.raises(InvalidInput):
        padic_mul(padic_from_int(1, 5, 3), padic_from_int(1, 7, 3))
    with pytest.raises(InvalidInput):
        PadicApprox(3, 2, (1, 5))


@given(st.integers(-10**9, 10**9), st.integers(-10**9, 10**9), st.sampled_from([2, 3, 5, 7, 101]),
       st.integers(1, 10))
def test_padic_homomorphism_and_coherence(a, b, p, K):
    x, y = padic_from_int(a, p, K), padic_from_int(b, p, K)
    s, m, d = x + y, x * y, x - y
    for z in (s, m, d, -x):
        assert z.is_coherent()
    assert s == padic_from_int(a + b, p, K)
    assert m == padic_from_int(a * b, p, K)
    assert d == padic_from_int(a - b, p, K)


def test_hensel_examples():
    f = PolyOverZp.from_ints((-2, 0, 1), 7, 2)
    assert hensel_lift_root(f, 3).digits == (3, 10)
    g = PolyOverZp.from_ints((-11, 1), 5, 4)
    assert hensel_lift_root(g, 1).value == 11
    with pytest.raises(DerivativeVanishes):
        hensel_lift_root(PolyOverZp.from_ints((-5, 0, 1), 5, 3), 0)


def test_hensel_root_is_unique():
    rng = random.Random(9)
    for _ in range(80):
        p = rng.choice([3, 5, 7, 11, 13])
        K = rng.randint(1, 3)
        coeffs = [rng.randrange(-30, 30) for _ in range(rng.randint(2, 5))]
        f = PolyOverZp.from_ints(coeffs, p, K)
        if f.degree < 1:
            continue
        df = f.derivative()
        for t0 in range(p):
            if f.eval_mod(t0, p) or df.eval_mod(t0, p) == 0:
                continue
            pK = p**K
            root = hensel_lift_root(f, t0)
            scan = [u for u in range(pK) if u % p == t0 and f.eval_mod(u, pK) == 0]
            assert scan == [root.value]


def test_quartic_root_lift_examples():
    r = quartic_root_lift(1, 0, -17, 19, 5, 3)
    assert r.digits[0] == 5 and (pow(r.value, 4) - 17) % 19**3 == 0
    with pytest.raises(InvalidInput):
        quartic_root_lift(1, 0, 13, 13, 1, 3)
    with pytest.raises(RootSearchFailed):
        quartic_root_lift(1, 0, -17, 13)


def test_p_local_solve_general_examples():
    for coeffs, p, K in (((1, 0, -17, 2), 3, 4), ((1, 1, 1, 1), 7, 3)):
        sol = p_local_solve_general(SystemCoeffs(*coeffs), p, K)
        for k in range(1, K + 1):
            assert is_solution(coeffs, sol.truncation(k), p**k)
            assert is_primitive(sol.truncation(k), p)
    with pytest.raises(InvalidInput):
        p_local_solve_general(SystemCoeffs(1, 0, -17, 2), 17)
    with pytest.raises(InvalidInput):
        p_local_solve_general(SystemCoeffs(1, 2, 1, 1), 3)


def test_p_local_solve_general_random():
    rng = random.Random(31)
    primes = list(sympy.primerange(3, 98))
    done = 0
    while done < 100:
        a, b, c, d = (rng.choice([x for x in range(-1000, 1001) if x]) for _ in range(4))
        p = rng.choice(primes)
        if (2 * a * c * d * (b * b - 4 * a * c)) % p == 0:
            continue
        done += 1
        sol = p_local_solve_general(SystemCoeffs(a, b, c, d), p, 6)
        for k in range(1, 7):
            assert is_solution((a, b, c, d), sol.truncation(k), p**k)
            assert is_primitive(sol.truncation(k), p)


def test_extendable_examples():
    assert extendable_solutions(SystemCoeffs(1, 0, 3, 7), 2, 3, 4) == []
    ext = extendable_solutions(SystemCoeffs(1, 0, -17, 2), 3, 1, 3)
    assert ext and all(is_solution((1, 0, -17, 2), s, 3) for s in ext)
    with pytest.raises(BudgetExceeded):
        extendable_solutions(SystemCoeffs(1, 0, -17, 2), 3, 1, 12)


@pytest.mark.parametrize("p, k", [(3, 1), (3, 2), (5, 1), (2, 2), (2, 3)])
def test_extendable_with_k_equal_lam_is_all_primitive(p, k):
    import itertools

    N = p**k
    for coeffs in ((1, 0, -17, 2), (1, 1, 3, 5), (2, 0, 3, 7)):
        direct = sorted(s for s in itertools.product(range(N), repeat=4)
                        if is_solution(coeffs, s, N) and is_primitive(s, p))
        assert extendable_solutions(SystemCoeffs(*coeffs), p, k, k) == direct


def test_finite_shadow_of_zp_solvability():
    rng = random.Random(12)
    for _ in range(40):
        p = rng.choice([2, 3, 5])
        K = {2: 6, 3: 4, 5: 3}[p]
        coeffs = SystemCoeffs.of(*(rng.choice([x for x in range(-50, 51) if x]) for _ in range(3)))
        has_point = primitive_solution_mod_pk(coeffs, p, K) is not None
        assert has_point == bool(extendable_solutions(coeffs, p, 1, K))
