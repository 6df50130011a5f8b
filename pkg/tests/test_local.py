import itertools
import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from hasse.errors import BudgetExceeded, InvalidInput
from hasse.counterexamples import _move_ok
from hasse.local import (
    CASE_CP,
    CASE_CP2,
    CASE_CP3,
    CASE_DP,
    CASE_IMPOSSIBLE,
    CASE_PLAIN,
    bad_primes,
    brute_force_primitive_mod,
    decide_local,
    decide_p_local,
    fast_path_odd,
    primitive_solution_mod_pk,
    real_solvable,
    reduce_system,
    strong_search_mod,
)
from hasse.system import Classification, SystemCoeffs, classify_tuple, is_strong_solution

from helpers import is_primitive, is_solution, oracle_p_local


# ---------------------------------------------------------------- real place

def test_real_solvable_examples():
    assert real_solvable(SystemCoeffs(1, 0, -17, 2))[0]
    assert not real_solvable(SystemCoeffs(-1, 0, -1, 1))[0]
    assert real_solvable(SystemCoeffs(1, 0, 3, 7))[0]


def _sympy_real(a, b, c, d):
    s = sympy.Symbol("s", real=True)
    region = sympy.solveset(d * (a * s**2 + b * s + c) >= 0, s, sympy.Interval(0, sympy.oo))
    return region != sympy.EmptySet


def test_real_solvable_matches_inequality_solver():
    rng = random.Random(2)
    for _ in range(150):
        a, b, c, d = (rng.choice([x for x in range(-9, 10) if x]) for _ in range(4))
        if rng.random() < 0.3:
            b = 0
        assert real_solvable(SystemCoeffs(a, b, c, d))[0] == _sympy_real(a, b, c, d), (a, b, c, d)


def test_real_tangent_case():
    # h(s) = s^2 - 2s + 1 touches 0 at s = 1 while d < 0: (1, 1, 1, 0) is a real solution
    assert real_solvable(SystemCoeffs(1, -2, 1, -1))[0]


# ---------------------------------------------------------------- reduction

def _transcript_ok(tr):
    cur = tr.start
    for mv in tr.moves:
        assert mv.before == cur
        assert _move_ok(mv.name, mv.before, mv.after, tr.p), mv
        cur = mv.after
    return cur


def test_reduce_examples():
    # p^2 on a alone is not removable: the unit coefficient is swapped to the front
    tr = reduce_system(17 * 25, 3, 2, 5)
    assert tr.final == (3, 17 * 25, 2)
    assert _transcript_ok(tr) == tr.final
    tr = reduce_system(17, 5, 25, 5)
    a, c, d = tr.final
    assert a % 5 and d % 25
    tr = reduce_system(3, 48, 2, 2)
    assert tr.final == (3, 3, 2)
    with pytest.raises(InvalidInput):
        reduce_system(1, 0, 2, 3)


@settings(max_examples=400)
@given(st.sampled_from([2, 3, 5, 7]), st.integers(-10**5, 10**5), st.integers(-10**5, 10**5),
       st.integers(-10**5, 10**5))
def test_reduce_normalises_with_valid_moves(p, a, c, d):
    if a * c * d == 0:
        return
    tr = reduce_system(a, c, d, p)
    A, C, D = _transcript_ok(tr)
    assert A % p and C % p**4 and D % (p * p)


# ---------------------------------------------------------------- strong search

def test_strong_search_examples():
    assert strong_search_mod(SystemCoeffs(1, 0, -17, 2), 16) == (1, 1, 1, 0)
    assert strong_search_mod(SystemCoeffs(1, 0, 3, 7), 16) is None
    sol = strong_search_mod(SystemCoeffs(1, 0, 1, 1), 5)
    assert sol is not None and is_strong_solution(sol, SystemCoeffs(1, 0, 1, 1), 5, 1)
    with pytest.raises(InvalidInput):
        strong_search_mod(SystemCoeffs(1, 0, 1, 1), 8)


def test_p_squared_on_a_alone_changes_solvability():
    # (9, 1, 2) has no primitive solution mod 27 although (1, 1, 2) does
    assert primitive_solution_mod_pk(SystemCoeffs.of(9, 1, 2), 3, 3) is None
    assert primitive_solution_mod_pk(SystemCoeffs.of(1, 1, 2), 3, 3) is not None
    assert not decide_p_local(9, 1, 2, 3).solvable
    assert decide_p_local(1, 1, 2, 3).solvable


def test_restricted_search_agrees_for_odd_coefficients():
    for a, c, d in itertools.product(range(1, 16, 2), repeat=3):
        coeffs = SystemCoeffs.of(a, c, d)
        full = strong_search_mod(coeffs, 16)
        small = strong_search_mod(coeffs, 16, restricted=True)
        assert (full is None) == (small is None)
        if small is not None:
            assert is_strong_solution(small, coeffs, 2, 4)


# ---------------------------------------------------------------- p-local decision

def test_decide_p_local_examples():
    v = decide_p_local(1, -17, 2, 17)
    assert v.solvable and v.witness == (6, 0, 0, 1) and v.modulus == 17
    for p in (3, 5, 7, 11):
        for a, c0, d0 in [(1, 1, 1), (2, 3, 1), (1, 2, 2)]:
            if (a * c0 * d0) % p:
                v = decide_p_local(a, p * p * c0, p * d0, p)
                assert not v.solvable and v.case == CASE_IMPOSSIBLE
    v = decide_p_local(1, 3, 7, 2)
    assert not v.solvable and v.witness is None


def test_decide_p_local_case_tags():
    p = 5
    assert decide_p_local(1, 2, 3, p).case == CASE_PLAIN
    assert decide_p_local(1, 2 * p, 3, p).case == CASE_CP
    assert decide_p_local(1, 2, 3 * p, p).case == CASE_DP
    assert decide_p_local(1, 2 * p**3, 3, p).case == CASE_CP3
    assert decide_p_local(1, 2 * p**2, 3, p).case == CASE_CP2
    assert decide_p_local(1, 2 * p, 3 * p, p).case == CASE_CP3
    assert decide_p_local(1, 2 * p**3, 3 * p, p).case == CASE_CP


def test_good_primes_are_solvable():
    for p in sympy.primerange(3, 200):
        for a, c, d in [(1, -17, 2), (1, 3, 7), (2, 5, -11)]:
            if (a * c * d) % p:
                assert decide_p_local(a, c, d, p).solvable


def _witness_ok(v):
    if not v.solvable:
        return v.witness is None
    coeffs = SystemCoeffs.of(*v.witness_system)
    k = 4 if v.p == 2 else 1
    return is_strong_solution(v.witness, coeffs, v.p, k)


def test_oracle_agreement_random():
    rng = random.Random(17)
    primes = list(sympy.primerange(3, 51))
    for _ in range(500):
        p = rng.choice(primes)
        a, c, d = (rng.choice([x for x in range(-100, 101) if x]) for _ in range(3))
        v = decide_p_local(a, c, d, p)
        depth = 4 if p <= 13 else 3
        if p > 13:
            # p^3 > 100, so no normalised c can carry valuation 3
            assert reduce_system(a, c, d, p).final[1] % p**3
        assert v.solvable == oracle_p_local(a, c, d, p, depth), (a, c, d, p)
        assert _witness_ok(v)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_oracle_agreement_all_valuation_patterns(p):
    units = [1, 3, 5, 7] if p == 2 else list(range(1, p))
    rng = random.Random(p)
    for i, j, l in itertools.product(range(4), repeat=3):
        for _ in range(6):
            a0, c0, d0 = (rng.choice(units) * rng.choice([1, -1]) for _ in range(3))
            a, c, d = a0 * p**i, c0 * p**j, d0 * p**l
            v = decide_p_local(a, c, d, p)
            assert v.solvable == oracle_p_local(a, c, d, p), (a, c, d, p)
            assert _witness_ok(v)


MOVES = [
    lambda a, c, d, p: (c, a, d),
    lambda a, c, d, p: (p * a, p * c, p * d),
    lambda a, c, d, p: (a * p * p, c * p * p, d),
    lambda a, c, d, p: (a, c, d * p * p),
    lambda a, c, d, p: (a * p**4, c, d),
    lambda a, c, d, p: (a, c * p**4, d),
]


def test_equivalence_moves_preserve_verdicts():
    rng = random.Random(23)
    for _ in range(1000):
        p = rng.choice([2, 3, 5, 7, 11, 13])
        a, c, d = (rng.choice([x for x in range(-50, 51) if x]) for _ in range(3))
        before = decide_p_local(a, c, d, p).solvable
        a2, c2, d2 = rng.choice(MOVES)(a, c, d, p)
        assert decide_p_local(a2, c2, d2, p).solvable == before


# ---------------------------------------------------------------- fast paths

def test_fast_path_examples():
    assert fast_path_odd(1, 2, 3, 5, CASE_PLAIN) is True
    assert fast_path_odd(1, 5, 1, 5) is True
    assert fast_path_odd(1, 1, 5, 5) is False
    assert decide_p_local(1, 1, 5, 5).solvable is False
    assert fast_path_odd(1, 1, 1, 2) is None
    with pytest.raises(InvalidInput):
        fast_path_odd(5, 1, 1, 5)
    with pytest.raises(InvalidInput):
        fast_path_odd(1, 5, 1, 5, CASE_DP)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_fast_path_agrees_with_decision(p):
    for i, j in itertools.product(range(4), range(2)):
        for a, c0, d0 in itertools.product(range(1, p), repeat=3):
            c, d = c0 * p**i, d0 * p**j
            assert fast_path_odd(a, c, d, p) == decide_p_local(a, c, d, p).solvable


# ---------------------------------------------------------------- full report

def test_decide_local_examples():
    rep = decide_local(SystemCoeffs(1, 0, -17, 2))
    assert rep.locally_solvable
    wit = {v.p: (v.witness, v.modulus) for v in rep.primes}
    assert wit == {2: ((1, 1, 1, 0), 16), 17: ((6, 0, 0, 1), 17)}
    rep = decide_local(SystemCoeffs(1, 0, 3, 7))
    assert not rep.locally_solvable and rep.failing_places() == ["2"]
    assert decide_local(SystemCoeffs(1, 0, -17, 19)).locally_solvable
    with pytest.raises(InvalidInput):
        decide_local(SystemCoeffs(1, 1, 1, 1))
    with pytest.raises(BudgetExceeded):
        decide_local(SystemCoeffs(1, 0, 10**7, 10**7))


def test_report_flag_is_conjunction():
    rng = random.Random(4)
    for _ in range(200):
        a, c, d = (rng.choice([x for x in range(-60, 61) if x]) for _ in range(3))
        rep = decide_local(SystemCoeffs.of(a, c, d))
        assert rep.locally_solvable == (rep.real and all(v.solvable for v in rep.primes))
        assert [v.p for v in rep.primes] == bad_primes(SystemCoeffs.of(a, c, d))
        assert all(_witness_ok(v) for v in rep.primes)


def test_brute_force_examples():
    c = SystemCoeffs(1, 0, 3, 7)
    assert brute_force_primitive_mod(c, 8) == (1, 1, 1, 2)
    assert brute_force_primitive_mod(c, 16) is None
    sol = brute_force_primitive_mod(SystemCoeffs(1, 0, -17, 2), 81)
    assert sol is not None and is_solution((1, 0, -17, 2), sol, 81) and is_primitive(sol, 3)
    with pytest.raises(BudgetExceeded):
        brute_force_primitive_mod(c, 10**5)


@pytest.mark.parametrize("p, k", [(2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2)])
def test_brute_force_and_normalised_oracle_agree(p, k):
    rng = random.Random(p * 10 + k)
    N = p**k
    for _ in range(25):
        coeffs = SystemCoeffs.of(*(rng.choice([x for x in range(-40, 41) if x]) for _ in range(3)))
        bf = brute_force_primitive_mod(coeffs, N)
        fast = primitive_solution_mod_pk(coeffs, p, k)
        assert (bf is None) == (fast is None)
        for sol in (bf, fast):
            if sol is not None:
                assert is_solution(coeffs.as_tuple(), sol, N) and is_primitive(sol, p)


def test_decide_local_soundness_spot_check():
    rng = random.Random(8)
    for _ in range(60):
        coeffs = SystemCoeffs.of(*(rng.choice([x for x in range(-30, 31) if x]) for _ in range(3)))
        for N in (8, 16, 9, 27, 25):
            if brute_force_primitive_mod(coeffs, N) is None:
                assert not decide_local(coeffs).locally_solvable
