import pytest
from hypothesis import given
from hypothesis import strategies as st

from hasse.errors import InvalidInput
from hasse.system import Classification, SystemCoeffs, classify_tuple, is_primitive_mod, is_strong_solution


def test_coefficients_validated():
    with pytest.raises(InvalidInput):
        SystemCoeffs(1, 0, 0, 1)
    with pytest.raises(InvalidInput):
        SystemCoeffs.of(1, 1, 0)
    with pytest.raises(InvalidInput):
        SystemCoeffs(1, 2, 1, 1).require_smooth()
    with pytest.raises(InvalidInput):
        SystemCoeffs(1, 2, 3, 1).require_b_zero()
    assert SystemCoeffs(1, 3, 2, 5).discriminant == 1


def test_satisfied_by():
    c = SystemCoeffs.of(1, -1, 2)
    assert c.satisfied_by((1, 1, 1, 0))
    assert not c.satisfied_by((1, 1, 1, 1))
    assert SystemCoeffs.of(1, 3, 7).satisfied_by((1, 1, 1, 2), 8)
    assert not SystemCoeffs.of(1, 3, 7).satisfied_by((1, 1, 1, 2), 16)


@given(st.tuples(*[st.integers(-100, 100)] * 4), st.sampled_from([2, 3, 5, 7]), st.integers(1, 3))
def test_classification_is_consistent(sol, p, k):
    coeffs = (1, 0, 3, 7)
    cls = classify_tuple(sol, coeffs, p, k)
    m = p**k
    if cls is Classification.TRIVIAL:
        assert all(x % m == 0 for x in sol)
    elif cls is Classification.NONTRIVIAL:
        assert not is_primitive_mod(sol, p) and any(x % m for x in sol)
    else:
        assert is_primitive_mod(sol, p)
        strong = any(x % p for x in (sol[0], 3 * sol[2], 7 * sol[3]))
        assert (cls is Classification.STRONG) == strong


def test_strong_needs_a_solution():
    assert not is_strong_solution((1, 0, 0, 0), (1, 3, 7), 2, 3)
    assert is_strong_solution((1, 1, 1, 2), (1, 0, 3, 7), 2, 3)
