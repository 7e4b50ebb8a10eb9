from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from muldep.errors import InvalidInputError
from muldep.polynomial import (IntPolynomial, cyclotomic, discriminant, orders_with_totient_at_most,
                               pdivmod, pmul, power_charpoly, ratio_poly, times_root_of_unity_poly,
                               totient)

x = sympy.Symbol("x")


def _sym(c):
    return sympy.Poly(list(reversed([sympy.Rational(v) for v in c])), x)


def test_int_polynomial_invariants():
    f = IntPolynomial((-2, 0, 1))
    assert f.degree == 2 and f.leading == 1 and f.naive_height == 2
    assert f.to_json() == [-2, 0, 1]
    with pytest.raises(InvalidInputError):
        IntPolynomial((2, 4))
    with pytest.raises(InvalidInputError):
        IntPolynomial((1, -1))
    assert IntPolynomial.normalize((4, 0, -2)).coeffs == (-2, 0, 1)


def test_cyclotomic_matches_sympy():
    for k in range(1, 40):
        assert _sym(cyclotomic(k)) == sympy.Poly(sympy.cyclotomic_poly(k, x), x)


def test_totient_and_orders():
    assert [totient(k) for k in range(1, 11)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4]
    assert orders_with_totient_at_most(2) == [1, 2, 3, 4, 6]
    assert sorted(k for k in orders_with_totient_at_most(4) if totient(k) == 4) == [5, 8, 10, 12]


def test_discriminant():
    assert discriminant((-2, 0, 0, 1)) == -108
    assert discriminant((-1, -3, 0, 1)) == 81
    assert discriminant((-1, -1, 1)) == 5


@given(st.lists(st.integers(-9, 9), min_size=2, max_size=5), st.integers(1, 4))
def test_power_charpoly_roots_are_powers(c, k):
    if c[-1] == 0 or c[0] == 0:
        return
    g = power_charpoly(c, k)
    f = _sym(c)
    # resultant identity: prod over roots of f of (y - r^k)
    y = sympy.Symbol("y")
    expected = sympy.resultant(f.as_expr(), y - x ** k, x)
    got = sympy.Poly(_sym(g).as_expr().subs(x, y), y)
    assert sympy.Poly(expected, y).monic() == got.monic()


def test_ratio_and_root_of_unity_polys():
    # x^2 - 2: ratios of roots are 1, 1, -1, -1
    r = _sym(ratio_poly((-2, 0, 1)))
    assert sympy.factor_list(r.as_expr())[1] and r.eval(-1) == 0 and r.eval(1) == 0
    # sqrt(2) * i has minimal polynomial x^2 + 2
    g = _sym(times_root_of_unity_poly((-2, 0, 1), 4))
    assert any(fac == sympy.Poly(x ** 2 + 2, x) for fac, _ in g.factor_list()[1])


@given(st.lists(st.integers(-20, 20), min_size=1, max_size=5),
       st.lists(st.integers(-20, 20), min_size=2, max_size=4))
def test_divmod_roundtrip(p, q):
    if q[-1] == 0:
        return
    quo, rem = pdivmod(p, q)
    lhs = _sym(pmul(quo, q)) + _sym(rem) if rem else _sym(pmul(quo, q))
    assert (lhs - _sym(p)).is_zero or (not any(p) and not any(quo))
