import math

import pytest
from hypothesis import given, settings, strategies as st

from muldep import asymptotics as A
from muldep import multdep as D
from muldep.errors import BudgetExceededError, InvalidInputError


def test_psi_examples():
    assert A.psi_exact(100, 5) == 34 == A.psi_bruteforce(100, 5)
    assert A.psi_exact(10, 10) == 10
    for x in (2, 7, 100, 1000, 10 ** 6):
        assert A.psi_exact(x, 2) == math.floor(math.log2(x)) + 1


def test_psi_report():
    row = A.psi_report(10 ** 4, 50)
    assert row["psi"] == 2463
    assert row["Z"] > 0 and row["estimate"] == pytest.approx(math.exp(row["Z"]))
    q = A.SmoothQuery(10 ** 4, 100)
    assert q.u == pytest.approx(2) and 0 < q.Z < math.inf
    with pytest.raises(InvalidInputError):
        A.SmoothQuery(100, 2)
    with pytest.raises(InvalidInputError):
        A.psi_exact(10, 20)


@settings(max_examples=40)
@given(st.integers(2, 3000), st.integers(2, 50))
def test_psi_bruteforce(x, y):
    if y > x:
        x, y = y, x
    assert A.psi_exact(x, y) == A.psi_bruteforce(x, y)


@given(st.integers(2, 10 ** 5), st.integers(2, 200), st.integers(0, 100), st.integers(0, 20))
def test_psi_monotone(x, y, dx, dy):
    y = min(x, y)
    y2 = min(x + dx, y + dy)
    assert A.psi_exact(x, y) <= A.psi_exact(x + dx, y2)


def test_product_equation_examples():
    assert A.product_equation_count(A.ProductEquationSpec(2, 2, 4)) == 6
    assert A.product_equation_count(A.ProductEquationSpec(2, 2, 2)) == 1
    with pytest.raises(BudgetExceededError):
        A.product_equation_count(A.ProductEquationSpec(2, 2, 10 ** 5), budget=10 ** 6)
    with pytest.raises(InvalidInputError):
        A.ProductEquationSpec(1, 2, 4)


@settings(max_examples=25)
@given(st.integers(2, 3), st.sampled_from([2, 3, 6, 10]), st.integers(2, 12),
       st.lists(st.sampled_from([0.5, 1.0, 1.5, 2.0]), min_size=3, max_size=3))
def test_product_equation_bruteforce(k, q, T, g):
    spec = A.ProductEquationSpec(k, q, T, tuple(g[:k]))
    n = A.product_equation_count(spec)
    assert n == A.product_equation_bruteforce(spec)
    swapped = A.ProductEquationSpec(k, q, T, tuple(reversed(g[:k])))
    assert A.product_equation_count(swapped) == n
    diag = math.prod(sum(1 for a in range(1, B + 1) if math.gcd(a, q) == 1) for B in spec.bounds())
    assert n >= diag


def test_lower_bound_examples():
    tuples = list(A.lower_bound_generate(4, 10))
    assert (6, 5, 10, 3) in tuples and (42, 5, 10, 21) in tuples
    with pytest.raises(InvalidInputError):
        list(A.lower_bound_generate(4, 10, [3, 3]))
    with pytest.raises(InvalidInputError):
        list(A.lower_bound_generate(5, 10))


def test_lower_bound_tuples_rank():
    for t in A.lower_bound_generate(4, 12):
        assert t[0] * t[1] == t[2] * t[3]
        assert D.verify_relation(list(t), (1, 1, -1, -1))
        assert D.multiplicative_rank(list(t)).s == 3
    for t in A.lower_bound_generate(6, 3):
        assert D.multiplicative_rank(list(t)).s == 5


def test_census():
    row = A.lower_bound_census(4, 100)
    assert row["count"] >= 1 and row["T"] == 10
    assert row["count"] == len(list(A.lower_bound_generate(4, row["T"])))
