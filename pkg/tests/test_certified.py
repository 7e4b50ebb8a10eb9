from fractions import Fraction

import mpmath
import numpy as np
from hypothesis import given, strategies as st

from muldep.certified import CertifiedValue, isolate_roots


def test_from_exact_is_tight():
    v = CertifiedValue.from_exact(Fraction(1, 3))
    assert v.contains(Fraction(1, 3)) and v.exact == Fraction(1, 3)


def test_isolation_orders_by_real_then_imaginary():
    discs = isolate_roots((1, 0, 1))  # +-i
    assert [float(d.im) for d in discs] == [-1.0, 1.0]
    discs = isolate_roots((-2, 0, 0, 1))  # cube roots of 2
    assert discs[-1].is_real and abs(float(discs[-1].re) - 2 ** (1 / 3)) < 1e-12
    assert discs[0].partner == 1 and discs[1].partner == 0


@given(st.lists(st.integers(-12, 12), min_size=3, max_size=5))
def test_discs_contain_roots(c):
    if c[-1] == 0 or c[0] == 0:
        return
    import sympy

    x = sympy.Symbol("x")
    f = sympy.Poly(list(reversed(c)), x)
    if sympy.degree(sympy.gcd(f, f.diff(x))) > 0:
        return
    discs = isolate_roots(tuple(c), 80)
    assert len(discs) == len(c) - 1
    with mpmath.workdps(40):
        roots = mpmath.polyroots(list(reversed(c)), maxsteps=400, extraprec=200)
        for r in roots:
            hits = [d for d in discs if abs(mpmath.mpc(d.re, d.im) - r) <= d.rad + mpmath.mpf(10) ** -35]
            assert len(hits) == 1
