import json
import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from muldep import enumerate as E
from muldep import quadratic as Q
from muldep.enumerate import EnumerationSpec
from muldep.errors import InvalidInputError
from muldep.polynomial import IntPolynomial

from oracles import roots40


def _keys(spec):
    return [(a.minpoly.coeffs, a.root_index) for a in E.stream(spec)]


def test_small_counts():
    assert E.count(EnumerationSpec("integers-in-field", 3, field=1)) == 6
    assert E.count(EnumerationSpec("numbers-in-field", 2, field=1)) == 6
    assert E.count(EnumerationSpec("numbers-in-field", 1, field=-1)) == 4
    assert E.count(EnumerationSpec("integers-of-degree", 5, degree=1)) == 10
    assert E.count(EnumerationSpec("numbers-of-degree", 2, degree=1)) == 6


def test_gaussian_height_two():
    # the worked listing: (0,+-1), (0,+-2), (+-1,+-1) off the real axis plus +-1, +-2
    elems = E.field_elements("integers", -1, 2)
    pts = sorted((int(z.x), int(z.y)) for z in elems)
    assert pts == sorted([(0, 1), (0, -1), (0, 2), (0, -2), (1, 1), (1, -1), (-1, 1), (-1, -1),
                          (1, 0), (-1, 0), (2, 0), (-2, 0)])
    assert E.count(EnumerationSpec("integers-in-field", 2, field=-1)) == 12


def test_gauss_circle():
    n = E.count(EnumerationSpec("integers-in-field", 100, field=-1))
    assert abs(n / (math.pi * 100 ** 2) - 1) < 0.02


def test_rational_number_counts():
    n = E.count(EnumerationSpec("numbers-in-field", 1000, field=1))
    assert abs(n / (12 / math.pi ** 2 * 10 ** 6) - 1) < 0.01
    n = E.count(EnumerationSpec("numbers-of-degree", 100, degree=1))
    assert abs(n / (12 / math.pi ** 2 * 10 ** 4) - 1) < 0.02


def test_degree_two_membership():
    polys = {f.coeffs for f in E.degree_polynomials("integers", 2, 2)}
    assert (-2, 0, 1) in polys and (-5, 0, 1) not in polys
    polys = {f.coeffs for f in E.degree_polynomials("numbers", 2, 2)}
    assert (-1, 0, 2) in polys


@pytest.mark.slow
def test_degree_two_integer_count():
    n = E.count(EnumerationSpec("integers-of-degree", 6, degree=2))
    assert abs(n / (8 * 6 ** 4) - 1) < 0.15


def test_spec_validation():
    with pytest.raises(InvalidInputError):
        EnumerationSpec("integers-in-field", 0, field=1)
    with pytest.raises(InvalidInputError):
        EnumerationSpec("integers-in-field", 2, degree=2)
    with pytest.raises(InvalidInputError):
        EnumerationSpec("numbers-of-degree", 2, field=1)
    with pytest.raises(InvalidInputError):
        EnumerationSpec("integers-in-field", 2, field=4)


def test_jsonl(tmp_path):
    p = tmp_path / "out.jsonl"
    n = E.write_jsonl(EnumerationSpec("integers-in-field", 2, field=-1), p)
    rows = [json.loads(line) for line in p.read_text().splitlines()]
    assert n == len(rows) == 12 and all({"poly", "root_index"} <= set(r) for r in rows)


def _brute_integers(m, H):
    # independent sweep over a + b*omega with the minimal polynomial's Mahler measure
    out = set()
    B = 4 * H + 4
    for a in range(-B, B + 1):
        for b in range(-B, B + 1):
            z = Q.QuadNumber.from_omega(m, a, b)
            if z.is_zero:
                continue
            f = z.minpoly()
            M = abs(math.prod(max(1, abs(r)) for r in roots40(f.coeffs))) * abs(f.coeffs[-1])
            if float(M) <= H ** f.degree + 1e-9:
                out.add((f.coeffs, z.root_index()))
    return out


@pytest.mark.parametrize("m,H", [(-1, 3), (2, 3), (5, 2), (-3, 2), (-5, 3)])
def test_field_integers_against_sweep(m, H):
    spec = EnumerationSpec("integers-in-field", H, field=m)
    keys = _keys(spec)
    assert len(keys) == len(set(keys))
    assert set(keys) == _brute_integers(m, H)


field_specs = st.builds(
    lambda mode, m, H: EnumerationSpec(mode, H, field=m),
    st.sampled_from(["integers-in-field", "numbers-in-field"]),
    st.sampled_from([1, -1, -2, -3, 2, 3, 5, -5]),
    st.sampled_from([Fraction(1), Fraction(3, 2), Fraction(2), Fraction(5, 2)]))
degree_specs = st.builds(
    lambda mode, d, H: EnumerationSpec(mode, H, degree=d),
    st.sampled_from(["integers-of-degree", "numbers-of-degree"]),
    st.sampled_from([1, 2]),
    st.sampled_from([Fraction(1), Fraction(3, 2), Fraction(2)]))


@settings(max_examples=30)
@given(st.one_of(field_specs, degree_specs))
def test_stream_invariants(spec):
    elems = list(E.stream(spec))
    keys = [(a.minpoly.coeffs, a.root_index) for a in elems]
    assert len(keys) == len(set(keys))
    assert len(elems) == E.count(spec)
    vals = {complex(round(a.approx(15).real, 9), round(a.approx(15).imag, 9)) for a in elems}
    for v in vals:
        assert complex(round(-v.real, 9) + 0.0, round(-v.imag, 9) + 0.0) in {
            complex(x.real + 0.0, x.imag + 0.0) for x in vals}
    if spec.mode.startswith("numbers"):
        for a in elems:
            w = 1 / a.approx(15)
            assert min(abs(w - v) for v in vals) < 1e-7
    if spec.field not in (None, 1):
        for a in elems:
            assert a.degree in (1, 2)
            if a.degree == 2:
                c0, c1, c2 = a.minpoly.coeffs
                disc = c1 * c1 - 4 * c0 * c2
                core = sympy.sqrt(sympy.Integer(disc)).as_coeff_Mul()
                assert Q.squarefree_kernel(disc)[0] == spec.field
