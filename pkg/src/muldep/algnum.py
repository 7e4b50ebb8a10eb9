"""Algebraic numbers given by minimal polynomial and root index; heights and predicates."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Sequence

import mpmath
from mpmath import iv, mp

from . import polynomial as P
from .certified import (MAX_PRECISION, CertifiedValue, RootDisc, hi, isolate_roots, ivprec, ivq,
                        lo)
from .errors import InvalidInputError, UndecidedError, UndefinedHeightError, UnsupportedError
from .polynomial import IntPolynomial

# --- irreducibility -----------------------------------------------------------


def _as_coeffs(f) -> tuple[int, ...]:
    if isinstance(f, IntPolynomial):
        return f.coeffs
    c = P.trim(tuple(int(x) for x in f))
    if not c:
        raise InvalidInputError("zero polynomial")
    return c


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def rational_roots(f: Sequence[int]) -> list[Fraction]:
    """All rational roots of an integer polynomial (rational root test)."""
    c = P.trim(f)
    roots = []
    if c and c[0] == 0:
        roots.append(Fraction(0))
        k = 0
        while c[k] == 0:
            k += 1
        c = c[k:]
    if len(c) <= 1:
        return roots
    for q in _divisors(c[-1]):
        for p in _divisors(c[0]):
            for s in (p, -p):
                if gcd(s, q) == 1 and P.peval(c, Fraction(s, q)) == 0:
                    roots.append(Fraction(s, q))
    return sorted(set(roots))


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def is_irreducible(f) -> bool:
    """Irreducibility over the rationals (content is ignored)."""
    c = _as_coeffs(f)
    d = len(c) - 1
    if d < 1:
        raise InvalidInputError("irreducibility needs degree >= 1")
    if d == 1:
        return True
    if d == 2:
        return not is_square(c[1] * c[1] - 4 * c[0] * c[2])
    if d == 3:
        return not rational_roots(c)
    return _is_irreducible_sympy(c)


@lru_cache(maxsize=100_000)
def _is_irreducible_sympy(c: tuple[int, ...]) -> bool:
    import sympy

    x = sympy.Symbol("x")
    _, factors = sympy.factor_list(sympy.Poly(list(reversed(c)), x))
    return len(factors) == 1 and factors[0][1] == 1


# --- algebraic numbers -----------------------------------------------------------


@dataclass(frozen=True)
class AlgebraicNumber:
    """A root of an irreducible primitive integer polynomial.

    Roots are indexed after sorting by (real part, imaginary part).
    """

    minpoly: IntPolynomial
    root_index: int = 0

    def __post_init__(self):
        if not 0 <= self.root_index < self.minpoly.degree:
            raise InvalidInputError("root index out of range")

    @classmethod
    def from_poly(cls, coeffs, root_index: int = 0, check: bool = True) -> "AlgebraicNumber":
        f = IntPolynomial.normalize(coeffs)
        if check and not is_irreducible(f):
            raise InvalidInputError(f"{f} is not irreducible")
        return cls(f, root_index)

    @classmethod
    def rational(cls, q) -> "AlgebraicNumber":
        q = Fraction(q)
        return cls(IntPolynomial((-q.numerator, q.denominator)), 0)

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    @property
    def is_rational(self) -> bool:
        return self.minpoly.degree == 1

    @property
    def is_zero(self) -> bool:
        return self.minpoly.coeffs == (0, 1)

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise InvalidInputError("not a rational number")
        a0, a1 = self.minpoly.coeffs
        return Fraction(-a0, a1)

    def enclosure(self, prec: int = 64) -> RootDisc:
        return isolate_roots(self.minpoly.coeffs, prec)[self.root_index]

    def conjugates(self) -> list["AlgebraicNumber"]:
        return [AlgebraicNumber(self.minpoly, i) for i in range(self.degree)]

    def approx(self, digits: int = 30) -> complex:
        disc = self.enclosure(int(digits * 3.33) + 10)
        return complex(float(disc.re), float(disc.im))

    def to_json(self) -> dict:
        return {"poly": self.minpoly.to_json(), "root_index": self.root_index}

    @classmethod
    def from_json(cls, obj: dict) -> "AlgebraicNumber":
        return cls.from_poly(obj["poly"], obj.get("root_index", 0))

    def __str__(self) -> str:
        if self.is_rational:
            return str(self.as_fraction())
        return f"root[{self.root_index}] of {self.minpoly}"


def naive_height(alpha: AlgebraicNumber) -> int:
    return alpha.minpoly.naive_height


# --- Mahler measure -----------------------------------------------------------------


def _cmp_surd(s: int, D: int, t: Fraction) -> int:
    """Sign of s*sqrt(D) - t for a non-square integer D > 0, s = +-1, rational t."""
    if s > 0:
        if t < 0:
            return 1
        return 1 if D > t * t else -1
    if t >= 0:
        return -1
    return 1 if D < t * t else -1


def quadratic_mahler_le(a: int, b: int, c: int, bound) -> bool:
    """Exact test M(a x^2 + b x + c) <= bound for a > 0 and non-square discriminant."""
    bound = Fraction(bound)
    disc = b * b - 4 * a * c
    if disc < 0:
        return max(a, c) <= bound
    if is_square(disc):
        raise InvalidInputError("quadratic_mahler_le expects an irreducible quadratic")
    outside = []
    for s in (-1, 1):
        # root (-b + s sqrt(disc)) / (2a) is > 1 or < -1
        gt = _cmp_surd(s, disc, Fraction(2 * a + b)) > 0
        lt = _cmp_surd(s, disc, Fraction(b - 2 * a)) < 0
        if gt or lt:
            outside.append(s)
    if not outside:
        return a <= bound
    if len(outside) == 2:
        return abs(c) <= bound
    s = outside[0]
    # M = |-b + s sqrt(disc)| / 2 <= bound
    T = 2 * bound
    return _cmp_surd(s, disc, T + b) <= 0 and _cmp_surd(s, disc, b - T) >= 0


def _mahler_iv(coeffs: tuple[int, ...], prec: int):
    discs = isolate_roots(coeffs, prec)
    with ivprec(prec + 30):
        m = iv.mpf(coeffs[-1])
        for disc in discs:
            mod = disc.modulus_iv()
            m = m * iv.mpf([max(mp.one, lo(mod)), max(mp.one, hi(mod))])
        return m


def _exact_mahler(coeffs: tuple[int, ...]) -> Fraction | None:
    """Mahler measure when it is visibly an integer, else None."""
    d = len(coeffs) - 1
    if d == 1:
        return Fraction(max(abs(coeffs[0]), abs(coeffs[1])))
    if d == 2 and coeffs[1] ** 2 - 4 * coeffs[0] * coeffs[2] < 0:
        return Fraction(max(coeffs[2], coeffs[0]))
    discs = isolate_roots(coeffs, 64)
    with ivprec(100):
        mods = [disc.modulus_iv() for disc in discs]
    if all(lo(m) > 1 for m in mods):
        return Fraction(abs(coeffs[0]))
    if all(hi(m) < 1 for m in mods):
        return Fraction(coeffs[-1])
    return None


def mahler_measure(f, precision: int = 64) -> CertifiedValue:
    """Certified Mahler measure of a squarefree integer polynomial."""
    c = _as_coeffs(f)
    exact = _exact_mahler(c)
    if exact is not None:
        return CertifiedValue.from_exact(exact, precision)
    work = precision + 16
    while work <= MAX_PRECISION:
        m = _mahler_iv(c, work)
        with ivprec(work + 30):
            if hi(m) - lo(m) <= mp.mpf(2) ** (-precision) * max(mp.one, hi(m)):
                return CertifiedValue.from_iv(m, precision)
        work *= 2
    raise UndecidedError("Mahler measure did not converge")


def mahler_at_most(f, bound) -> bool:
    """Exact decision of M(f) <= bound for an irreducible f of degree <= 3.

    Higher degrees are decided by refinement and may raise UndecidedError on ties.
    """
    c = _as_coeffs(f)
    bound = Fraction(bound)
    d = len(c) - 1
    if d == 2:
        return quadratic_mahler_le(c[2], c[1], c[0], bound)
    exact = _exact_mahler(c)
    if exact is not None:
        return exact <= bound
    work = 64
    while work <= MAX_PRECISION:
        m = _mahler_iv(c, work)
        with ivprec(work + 30):
            b = ivq(bound)
            if hi(m) <= lo(b):
                return True
            if lo(m) > hi(b):
                return False
        work *= 2
    raise UndecidedError(f"cannot decide M({c}) <= {bound}")


def weil_height(alpha: AlgebraicNumber, precision: int = 64) -> CertifiedValue:
    """Absolute Weil height (a_d prod max(1,|alpha_i|))^(1/d)."""
    if alpha.is_zero:
        raise UndefinedHeightError("the height of 0 is not defined here")
    if alpha.is_rational:
        return CertifiedValue.from_exact(max(abs(x) for x in alpha.minpoly.coeffs), precision)
    d = alpha.degree
    m = mahler_measure(alpha.minpoly, precision + 8)
    if m.exact is not None:
        r = _exact_root(m.exact, d)
        if r is not None:
            return CertifiedValue.from_exact(r, precision)
    work = precision + 8
    while work <= MAX_PRECISION:
        if m.exact is None:
            m = mahler_measure(alpha.minpoly, work)
        with ivprec(work + 30):
            h = iv.exp(iv.log(m.iv) / d) if m.exact is None else iv.exp(iv.log(ivq(m.exact)) / d)
            if hi(h) - lo(h) <= mp.mpf(2) ** (-precision):
                return CertifiedValue.from_iv(h, precision)
        work *= 2
    raise UndecidedError("Weil height did not converge")


def _exact_root(q: Fraction, d: int) -> Fraction | None:
    num = _int_root(q.numerator, d)
    den = _int_root(q.denominator, d)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _int_root(n: int, d: int) -> int | None:
    r = round(n ** (1.0 / d)) if n < 2 ** 1000 else None
    if r is None:
        import sympy

        r, ok = sympy.integer_nthroot(n, d)
        return int(r) if ok else None
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** d == n:
            return cand
    return None


def height_of_power(alpha: AlgebraicNumber, k: int, precision: int = 64) -> CertifiedValue:
    """H(alpha^k) = H(alpha)^|k|."""
    if alpha.is_zero:
        raise UndefinedHeightError("the height of 0 is not defined here")
    if alpha.is_rational:
        h = max(abs(x) for x in alpha.minpoly.coeffs)
        return CertifiedValue.from_exact(Fraction(h) ** abs(k), precision)
    if k == 0:
        return CertifiedValue.from_exact(1, precision)
    m = mahler_measure(alpha.minpoly, precision + 8)
    if m.exact is not None:
        # H^|k| = M^(|k|/d), exact whenever that root is rational
        r = _exact_root(m.exact ** abs(k), alpha.degree)
        if r is not None:
            return CertifiedValue.from_exact(r, precision)
    work = precision + 8 + abs(k).bit_length()
    while work <= MAX_PRECISION:
        h = weil_height(alpha, work)
        if h.exact is not None:
            return CertifiedValue.from_exact(h.exact ** abs(k), precision)
        with ivprec(work + 30):
            p = h.iv ** abs(k)
            if hi(p) - lo(p) <= mp.mpf(2) ** (-precision):
                return CertifiedValue.from_iv(p, precision)
        work *= 2
    raise UndecidedError("height of power did not converge")


def _locate_root(coeffs: tuple[int, ...], value_iv, prec: int) -> int | None:
    """Index of the unique root of coeffs whose disc meets the complex box value_iv."""
    discs = isolate_roots(coeffs, prec)
    re, im = value_iv.real, value_iv.imag
    hits = []
    with ivprec(prec + 40):
        for idx, disc in enumerate(discs):
            rr, ri = disc.re_iv(), disc.im_iv()
            if hi(rr) < lo(re) or lo(rr) > hi(re) or hi(ri) < lo(im) or lo(ri) > hi(im):
                continue
            hits.append(idx)
    return hits[0] if len(hits) == 1 else None


def power(alpha: AlgebraicNumber, k: int) -> AlgebraicNumber:
    """alpha^k with its minimal polynomial computed from the characteristic polynomial."""
    if alpha.is_zero:
        raise UndefinedHeightError("zero has no inverse")
    if alpha.is_rational:
        return AlgebraicNumber.rational(alpha.as_fraction() ** k)
    if k == 0:
        return AlgebraicNumber.rational(1)
    base = alpha.minpoly.coeffs
    if k < 0:
        base = P.primitive_int(P.reverse(base))
    chi = P.power_charpoly(base, abs(k))
    m = P.squarefree_part(chi)
    prec = 64
    while prec <= MAX_PRECISION:
        with ivprec(prec + 40):
            z = alpha.enclosure(min(MAX_PRECISION, prec + abs(k).bit_length() + 8)).value_iv()
            v = z ** abs(k) if k > 0 else (iv.mpc(1, 0) / z) ** abs(k)
        idx = _locate_root(m, v, prec)
        if idx is not None:
            return AlgebraicNumber(IntPolynomial(m), idx)
        prec *= 2
    raise UndecidedError("could not identify the root of the power")


def scale_by_leading(alpha: AlgebraicNumber) -> AlgebraicNumber:
    """a*alpha with a the leading coefficient of the minimal polynomial (an algebraic integer)."""
    if alpha.is_zero:
        raise UndefinedHeightError("scale_by_leading undefined for 0")
    c = alpha.minpoly.coeffs
    d = len(c) - 1
    a = c[-1]
    scaled = tuple(c[i] * a ** (d - 1 - i) for i in range(d)) + (1,)
    # x -> x/a with a > 0 preserves the (re, im) order of the roots
    return AlgebraicNumber(IntPolynomial(scaled), alpha.root_index)


# --- roots of unity, degeneracy, Galois -----------------------------------------------


def torsion_order(alpha: AlgebraicNumber) -> int | None:
    """k if alpha is a primitive k-th root of unity, else None."""
    c = alpha.minpoly.coeffs
    if c[-1] != 1 or abs(c[0]) != 1:
        return None
    d = len(c) - 1
    for k in P.orders_with_totient_at_most(d):
        if P.totient(k) == d and P.cyclotomic(k) == c:
            return k  # every root of Phi_k is primitive
    return None


def is_root_of_unity(alpha: AlgebraicNumber) -> bool:
    if alpha.is_zero:
        raise UndefinedHeightError("0 is not in the multiplicative group")
    return torsion_order(alpha) is not None


def _reduce_for_degeneracy(f) -> tuple:
    c = _as_coeffs(f)
    k = 0
    while c[k] == 0:
        k += 1
    c = c[k:]
    if len(c) <= 1:
        return c
    return P.squarefree_part(c)


def is_degenerate(f) -> bool:
    """Some two distinct nonzero roots have a root-of-unity quotient."""
    c = _as_coeffs(f)
    if len(c) - 1 < 2:
        raise InvalidInputError("degeneracy needs degree >= 2")
    g = _reduce_for_degeneracy(c)
    d = len(g) - 1
    if d < 2:
        return False
    r = P.ratio_poly(g)
    # x = 1 occurs exactly d times (i = j); every other cyclotomic factor is a witness
    for k in P.orders_with_totient_at_most(d * d):
        if k == 1:
            continue
        if not P.pmod(r, P.cyclotomic(k)):
            return True
    return False


def _disc(c) -> int:
    return P.discriminant(c)


def galois_is_full(f) -> bool:
    """Galois group of an irreducible polynomial of degree <= 4 is the full symmetric group."""
    c = _as_coeffs(f)
    d = len(c) - 1
    if d > 4:
        raise UnsupportedError("Galois test implemented for degree <= 4 only")
    if d < 1:
        raise InvalidInputError("degree must be >= 1")
    if not is_irreducible(c):
        raise InvalidInputError("galois_is_full expects an irreducible polynomial")
    if d <= 2:
        return True
    if d == 3:
        return not is_square(_disc(c))
    a = c[4]
    # monic integer model a^3 f(x/a)
    m = [c[i] * a ** (3 - i) for i in range(4)] + [1]
    e, dd, cc, b = m[0], m[1], m[2], m[3]
    resolvent = (-(b * b * e - 4 * cc * e + dd * dd), b * dd - 4 * e, -cc, 1)
    if rational_roots(resolvent):
        return False
    return not is_square(_disc(c))


# --- polynomial height helpers --------------------------------------------------------


def poly_height(coeffs: Sequence[int]) -> int:
    return max(abs(int(x)) for x in coeffs)
