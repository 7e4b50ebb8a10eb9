"""Exact univariate polynomial arithmetic over the integers and rationals.

Polynomials are ascending coefficient sequences: ``[-2, 0, 1]`` is ``x^2 - 2``.
The helpers here work on plain tuples so that they can be reused for
``IntPolynomial`` as well as for rational and polynomial-valued entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

from .errors import InvalidInputError


def trim(p: Sequence) -> tuple:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def deg(p: Sequence) -> int:
    """Degree with ``deg(0) == -1``."""
    return len(trim(p)) - 1


def padd(p: Sequence, q: Sequence) -> tuple:
    n = max(len(p), len(q))
    return trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def pneg(p: Sequence) -> tuple:
    return tuple(-c for c in p)


def psub(p: Sequence, q: Sequence) -> tuple:
    return padd(p, pneg(q))


def pscale(p: Sequence, c) -> tuple:
    return trim([c * x for x in p])


def pmul(p: Sequence, q: Sequence) -> tuple:
    p, q = trim(p), trim(q)
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def ppow(p: Sequence, k: int) -> tuple:
    out: tuple = (1,)
    base = trim(p)
    while k:
        if k & 1:
            out = pmul(out, base)
        base = pmul(base, base)
        k >>= 1
    return out


def pdivmod(p: Sequence, q: Sequence) -> tuple[tuple, tuple]:
    """Division over the rationals; exact integer results are kept as ints."""
    p, q = list(trim(p)), trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    dq = len(q) - 1
    lead = q[-1]
    if len(p) - 1 < dq:
        return (), tuple(p)
    quo = [0] * (len(p) - dq)
    for i in range(len(p) - 1 - dq, -1, -1):
        c = p[i + dq]
        if c == 0:
            continue
        c = _exact_div(c, lead)
        quo[i] = c
        for j in range(dq + 1):
            p[i + j] -= c * q[j]
    return trim(quo), trim(p[:dq])


def _exact_div(a, b):
    if isinstance(a, int) and isinstance(b, int) and a % b == 0:
        return a // b
    return Fraction(a) / b


def pmod(p: Sequence, q: Sequence) -> tuple:
    return pdivmod(p, q)[1]


def pdiv_exact(p: Sequence, q: Sequence) -> tuple:
    quo, rem = pdivmod(p, q)
    if rem:
        raise ArithmeticError("polynomial division is not exact")
    return quo


def monic(p: Sequence) -> tuple:
    p = trim(p)
    return tuple(Fraction(c) / p[-1] for c in p)


def pgcd(p: Sequence, q: Sequence) -> tuple:
    """Monic gcd over the rationals (``()`` when both are zero)."""
    a, b = trim(p), trim(q)
    while b:
        a, b = b, pmod(a, b)
    return monic(a) if a else ()


def derivative(p: Sequence) -> tuple:
    return trim([i * p[i] for i in range(1, len(p))])


def content(p: Sequence[int]) -> int:
    g = 0
    for c in p:
        g = gcd(g, int(c))
    return g


def primitive_int(p: Sequence) -> tuple[int, ...]:
    """Scale a rational polynomial to a primitive integer one with positive lead."""
    p = trim(p)
    if not p:
        return ()
    den = 1
    for c in p:
        den = den * Fraction(c).denominator // gcd(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in p]
    g = content(ints)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return tuple(ints)


def peval(p: Sequence, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def reverse(p: Sequence) -> tuple:
    """``x^deg p * p(1/x)``."""
    return trim(tuple(reversed(trim(p))))


def substitute_scale(p: Sequence, c) -> tuple:
    """``p(c x)``."""
    out = []
    pw = 1
    for a in p:
        out.append(a * pw)
        pw *= c
    return trim(out)


def squarefree_part(p: Sequence) -> tuple[int, ...]:
    p = trim(p)
    if len(p) <= 2:
        return primitive_int(p)
    g = pgcd(p, derivative(p))
    return primitive_int(pdiv_exact(p, g))


@lru_cache(maxsize=None)
def cyclotomic(k: int) -> tuple[int, ...]:
    """Coefficients of the k-th cyclotomic polynomial."""
    if k < 1:
        raise InvalidInputError("cyclotomic index must be positive")
    num: tuple = tuple([-1] + [0] * (k - 1) + [1])
    for dd in range(1, k):
        if k % dd == 0:
            num = pdiv_exact(num, cyclotomic(dd))
    return tuple(int(c) for c in num)


@lru_cache(maxsize=None)
def totient(k: int) -> int:
    result, n, p = k, k, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def orders_with_totient_at_most(bound: int) -> list[int]:
    """All k with phi(k) <= bound; phi(k) >= sqrt(k/2) caps the search at 2*bound^2."""
    return [k for k in range(1, 2 * bound * bound + 1) if totient(k) <= bound]


def discriminant(p: Sequence[int]) -> int:
    """Discriminant of an integer polynomial of degree >= 1."""
    p = trim(p)
    d = len(p) - 1
    if d < 1:
        raise InvalidInputError("discriminant needs degree >= 1")
    if d == 1:
        return 1
    nrm = norm_constant(p, derivative(p))
    val = Fraction((-1) ** (d * (d - 1) // 2)) * Fraction(p[-1]) ** (d - 2) * nrm
    assert val.denominator == 1
    return int(val)


# --- norms in Q[x][y]/(f(y)) ---------------------------------------------------
#
# A bivariate polynomial g(x, y) is a tuple over powers of y whose entries are
# x-polynomials.  norm(f, g) = prod_i g(x, alpha_i) over the roots of f, which is
# the determinant of multiplication by g on the algebra Q(x)[y]/(f).


def _reduce_mod(g: list, fm: Sequence[Fraction]) -> list:
    """Reduce a y-polynomial with x-polynomial entries modulo monic fm (rational)."""
    d = len(fm) - 1
    g = list(g)
    for i in range(len(g) - 1, d - 1, -1):
        c = g[i]
        if not c:
            continue
        g[i] = ()
        for j in range(d):
            if fm[j]:
                g[i - d + j] = psub(g[i - d + j], pscale(c, fm[j]))
    return (g + [()] * d)[:d]


def norm_poly(f: Sequence, g: Sequence[Sequence]) -> tuple:
    """prod over roots alpha of f of g(x, alpha), as an x-polynomial."""
    f = trim(f)
    d = len(f) - 1
    if d < 1:
        raise InvalidInputError("norm needs deg f >= 1")
    fm = monic(f)
    cols = []
    cur = _reduce_mod([tuple(trim(e)) for e in g], fm)
    for j in range(d):
        cols.append(cur)
        if j + 1 < d:
            cur = _reduce_mod([()] + cur, fm)
    mat = [[cols[j][i] for j in range(d)] for i in range(d)]
    return poly_det(mat)


def norm_constant(f: Sequence, g: Sequence) -> Fraction:
    """prod over roots alpha of f of g(alpha) for a univariate g."""
    res = norm_poly(f, [(c,) if c else () for c in g])
    return Fraction(res[0]) if res else Fraction(0)


def poly_det(mat: list[list[tuple]]) -> tuple:
    """Determinant of a square matrix of polynomials (fraction-free Bareiss)."""
    n = len(mat)
    m = [list(row) for row in mat]
    sign = 1
    prev: tuple = (1,)
    for k in range(n - 1):
        if not m[k][k]:
            for r in range(k + 1, n):
                if m[r][k]:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return ()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = psub(pmul(m[i][j], m[k][k]), pmul(m[i][k], m[k][j]))
                m[i][j] = pdiv_exact(num, prev)
        prev = m[k][k]
    out = m[n - 1][n - 1]
    return pscale(out, sign) if sign < 0 else trim(out)


def power_charpoly(f: Sequence, k: int) -> tuple:
    """Characteristic polynomial prod_i (x - alpha_i^k) for k >= 1 (monic, rational)."""
    g = [(0, 1)] + [()] * (k - 1) + [(-1,)]
    g = [tuple(e) for e in g]
    # norm of (x - y^k)
    return norm_poly(f, g)


def ratio_poly(f: Sequence) -> tuple:
    """Polynomial whose roots are all quotients alpha_j / alpha_i (with multiplicity)."""
    g = [tuple([0] * i + [c]) if c else () for i, c in enumerate(trim(f))]
    return norm_poly(f, g)


def times_root_of_unity_poly(f: Sequence, k: int) -> tuple:
    """Polynomial whose roots are alpha_i * eta for all primitive k-th roots eta."""
    f = trim(f)
    d = len(f) - 1
    # g(x, y) = y^d f(x / y) = sum_i a_i x^i y^(d-i)
    g: list = [()] * (d + 1)
    for i, a in enumerate(f):
        if a:
            g[d - i] = tuple([0] * i + [a])
    return norm_poly(cyclotomic(k), g)


@dataclass(frozen=True)
class IntPolynomial:
    """Primitive integer polynomial with positive leading coefficient."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        object.__setattr__(self, "coeffs", c)
        if not c or c[-1] == 0:
            raise InvalidInputError("zero polynomial or trailing zero coefficient")
        if c[-1] < 0:
            raise InvalidInputError("leading coefficient must be positive")
        if content(c) != 1:
            raise InvalidInputError("polynomial must have content 1")

    @classmethod
    def normalize(cls, coeffs: Iterable) -> "IntPolynomial":
        p = primitive_int(tuple(coeffs))
        if not p:
            raise InvalidInputError("zero polynomial")
        return cls(p)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    @property
    def constant(self) -> int:
        return self.coeffs[0]

    @property
    def naive_height(self) -> int:
        return max(abs(c) for c in self.coeffs)

    def __call__(self, x):
        return peval(self.coeffs, x)

    def to_json(self) -> list[int]:
        return list(self.coeffs)

    def __str__(self) -> str:
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(c) == 1:
                s = mono
            else:
                s = f"{abs(c)}{'*' if mono else ''}{mono}"
            terms.append(("- " if c < 0 else "+ ") + s)
        out = " ".join(terms)
        return out[2:] if out.startswith("+ ") else "-" + out[2:]
