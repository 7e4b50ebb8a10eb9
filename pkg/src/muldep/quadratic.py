"""Arithmetic in quadratic fields Q(sqrt(m)) and their compositum.

Elements are stored as x + y*sqrt(m) with rational x, y; for m < 0 the square
root is i*sqrt(|m|).  Rationals carry m = 1 and y = 0 so that they can be mixed
with elements of any quadratic field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import sympy
from mpmath import iv, mp

from .certified import CertifiedValue, hi, ivprec, lo
from .errors import InvalidInputError, UndecidedError
from .polynomial import IntPolynomial


def is_squarefree(m: int) -> bool:
    if m in (0, 1, -1):
        return m != 0
    return all(e == 1 for e in sympy.factorint(abs(m)).values())


def squarefree_kernel(n: int) -> tuple[int, int]:
    """n = t^2 * s with s squarefree (sign kept in s); returns (s, t)."""
    if n == 0:
        raise InvalidInputError("zero has no squarefree kernel")
    s, t = (1 if n > 0 else -1), 1
    for p, e in sympy.factorint(abs(n)).items():
        t *= p ** (e // 2)
        if e % 2:
            s *= p
    return s, t


def check_field(m: int) -> int:
    m = int(m)
    if m in (0, 1) or not is_squarefree(m):
        raise InvalidInputError(f"Q(sqrt({m})) needs a squarefree m other than 0 and 1")
    return m


def field_discriminant(m: int) -> int:
    return m if m % 4 == 1 else 4 * m


def parse_field(text: str) -> int:
    """'Q' -> 1, 'Q(sqrt(-1))', 'Q(i)' or plain '-1' -> m."""
    t = text.replace(" ", "")
    if t in ("Q", "QQ", "1"):
        return 1
    if t == "Q(i)":
        return -1
    if t.startswith("Q(sqrt(") and t.endswith("))"):
        t = t[7:-2]
    try:
        return check_field(int(t))
    except ValueError:
        raise InvalidInputError(f"cannot parse field {text!r}") from None


def field_name(m: int) -> str:
    return "Q" if m == 1 else f"Q(sqrt({m}))"


# --- elements -------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadNumber:
    m: int
    x: Fraction
    y: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))
        if self.y == 0 and self.m != 1:
            object.__setattr__(self, "m", 1)

    @classmethod
    def rational(cls, q) -> "QuadNumber":
        return cls(1, Fraction(q))

    @classmethod
    def from_omega(cls, m: int, a, b) -> "QuadNumber":
        """a + b*omega with omega the standard integral generator."""
        a, b = Fraction(a), Fraction(b)
        if m % 4 == 1:
            return cls(m, a + b / 2, b / 2)
        return cls(m, a, b)

    @property
    def is_rational(self) -> bool:
        return self.y == 0

    @property
    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def omega_coords(self) -> tuple[Fraction, Fraction]:
        if self.m % 4 == 1 and self.m != 1:
            b = 2 * self.y
            return self.x - self.y, b
        return self.x, self.y

    def is_integral(self) -> bool:
        a, b = self.omega_coords()
        return a.denominator == 1 and b.denominator == 1

    def norm(self) -> Fraction:
        if self.is_rational:
            return self.x
        return self.x * self.x - self.m * self.y * self.y

    def field_norm(self) -> Fraction:
        """Norm from the ambient quadratic field (rationals are squared)."""
        return self.x * self.x - self.m * self.y * self.y

    def trace(self) -> Fraction:
        return 2 * self.x

    def conj(self) -> "QuadNumber":
        return QuadNumber(self.m, self.x, -self.y)

    def _same(self, other: "QuadNumber") -> int:
        if self.m == 1:
            return other.m
        if other.m in (1, self.m):
            return self.m
        raise InvalidInputError("elements of different quadratic fields")

    def __mul__(self, other):
        if not isinstance(other, QuadNumber):
            other = QuadNumber.rational(other)
        m = self._same(other)
        return QuadNumber(m, self.x * other.x + m * self.y * other.y,
                          self.x * other.y + self.y * other.x)

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, QuadNumber):
            other = QuadNumber.rational(other)
        return QuadNumber(self._same(other), self.x + other.x, self.y + other.y)

    def __neg__(self):
        return QuadNumber(self.m, -self.x, -self.y)

    def __sub__(self, other):
        return self + (-other)

    def inverse(self) -> "QuadNumber":
        n = self.field_norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return QuadNumber(self.m, self.x / n, -self.y / n)

    def __truediv__(self, other):
        if not isinstance(other, QuadNumber):
            other = QuadNumber.rational(other)
        return self * other.inverse()

    def __pow__(self, k: int) -> "QuadNumber":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        out = QuadNumber.rational(1)
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_one(self) -> bool:
        return self.x == 1 and self.y == 0

    def complex_value(self, dps: int = 30) -> mpmath.mpc:
        with mp.workdps(dps):
            r = mpmath.sqrt(mp.mpf(self.m)) if self.m > 0 else mpmath.mpc(0, mpmath.sqrt(-self.m))
            return mpmath.mpf(self.x.numerator) / self.x.denominator + \
                (mpmath.mpf(self.y.numerator) / self.y.denominator) * r

    def __complex__(self) -> complex:
        return complex(self.complex_value(20))

    def log_abs(self, dps: int = 30) -> mpmath.mpf:
        """log|x + y sqrt(m)| computed without cancellation."""
        with mp.workdps(dps + 10):
            if self.m < 0 or self.y == 0:
                return mpmath.log(abs(self.complex_value(dps + 10)))
            big = abs(mp.mpf(self.x.numerator) / self.x.denominator) + \
                abs(mp.mpf(self.y.numerator) / self.y.denominator) * mpmath.sqrt(self.m)
            if self.x == 0 or (self.x > 0) == (self.y > 0):
                return mpmath.log(big)
            n = self.field_norm()
            return mpmath.log(abs(mp.mpf(n.numerator) / n.denominator)) - mpmath.log(big)

    def minpoly(self) -> IntPolynomial:
        if self.is_rational:
            return IntPolynomial.normalize((-self.x, 1))
        return IntPolynomial.normalize((self.field_norm(), -self.trace(), 1))

    def root_index(self) -> int:
        # the larger root in (re, im) order carries the positive sqrt coefficient
        return 1 if self.y > 0 else 0

    def __repr__(self) -> str:
        if self.is_rational:
            return f"QuadNumber({self.x})"
        return f"QuadNumber({self.x} + {self.y}*sqrt({self.m}))"


def from_minpoly(coeffs, root_index: int) -> QuadNumber:
    """The root of an irreducible polynomial of degree <= 2 with the given index."""
    c = tuple(int(v) for v in coeffs)
    if len(c) == 2:
        return QuadNumber.rational(Fraction(-c[0], c[1]))
    if len(c) != 3:
        raise InvalidInputError("degree must be 1 or 2")
    cc, b, a = c
    disc = b * b - 4 * a * cc
    m, t = squarefree_kernel(disc)
    if m == 1:
        raise InvalidInputError("polynomial is reducible")
    sgn = 1 if root_index == 1 else -1
    return QuadNumber(m, Fraction(-b, 2 * a), Fraction(sgn * t, 2 * a))


# --- roots of unity and units --------------------------------------------------------------


def roots_of_unity(m: int) -> list[QuadNumber]:
    one, half = Fraction(1), Fraction(1, 2)
    out = [QuadNumber.rational(1), QuadNumber.rational(-1)]
    if m == -1:
        out += [QuadNumber(-1, 0, one), QuadNumber(-1, 0, -one)]
    elif m == -3:
        out += [QuadNumber(-3, s * half, t * half) for s in (1, -1) for t in (1, -1)]
    return out


def torsion_count(m: int) -> int:
    return len(roots_of_unity(m)) if m != 1 else 2


def root_of_unity_order(z: QuadNumber) -> int | None:
    if z.field_norm() != 1:
        return None
    w = z
    for k in range(1, 7):
        if w.is_one():
            return k
        w = w * z
    return None


@lru_cache(maxsize=None)
def fundamental_unit(m: int) -> QuadNumber:
    """Smallest unit > 1 of the ring of integers of a real quadratic field."""
    m = check_field(m)
    if m < 0:
        raise InvalidInputError("imaginary quadratic fields have no fundamental unit")
    if m % 4 == 1:
        # units (a + b sqrt(m))/2 with a^2 - m b^2 = +-4
        target = (4, -4)
        scale = Fraction(1, 2)
    else:
        target = (1, -1)
        scale = Fraction(1)
    # the fundamental unit has the smallest positive sqrt-coefficient among units > 1,
    # and for that coefficient the smallest rational part
    for b in range(1, 64):
        cands = []
        for t in target:
            a2 = m * b * b + t
            a = math.isqrt(a2) if a2 >= 0 else -1
            if a > 0 and a * a == a2 and (m % 4 != 1 or (a - b) % 2 == 0):
                cands.append(a)
        if cands:
            return QuadNumber(m, min(cands) * scale, b * scale)
    return _unit_from_cf(m)


def _unit_from_cf(m: int) -> QuadNumber:
    # convergents of the periodic continued fraction of omega
    if m % 4 == 1:
        P, Q, d = 1, 2, m  # omega = (P + sqrt(d)) / Q
    else:
        P, Q, d = 0, 1, m
    r = math.isqrt(d)
    p0, p1 = 1, 0
    q0, q1 = 0, 1
    for _ in range(100_000):
        a = (P + r) // Q
        p0, p1 = a * p0 + p1, p0
        q0, q1 = a * q0 + q1, q0
        cand = QuadNumber.from_omega(m, p0, -q0)
        if abs(cand.field_norm()) == 1:
            u = cand.conj()
            if u.x < 0:
                u = -u
            if u.log_abs() < 0:
                u = u.inverse()
            return u
        P = a * Q - P
        Q = (d - P * P) // Q
    raise UndecidedError(f"fundamental unit of Q(sqrt({m})) not found")


def regulator(m: int, precision: int = 64) -> CertifiedValue:
    eps = fundamental_unit(m)
    with ivprec(precision + 30):
        v = iv.mpf(eps.x.numerator) / eps.x.denominator + \
            iv.mpf(eps.y.numerator) / eps.y.denominator * iv.sqrt(iv.mpf(m))
        return CertifiedValue.from_iv(iv.log(v), precision)


def unit_exponent(u: QuadNumber, m: int) -> tuple[int, QuadNumber]:
    """Write a unit as zeta * eps^t; returns (t, zeta)."""
    if u.field_norm() not in (1, -1):
        raise InvalidInputError("not a unit")
    if m < 0 or u.is_rational:
        return 0, u
    eps = fundamental_unit(m)
    dps = 30
    while dps < 2000:
        with mp.workdps(dps):
            t = int(mpmath.nint(u.log_abs(dps) / eps.log_abs(dps)))
        z = u * eps ** (-t)
        if z.is_rational and abs(z.x) == 1:
            return t, z
        dps *= 2
    raise UndecidedError("unit exponent not found")


# --- prime ideals ---------------------------------------------------------------------------


def kronecker(D: int, p: int) -> int:
    if p == 2:
        if D % 2 == 0:
            return 0
        return 1 if D % 8 in (1, 7) else -1
    return int(sympy.jacobi_symbol(D % p, p))


@lru_cache(maxsize=200_000)
def split_root(m: int, p: int) -> int | None:
    """Smallest root r of the minimal polynomial of omega mod p when p splits."""
    D = field_discriminant(m)
    if kronecker(D, p) != 1:
        return None
    if m % 4 == 1:
        c = (m - 1) // 4
        roots = [r for r in range(p) if (r * r - r - c) % p == 0] if p < 2000 else \
            sorted(((1 + s) * pow(2, -1, p)) % p for s in sympy.sqrt_mod(m, p, all_roots=True))
    else:
        roots = [r for r in range(p) if (r * r - m) % p == 0] if p < 2000 else \
            sorted(sympy.sqrt_mod(m, p, all_roots=True))
    return min(roots)


def _vp(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def integral_scaling(alpha: QuadNumber) -> tuple[int, int, int]:
    """(a, b, e) with e*alpha = a + b*omega integral and e > 0 minimal."""
    A, B = alpha.omega_coords()
    e = A.denominator * B.denominator // math.gcd(A.denominator, B.denominator)
    return int(A * e), int(B * e), e


def split_valuations(alpha: QuadNumber, p: int, r: int) -> tuple[int, int]:
    """(v_P(alpha), v_P'(alpha)) for the split prime p with P = (p, omega - r)."""
    a, b, e = integral_scaling(alpha)
    m = alpha.m
    j = min(_vp(a, p) if a else 10 ** 9, _vp(b, p) if b else 10 ** 9)
    a //= p ** j
    b //= p ** j
    gn = QuadNumber.from_omega(m, a, b).field_norm()
    vn = _vp(int(gn), p)
    ve = _vp(e, p)
    if m % 4 == 1:
        r2 = (1 - r) % p
    else:
        r2 = (-r) % p
    vP = j + (vn if (a + b * r) % p == 0 else 0) - ve
    vQ = j + (vn if (a + b * r2) % p == 0 and r2 != r else 0) - ve
    return vP, vQ


def relevant_primes(alpha: QuadNumber) -> list[int]:
    a, b, e = integral_scaling(alpha)
    gn = QuadNumber.from_omega(alpha.m, a, b).field_norm() if alpha.m != 1 else Fraction(a)
    ps = set(sympy.factorint(abs(int(gn))).keys()) | set(sympy.factorint(e).keys())
    return sorted(ps)


# --- class numbers ---------------------------------------------------------------------------


def reduced_forms_imaginary(D: int) -> list[tuple[int, int, int]]:
    """Reduced positive definite forms (a, b, c) of discriminant D < 0."""
    out = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, abs(b)), c) == 1:
                out.append((a, b, c))
        a += 1
    return out


def reduced_forms_indefinite(D: int) -> list[tuple[int, int, int]]:
    """Primitive reduced indefinite forms: 0 < b < sqrt(D), sqrt(D) - b < 2|a| < sqrt(D) + b."""
    r = math.isqrt(D)
    out = []
    for b in range(1, r + 1):
        if (b * b - D) % 4:
            continue
        ac = (b * b - D) // 4
        for a in _pos_divisors(-ac):
            if not D < (2 * a + b) ** 2:
                continue
            if 2 * a - b > 0 and (2 * a - b) ** 2 > D:
                continue
            for sa in (a, -a):
                c = ac // sa
                if math.gcd(math.gcd(a, b), abs(c)) == 1:
                    out.append((sa, b, c))
    return sorted(out)


def _pos_divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _rho(f: tuple[int, int, int], D: int) -> tuple[int, int, int]:
    a, b, c = f
    r = math.isqrt(D)
    ac = abs(c)
    for b2 in range(r, r - 2 * ac, -1):
        if (b2 + b) % (2 * ac) == 0:
            return (c, b2, (b2 * b2 - D) // (4 * c))
    raise ArithmeticError("reduction step failed")


def class_number_forms(D: int) -> int:
    """Class number by counting forms; cycles of reduced forms when D > 0."""
    if D < 0:
        return len(reduced_forms_imaginary(D))
    seen: set = set()
    cycles = 0
    for f in reduced_forms_indefinite(D):
        if f in seen:
            continue
        cycles += 1
        g = f
        while g not in seen:
            seen.add(g)
            g = _rho(g, D)
    # cycles count narrow classes; halve when the fundamental unit has norm +1
    m, _ = squarefree_kernel(D)
    if fundamental_unit(m).field_norm() == 1:
        return cycles // 2
    return cycles


def character_values(D: int) -> list[int]:
    return [_chi(D, a) for a in range(abs(D))]


def _chi(D: int, a: int) -> int:
    """Kronecker symbol (D / a) for a >= 0."""
    if math.gcd(D, a) != 1:
        return 0
    if a == 1:
        return 1
    out = 1
    for p, e in sympy.factorint(a).items():
        out *= kronecker(D, int(p)) ** e
    return out


def l_one(D: int, precision: int = 64):
    """Certified L(1, chi_D) from the finite log-sine (D > 0) or class-number formula."""
    chi = character_values(D)
    n = abs(D)
    with ivprec(precision + 40):
        if D > 0:
            s = iv.mpf(0)
            for a in range(1, n):
                if chi[a]:
                    s += chi[a] * iv.log(iv.sin(iv.pi * a / n))
            return -s / iv.sqrt(n)
        s = iv.mpf(0)
        for a in range(1, n):
            s += chi[a] * a
        return -iv.pi * s / (n * iv.sqrt(n))


def class_number_analytic(m: int) -> int:
    D = field_discriminant(m)
    if D < 0:
        w = torsion_count(m)
        s = sum(_chi(D, a) * a for a in range(1, -D))
        h = Fraction(-w * s, 2 * -D)
        assert h.denominator == 1
        return int(h)
    prec = 64
    while prec <= 1024:
        with ivprec(prec + 40):
            R = regulator(m, prec).iv
            h = l_one(D, prec) * iv.sqrt(D) / (2 * R)
            k = int(mpmath.nint((lo(h) + hi(h)) / 2))
            if lo(h) > k - 0.25 and hi(h) < k + 0.25:
                return k
        prec *= 2
    raise UndecidedError("class number not isolated")


# --- Hurwitz zeta with an Euler-Maclaurin remainder bound -----------------------------------


def hurwitz_zeta_iv(s: int, q: Fraction, N: int = 40, p: int = 8):
    """Enclosure of sum_{n>=0} (n+q)^(-s) for integer s >= 2 and rational q > 0.

    The summand is completely monotone, so the Euler-Maclaurin remainder after p
    correction terms is bounded by the first omitted term.
    """
    q = Fraction(q)
    qi = iv.mpf(q.numerator) / q.denominator
    total = iv.mpf(0)
    for n in range(N):
        total += (qi + n) ** (-s)
    x = qi + N
    total += x ** (1 - s) / (s - 1) + x ** (-s) / 2
    rising = iv.mpf(s)  # s (s+1) ... (s + 2j - 2)
    for j in range(1, p + 2):
        term = iv.mpf(mpmath.bernoulli(2 * j)) / mpmath.factorial(2 * j) * rising * x ** (-s - 2 * j + 1)
        if j <= p:
            total += term
        else:
            bound = max(abs(lo(term)), abs(hi(term)))
            total += iv.mpf([-bound, bound])
        rising = rising * (s + 2 * j - 1) * (s + 2 * j)
    return total


def zeta_iv(s: int, precision: int = 64):
    with ivprec(precision + 40):
        return hurwitz_zeta_iv(s, Fraction(1))


def l_two(D: int, precision: int = 64):
    """Certified L(2, chi_D) = |D|^-2 sum_a chi(a) zeta(2, a/|D|)."""
    n = abs(D)
    with ivprec(precision + 40):
        s = iv.mpf(0)
        for a in range(1, n):
            c = _chi(D, a)
            if c:
                s += c * hurwitz_zeta_iv(2, Fraction(a, n))
        return s / (n * n)


# --- exact products in the compositum of quadratic fields ----------------------------------


def _mq_basis_mul(s: int, t: int) -> tuple[int, int]:
    """sqrt(s) * sqrt(t) = c * sqrt(u) for squarefree s, t (negative means i*sqrt)."""
    c = -1 if (s < 0 and t < 0) else 1
    prod = abs(s * t)
    g = math.gcd(abs(s), abs(t))
    u = prod // (g * g)
    c *= g
    if (s < 0) != (t < 0):
        u = -u
    return c, u


def multiquadratic_product(factors: list[tuple[QuadNumber, int]]) -> dict[int, Fraction]:
    """Exact prod alpha_i^k_i as a dict {squarefree u: coefficient of sqrt(u)}."""
    acc: dict[int, Fraction] = {1: Fraction(1)}
    for alpha, k in factors:
        if k == 0:
            continue
        z = alpha ** k
        term = {1: z.x}
        if z.y:
            term[z.m] = z.y
        new: dict[int, Fraction] = {}
        for s, a in acc.items():
            for t, b in term.items():
                if a == 0 or b == 0:
                    continue
                c, u = _mq_basis_mul(s, t)
                new[u] = new.get(u, Fraction(0)) + c * a * b
        acc = {u: v for u, v in new.items() if v != 0}
    return acc


def mq_is_one(z: dict[int, Fraction]) -> bool:
    return z == {1: Fraction(1)}


def mq_power(z: dict[int, Fraction], k: int) -> dict[int, Fraction]:
    out = {1: Fraction(1)}
    for _ in range(k):
        new: dict[int, Fraction] = {}
        for s, a in out.items():
            for t, b in z.items():
                c, u = _mq_basis_mul(s, t)
                new[u] = new.get(u, Fraction(0)) + c * a * b
        out = {u: v for u, v in new.items() if v != 0}
    return out
