"""Multiplicative dependence: exact kernels, bounded search, verification and rank.

For elements of Q and of quadratic fields, alpha^2 = N(alpha) * (alpha / alpha'),
and the map

    alpha -> ( v_p(N(alpha)) for all p ;  v_P(alpha) - v_P'(alpha) for split P ;
               log|alpha / alpha'| for real fields )

is injective modulo torsion.  Minus parts of different fields lie in different
isotypic components of the compositum, so a tuple is dependent exactly when these
vectors are linearly dependent.  The real coordinates are handled exactly: on the
integer kernel of the discrete part, the minus part is a unit, whose exponent in
the fundamental unit is an integer.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath
import sympy
from mpmath import iv

from . import quadratic as Q
from .algnum import AlgebraicNumber, torsion_order, weil_height
from .certified import MAX_PRECISION, hi, ivprec, lo
from .errors import InvalidInputError, UndecidedError

METHODS = ("rational-kernel", "quadratic-kernel", "bounded-search")


@dataclass(frozen=True)
class DependenceCertificate:
    relation: tuple[int, ...]
    method: str
    verified: bool

    def to_json(self) -> dict:
        return {"relation": list(self.relation), "method": self.method, "verified": self.verified}


@dataclass(frozen=True)
class RankResult:
    s: int
    witness: tuple[int, ...] | None = None

    def to_json(self) -> dict:
        return {"rank": self.s, "witness": list(self.witness) if self.witness is not None else None}


# --- coercion ------------------------------------------------------------------------------


def as_quad(x) -> Q.QuadNumber:
    """Coerce ints, Fractions, QuadNumbers and degree <= 2 AlgebraicNumbers."""
    if isinstance(x, Q.QuadNumber):
        z = x
    elif isinstance(x, AlgebraicNumber):
        if x.degree > 2:
            raise InvalidInputError("element has degree > 2")
        z = Q.from_minpoly(x.minpoly.coeffs, x.root_index)
    elif isinstance(x, (int, Fraction)):
        z = Q.QuadNumber.rational(x)
    else:
        raise InvalidInputError(f"cannot interpret {x!r} as an algebraic number")
    if z.is_zero:
        raise InvalidInputError("zero is not in the multiplicative group")
    return z


def as_algebraic(x) -> AlgebraicNumber:
    if isinstance(x, AlgebraicNumber):
        a = x
    else:
        z = as_quad(x)
        a = AlgebraicNumber(z.minpoly(), 0 if z.is_rational else z.root_index())
    if a.is_zero:
        raise InvalidInputError("zero is not in the multiplicative group")
    return a


# --- exact linear algebra --------------------------------------------------------------------


def rref(rows: list[list], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    mat = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        p = mat[r][c]
        mat[r] = [x / p for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(rows: list[list], ncols: int) -> int:
    return len(rref(rows, ncols)[1]) if rows and ncols else 0


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to coprime integers with first nonzero entry positive."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        return tuple(ints)
    ints = [x // g for x in ints]
    first = next(x for x in ints if x)
    if first < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def kernel(rows: list[list], ncols: int) -> list[tuple[int, ...]]:
    """Integer basis (one primitive vector per free column) of the rational kernel."""
    red, pivots = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(primitive(v))
    return basis


def normalize_sign(k: Sequence[int]) -> tuple[int, ...]:
    k = tuple(int(x) for x in k)
    first = next((x for x in k if x), 0)
    return tuple(-x for x in k) if first < 0 else k


# --- rationals ---------------------------------------------------------------------------------


def exponent_vector_rational(q) -> tuple[int, dict[int, int]]:
    q = Fraction(q)
    if q == 0:
        raise InvalidInputError("0 has no exponent vector")
    e: dict[int, int] = {}
    for p, k in sympy.factorint(abs(q.numerator)).items():
        e[int(p)] = int(k)
    for p, k in sympy.factorint(q.denominator).items():
        e[int(p)] = -int(k)
    return (1 if q < 0 else 0), e


def _rational_matrix(qs: Sequence[Fraction]) -> tuple[list[list[int]], list[int]]:
    vecs = [exponent_vector_rational(q) for q in qs]
    primes = sorted(set().union(*(v[1].keys() for v in vecs))) if vecs else []
    rows = [[v[1].get(p, 0) for v in vecs] for p in primes]
    return rows, [v[0] for v in vecs]


def dependence_rational(values: Sequence) -> DependenceCertificate | None:
    """A relation among nonzero rationals, or None when they are independent."""
    qs = [Fraction(v) for v in values]
    if any(q == 0 for q in qs):
        raise InvalidInputError("zero coordinate")
    n = len(qs)
    for i, q in enumerate(qs):
        if abs(q) == 1:
            k = [0] * n
            k[i] = 1 if q == 1 else 2
            return _certify(qs, tuple(k), "rational-kernel")
    rows, signs = _rational_matrix(qs)
    ker = kernel(rows, n)
    if not ker:
        return None
    k = ker[0]
    if sum(ki * si for ki, si in zip(k, signs)) % 2:
        k = tuple(2 * x for x in k)
    return _certify(qs, normalize_sign(k), "rational-kernel")


def _certify(values, k, method) -> DependenceCertificate:
    return DependenceCertificate(tuple(k), method, verify_relation(values, k))


# --- quadratic fields and their compositum --------------------------------------------------------


def _vp_fraction(q: Fraction, p: int) -> int:
    v = 0
    n, d = q.numerator, q.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


@lru_cache(maxsize=500_000)
def discrete_vector(z: Q.QuadNumber) -> tuple[tuple[tuple, int], ...]:
    """Sorted nonzero integer coordinates of the free embedding (without real parts)."""
    out: dict[tuple, int] = {}
    n = z.field_norm()
    for p in sympy.factorint(abs(n.numerator)).keys() | sympy.factorint(n.denominator).keys():
        v = _vp_fraction(n, int(p))
        if v:
            out[("Q", int(p))] = v
    if not z.is_rational:
        for p in Q.relevant_primes(z):
            r = Q.split_root(z.m, p)
            if r is None:
                continue
            vP, vQ = Q.split_valuations(z, p, r)
            if vP != vQ:
                out[("S", z.m, p)] = vP - vQ
    return tuple(sorted(out.items()))


@lru_cache(maxsize=500_000)
def is_torsion(z: Q.QuadNumber) -> bool:
    return Q.root_of_unity_order(z) is not None


def _minus(z: Q.QuadNumber) -> Q.QuadNumber:
    return z / z.conj()


def relation_basis(elems: Sequence[Q.QuadNumber]) -> list[tuple[int, ...]]:
    """Basis of the relation lattice tensored with Q (integer vectors)."""
    n = len(elems)
    vecs = [dict(discrete_vector(z)) for z in elems]
    keys = sorted(set().union(*vecs)) if vecs else []
    rows = [[v.get(key, 0) for v in vecs] for key in keys]
    ker = kernel(rows, n)
    real = sorted({z.m for z in elems if z.m > 1})
    if not ker or not real:
        return ker
    trows = []
    for m in real:
        idx = [i for i, z in enumerate(elems) if z.m == m]
        minus = {i: _minus(elems[i]) for i in idx}
        row = []
        for kv in ker:
            u = Q.QuadNumber.rational(1)
            for i in idx:
                if kv[i]:
                    u = u * minus[i] ** kv[i]
            row.append(Q.unit_exponent(u, m)[0])
        trows.append(row)
    comb = kernel(trows, len(ker))
    out = []
    for c in comb:
        v = [sum(c[j] * ker[j][i] for j in range(len(ker))) for i in range(n)]
        out.append(primitive(v))
    return out


def _torsion_fix(elems: Sequence[Q.QuadNumber], k: tuple[int, ...]) -> tuple[int, ...]:
    gamma = Q.multiquadratic_product(list(zip(elems, k)))
    for j in (1, 2, 3, 4, 6, 8, 12, 24):
        if Q.mq_is_one(Q.mq_power(gamma, j)):
            return tuple(j * x for x in k)
    raise ArithmeticError("free-part relation is not torsion")


def dependence_compositum(values: Sequence) -> DependenceCertificate | None:
    """Exact dependence for elements of Q and of (possibly different) quadratic fields."""
    elems = [as_quad(v) for v in values]
    n = len(elems)
    for i, z in enumerate(elems):
        if is_torsion(z):
            k = [0] * n
            k[i] = Q.root_of_unity_order(z)
            return _certify(elems, normalize_sign(k), "quadratic-kernel")
    basis = relation_basis(elems)
    if not basis:
        return None
    k = _torsion_fix(elems, basis[0])
    return _certify(elems, normalize_sign(k), "quadratic-kernel")


def dependence_quadratic(m: int, values: Sequence) -> DependenceCertificate | None:
    """Exact dependence inside Q(sqrt(m)); coordinates outside the field are rejected."""
    m = Q.check_field(m)
    elems = [as_quad(v) for v in values]
    for z in elems:
        if z.m not in (1, m):
            raise InvalidInputError(f"{z} is not in Q(sqrt({m}))")
    return dependence_compositum(elems)


# --- certified verification ----------------------------------------------------------------------


def _is_quadratic_like(x) -> bool:
    if isinstance(x, (int, Fraction, Q.QuadNumber)):
        return True
    return isinstance(x, AlgebraicNumber) and x.degree <= 2


def verify_relation(values: Sequence, k: Sequence[int]) -> bool:
    """Exactly decide prod values[i]^k[i] == 1."""
    k = tuple(int(x) for x in k)
    if len(k) != len(values):
        raise InvalidInputError("relation length differs from tuple length")
    if not any(k):
        raise InvalidInputError("relation must be nonzero")
    if all(_is_quadratic_like(v) for v in values):
        elems = [as_quad(v) for v in values]
        return Q.mq_is_one(Q.multiquadratic_product(list(zip(elems, k))))
    return _verify_certified([as_algebraic(v) for v in values], k)


def _verify_certified(alphas: list[AlgebraicNumber], k: tuple[int, ...]) -> bool:
    # if gamma != 1 then |gamma - 1| >= (2B)^-D with D = prod deg, B = prod H^|k|
    D = 1
    logB = mpmath.mpf(0)
    for a, e in zip(alphas, k):
        if e:
            D *= a.degree
            logB += abs(e) * mpmath.log(weil_height(a, 32).upper)
    gap_bits = int(D * (1 + logB / mpmath.log(2))) + 2
    prec = 64
    while True:
        work = min(prec, MAX_PRECISION)
        extra = sum(abs(e) for e in k).bit_length() + 16
        with ivprec(work + extra):
            g = iv.mpc(1, 0)
            for a, e in zip(alphas, k):
                if not e:
                    continue
                z = a.enclosure(work).value_iv()
                if e < 0:
                    z = iv.mpc(1, 0) / z
                g = g * _ipow(z, abs(e))
            dr, di = g.real - 1, g.imag
            if lo(dr) > 0 or hi(dr) < 0 or lo(di) > 0 or hi(di) < 0:
                return False
            rad = max(hi(dr) - lo(dr), hi(di) - lo(di))
            if rad < mpmath.mpf(2) ** (-gap_bits - 1):
                return True
        if work >= MAX_PRECISION:
            raise UndecidedError("relation undecided at maximal precision")
        prec = max(2 * prec, gap_bits + 32) if prec < gap_bits else 2 * prec


def _ipow(z, e: int):
    out = iv.mpc(1, 0)
    while e:
        if e & 1:
            out = out * z
        z = z * z
        e >>= 1
    return out


# --- bounded search --------------------------------------------------------------------------------


def _shell(n: int, b: int):
    """Exponent vectors with max |k_i| = b, first nonzero positive, lexicographic order."""
    for k in itertools.product(range(-b, b + 1), repeat=n):
        if max(abs(x) for x in k) != b:
            continue
        first = next(x for x in k if x)
        if first > 0:
            yield k


def _log_abs(a: AlgebraicNumber) -> float:
    return math.log(abs(a.approx(20)))


def dependence_bounded(values: Sequence, B: int) -> DependenceCertificate | None:
    """First verified relation with 0 < max|k_i| <= B, or None (not a proof of independence)."""
    if B < 1:
        raise InvalidInputError("bound must be >= 1")
    alphas = [as_algebraic(v) for v in values]
    n = len(alphas)
    logs = [_log_abs(a) for a in alphas]
    args = [cmath.phase(a.approx(20)) for a in alphas]
    for b in range(1, B + 1):
        for k in _shell(n, b):
            if abs(sum(ki * li for ki, li in zip(k, logs))) > 1e-6:
                continue
            # the argument of the product must be a multiple of 2 pi
            t = sum(ki * float(ai) for ki, ai in zip(k, args)) / (2 * math.pi)
            if abs(t - round(t)) > 1e-6:
                continue
            if verify_relation(alphas, k):
                return DependenceCertificate(tuple(k), "bounded-search", True)
    return None


def default_bound(H) -> int:
    return max(8, math.ceil(math.log(2 * float(H)) ** 2))


# --- dispatch and rank --------------------------------------------------------------------------------


def find_dependence(values: Sequence, bound: int | None = None) -> DependenceCertificate | None:
    if all(isinstance(v, (int, Fraction)) or (isinstance(v, Q.QuadNumber) and v.is_rational)
           or (isinstance(v, AlgebraicNumber) and v.is_rational) for v in values):
        return dependence_rational([as_quad(v).x for v in values])
    if all(_is_quadratic_like(v) for v in values):
        return dependence_compositum(values)
    return dependence_bounded(values, bound or 8)


def _torsion_any(values) -> int | None:
    for i, v in enumerate(values):
        if _is_quadratic_like(v):
            if is_torsion(as_quad(v)):
                return i
        elif torsion_order(v) is not None:
            return i
    return None


def rank_from_basis(n: int, basis: list[tuple[int, ...]]) -> RankResult:
    """Rank s from a relation basis: spark of the coordinate vectors minus one."""
    r = len(basis)
    if r == 0:
        return RankResult(n, None)
    for size in range(2, n + 1):
        for S in itertools.combinations(range(n), size):
            comp = [i for i in range(n) if i not in S]
            # relations supported on S: kernel dimension r - rank(basis restricted to comp)
            sub = [[basis[j][i] for j in range(r)] for i in comp]
            if rank(sub, r) < r:
                return RankResult(size - 1, S)
    return RankResult(n, None)


def multiplicative_rank(values: Sequence, bound: int | None = None) -> RankResult:
    """s = 0 with torsion; else (size of the smallest dependent subset) - 1; n if independent."""
    n = len(values)
    if n == 0:
        raise InvalidInputError("empty tuple")
    t = _torsion_any(values)
    if t is not None:
        return RankResult(0, (t,))
    if all(_is_quadratic_like(v) for v in values):
        elems = [as_quad(v) for v in values]
        return rank_from_basis(n, relation_basis(elems))
    for size in range(2, n + 1):
        for S in itertools.combinations(range(n), size):
            if find_dependence([values[i] for i in S], bound) is not None:
                return RankResult(size - 1, S)
    return RankResult(n, None)
