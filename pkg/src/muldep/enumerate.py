"""Duplicate-free enumeration of algebraic numbers of bounded height.

Four sets are realized:

* integers of a field K with H <= bound (K = Q or quadratic),
* all elements of K with H <= bound,
* algebraic integers of exact degree d with H <= bound,
* algebraic numbers of exact degree d with H <= bound.

Degree streams yield minimal polynomials; each stands for its d roots.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from . import quadratic as Q
from .algnum import AlgebraicNumber, is_irreducible, mahler_at_most, quadratic_mahler_le
from .errors import InvalidInputError, UnsupportedError
from .polynomial import IntPolynomial, content, totient

MODES = ("integers-in-field", "numbers-in-field", "integers-of-degree", "numbers-of-degree")


@dataclass(frozen=True)
class EnumerationSpec:
    mode: str
    height_bound: Fraction
    field: int | None = None  # 1 for Q, m for Q(sqrt(m))
    degree: int | None = None
    include_zero: bool = False

    def __post_init__(self):
        object.__setattr__(self, "height_bound", Fraction(self.height_bound))
        if self.mode not in MODES:
            raise InvalidInputError(f"unknown mode {self.mode!r}")
        if self.height_bound < 1:
            raise InvalidInputError("height bound must be >= 1")
        in_field = self.mode.endswith("in-field")
        if in_field and (self.field is None or self.degree is not None):
            raise InvalidInputError("field modes need a field and no degree")
        if not in_field and (self.degree is None or self.field is not None):
            raise InvalidInputError("degree modes need a degree and no field")
        if self.degree is not None and self.degree < 1:
            raise InvalidInputError("degree must be >= 1")
        if self.field is not None and self.field != 1:
            Q.check_field(self.field)

    @property
    def integers(self) -> bool:
        return self.mode.startswith("integers")


# --- rationals -----------------------------------------------------------------------------


def rational_integers(H) -> list[Fraction]:
    h = math.floor(Fraction(H))
    return [Fraction(s * a) for a in range(1, h + 1) for s in (1, -1)]


def rational_numbers(H) -> list[Fraction]:
    h = math.floor(Fraction(H))
    out = []
    for q in range(1, h + 1):
        for p in range(1, h + 1):
            if math.gcd(p, q) == 1:
                out.append(Fraction(p, q))
                out.append(Fraction(-p, q))
    return out


def count_rational_integers(H) -> int:
    return 2 * math.floor(Fraction(H))


def count_rational_numbers(H) -> int:
    h = math.floor(Fraction(H))
    if h < 1:
        return 0
    return 2 * (2 * sum(totient(k) for k in range(1, h + 1)) - 1)


# --- quadratic fields ------------------------------------------------------------------------


def quadratic_integers(m: int, H) -> list[Q.QuadNumber]:
    """Nonzero integers of Q(sqrt(m)) with Weil height <= H, sorted deterministically."""
    H = Fraction(H)
    M = H * H
    out = [Q.QuadNumber.rational(a) for a in rational_integers(H)]
    mod1 = m % 4 == 1
    Mf = float(M)
    # imaginary: N = x^2 + |m| y^2 <= M; real: |x| + |y| sqrt(m) <= max(|alpha|, |alpha'|) <= M
    ymax = math.sqrt(Mf / abs(m)) if m < 0 else Mf / math.sqrt(m)
    bmax = int(2 * ymax if mod1 else ymax) + 1
    for b in range(-bmax, bmax + 1):
        if b == 0:
            continue
        y = b / 2 if mod1 else b
        room = Mf - abs(m) * y * y if m < 0 else Mf - abs(y) * math.sqrt(m)
        if room < -1:
            continue
        span = math.sqrt(max(room, 0.0)) if m < 0 else max(room, 0.0)
        shift = -b / 2 if mod1 else 0
        for a in range(math.floor(shift - span) - 1, math.ceil(shift + span) + 2):
            z = Q.QuadNumber.from_omega(m, a, b)
            n, t = z.field_norm(), z.trace()
            if m < 0:
                if n <= M:
                    out.append(z)
            elif abs(n) <= M and quadratic_mahler_le(1, int(-t), int(n), M):
                out.append(z)
    return out


def quadratic_numbers(m: int, H) -> list[Q.QuadNumber]:
    """Nonzero elements of Q(sqrt(m)) with Weil height <= H."""
    H = Fraction(H)
    M = H * H
    Mi = math.floor(M)
    out = [Q.QuadNumber.rational(q) for q in rational_numbers(H)]
    for a in range(1, Mi + 1):
        for c in range(-Mi, Mi + 1):
            if c == 0:
                continue
            for b in range(-2 * Mi, 2 * Mi + 1):
                disc = b * b - 4 * a * c
                if disc % m or not _is_square(disc // m):
                    continue
                if content((a, b, c)) != 1:
                    continue
                if quadratic_mahler_le(a, b, c, M):
                    out.append(Q.from_minpoly((c, b, a), 0))
                    out.append(Q.from_minpoly((c, b, a), 1))
    return out


def _is_square(n: int) -> bool:
    return n > 0 and math.isqrt(n) ** 2 == n


def field_elements(mode: str, m: int, H) -> list[Q.QuadNumber]:
    """Elements of B_K(H) (mode 'integers') or B*_K(H) (mode 'numbers') as QuadNumbers."""
    if mode not in ("integers", "numbers"):
        raise InvalidInputError("mode must be 'integers' or 'numbers'")
    if m == 1:
        qs = rational_integers(H) if mode == "integers" else rational_numbers(H)
        return [Q.QuadNumber.rational(q) for q in qs]
    Q.check_field(m)
    return quadratic_integers(m, H) if mode == "integers" else quadratic_numbers(m, H)


def _as_algebraic(z: Q.QuadNumber) -> AlgebraicNumber:
    return AlgebraicNumber(z.minpoly(), z.root_index() if not z.is_rational else 0)


def enum_field_integers(spec: EnumerationSpec) -> Iterator[AlgebraicNumber]:
    if spec.mode != "integers-in-field":
        raise InvalidInputError("spec mode must be integers-in-field")
    if spec.include_zero:
        yield AlgebraicNumber.rational(0)
    for z in field_elements("integers", spec.field, spec.height_bound):
        yield _as_algebraic(z)


def enum_field_numbers(spec: EnumerationSpec) -> Iterator[AlgebraicNumber]:
    if spec.mode != "numbers-in-field":
        raise InvalidInputError("spec mode must be numbers-in-field")
    if spec.include_zero:
        yield AlgebraicNumber.rational(0)
    for z in field_elements("numbers", spec.field, spec.height_bound):
        yield _as_algebraic(z)


# --- exact degree ------------------------------------------------------------------------------


def _box(d: int, M: Fraction, monic: bool) -> Iterator[tuple[int, ...]]:
    """Coefficient vectors inside |a_i| <= binom(d, i) * M."""
    lim = [math.floor(math.comb(d, i) * M) for i in range(d + 1)]
    lead = [1] if monic else range(1, lim[d] + 1)
    ranges = [range(-lim[i], lim[i] + 1) for i in range(d)]
    for a in lead:
        for rest in itertools.product(*ranges):
            yield tuple(rest) + (a,)


def _mahler_ok(c: tuple[int, ...], M: Fraction) -> bool:
    d = len(c) - 1
    if max(c[-1], abs(c[0])) > M:
        return False
    if d == 1:
        return True
    if d == 2:
        return quadratic_mahler_le(c[2], c[1], c[0], M)
    # Landau: M(f) <= ||f||_2
    if sum(x * x for x in c) <= M * M:
        return True
    return mahler_at_most(c, M)


def degree_polynomials(mode: str, d: int, H) -> list[IntPolynomial]:
    """Minimal polynomials of the degree-d integers ('integers') or numbers of height <= H."""
    if mode not in ("integers", "numbers"):
        raise InvalidInputError("mode must be 'integers' or 'numbers'")
    if d < 1:
        raise InvalidInputError("degree must be >= 1")
    M = Fraction(H) ** d
    out = []
    for c in _box(d, M, mode == "integers"):
        if c[0] == 0:
            continue
        if mode == "numbers" and content(c) != 1:
            continue
        if d > 1 and not is_irreducible(c):
            continue
        if _mahler_ok(c, M):
            out.append(IntPolynomial(c))
    return out


def enum_degree_integers(spec: EnumerationSpec) -> Iterator[IntPolynomial]:
    if spec.mode != "integers-of-degree":
        raise InvalidInputError("spec mode must be integers-of-degree")
    if spec.include_zero and spec.degree == 1:
        yield IntPolynomial((0, 1))
    yield from degree_polynomials("integers", spec.degree, spec.height_bound)


def enum_degree_numbers(spec: EnumerationSpec) -> Iterator[IntPolynomial]:
    if spec.mode != "numbers-of-degree":
        raise InvalidInputError("spec mode must be numbers-of-degree")
    if spec.include_zero and spec.degree == 1:
        yield IntPolynomial((0, 1))
    yield from degree_polynomials("numbers", spec.degree, spec.height_bound)


def degree_elements(mode: str, d: int, H) -> list:
    """Roots of the degree-d stream: QuadNumbers for d <= 2, AlgebraicNumbers otherwise."""
    out = []
    for f in degree_polynomials(mode, d, H):
        for i in range(d):
            if d <= 2:
                out.append(Q.from_minpoly(f.coeffs, i))
            else:
                out.append(AlgebraicNumber(f, i))
    return out


def stream(spec: EnumerationSpec) -> Iterator[AlgebraicNumber]:
    """Every element of the set as an AlgebraicNumber (degree streams expanded)."""
    if spec.mode == "integers-in-field":
        yield from enum_field_integers(spec)
    elif spec.mode == "numbers-in-field":
        yield from enum_field_numbers(spec)
    else:
        gen = enum_degree_integers(spec) if spec.integers else enum_degree_numbers(spec)
        for f in gen:
            for i in range(f.degree):
                yield AlgebraicNumber(f, i)


def count(spec: EnumerationSpec) -> int:
    """Size of the set (conjugates counted individually)."""
    if spec.mode.endswith("in-field"):
        if spec.field == 1 and not spec.include_zero:
            H = spec.height_bound
            return count_rational_integers(H) if spec.integers else count_rational_numbers(H)
        return sum(1 for _ in stream(spec))
    if spec.degree == 1 and not spec.include_zero:
        H = spec.height_bound
        return count_rational_integers(H) if spec.integers else count_rational_numbers(H)
    gen = enum_degree_integers(spec) if spec.integers else enum_degree_numbers(spec)
    return sum(f.degree for f in gen)


def write_jsonl(spec: EnumerationSpec, path) -> int:
    n = 0
    with open(path, "w") as fh:
        for alpha in stream(spec):
            fh.write(json.dumps(alpha.to_json()) + "\n")
            n += 1
    return n
