"""Independent reference computations used by the tests (numeric roots, brute force)."""

from __future__ import annotations

import itertools
import math

import mpmath
import sympy


def roots40(c):
    with mpmath.workdps(40):
        return mpmath.polyroots(list(reversed(c)), maxsteps=500, extraprec=300)


def degenerate_oracle(c) -> bool:
    """Two distinct roots whose quotient has modulus 1 and some power k <= 2 d^4 equal to 1."""
    d = len(c) - 1
    with mpmath.workdps(40):
        roots = roots40(c)
        tol = mpmath.mpf(10) ** -25
        for i, j in itertools.permutations(range(len(roots)), 2):
            ri, rj = roots[i], roots[j]
            if abs(ri - rj) < tol or abs(rj) < tol or abs(ri) < tol:
                continue
            z = ri / rj
            if abs(abs(z) - 1) > tol:
                continue
            for k in range(1, 2 * d ** 4 + 1):
                if abs(z ** k - 1) < tol:
                    return True
    return False


def cyclic_cubic_oracle(c) -> bool:
    """Cubic resolvent with roots sum a_i^2 a_{i+1}, sum a_i a_{i+1}^2 has an integer root."""
    with mpmath.workdps(40):
        a = roots40(c)
        t1 = a[0] ** 2 * a[1] + a[1] ** 2 * a[2] + a[2] ** 2 * a[0]
        t2 = a[0] * a[1] ** 2 + a[1] * a[2] ** 2 + a[2] * a[0] ** 2
        s = int(mpmath.nint((t1 + t2).real))
        p = int(mpmath.nint((t1 * t2).real))
    disc = s * s - 4 * p
    return disc >= 0 and math.isqrt(disc) ** 2 == disc


def exponent_rank_oracle(values) -> bool:
    """Dependence of nonzero rationals via the rank of the prime-exponent matrix."""
    from fractions import Fraction

    if any(abs(Fraction(v)) == 1 for v in values):
        return True
    rows = []
    for v in values:
        v = Fraction(v)
        f = sympy.factorint(abs(v.numerator))
        for p, e in sympy.factorint(v.denominator).items():
            f[p] = f.get(p, 0) - e
        rows.append(f)
    primes = sorted(set().union(*rows))
    M = sympy.Matrix([[r.get(p, 0) for p in primes] for r in rows]) if primes else sympy.zeros(len(rows), 1)
    return M.rank() < len(values)


def dependent_pairs_upto(h: int) -> list[list[bool]]:
    """dep[a][b] for 2 <= a, b <= h: a^j = b^i for some 1 <= i, j (powers of a common base)."""
    dep = [[False] * (h + 1) for _ in range(h + 1)]
    for a in range(2, h + 1):
        for b in range(2, h + 1):
            # log a / log b rational with small denominators suffices for a, b <= h
            found = False
            for i in range(1, h.bit_length() + 1):
                for j in range(1, h.bit_length() + 1):
                    if a ** j == b ** i:
                        found = True
                        break
                if found:
                    break
            dep[a][b] = found
    return dep


def l2_rationals_bruteforce(h: int, dep) -> int:
    """L_{2,Q}(h) by direct pair classification (signs handled by symmetry)."""
    total = 0
    for a in range(1, h + 1):
        for b in range(1, h + 1):
            if a == 1 or b == 1 or dep[a][b]:
                total += 4
    return total
