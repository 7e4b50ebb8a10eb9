"""Smooth numbers, the product equation a_1...a_k = b_1...b_k, and rank n-1 tuples over Q."""

from __future__ import annotations

import itertools
import math
import sys
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np
import sympy

from .errors import BudgetExceededError, InvalidInputError

PSI_LIMIT = 2 ** 63 - 1
DEFAULT_SIEVE_BUDGET = 3 * 10 ** 8


# --- smooth numbers ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmoothQuery:
    x: float
    y: float

    def __post_init__(self):
        if not (2 < self.y <= self.x):
            raise InvalidInputError("need 2 < y <= x")

    @property
    def u(self) -> float:
        return math.log(self.x) / math.log(self.y)

    @property
    def Z(self) -> float:
        lx, ly = math.log(self.x), math.log(self.y)
        return math.log1p(self.y / lx) * lx / ly + math.log1p(lx / self.y) * self.y / ly


@lru_cache(maxsize=None)
def _primes_upto(y: int) -> tuple[int, ...]:
    return tuple(int(p) for p in sympy.primerange(2, y + 1))


def psi_exact(x, y) -> int:
    """Number of n <= x without prime factors > y (y = 2 allowed: powers of two)."""
    if not (2 <= y <= x):
        raise InvalidInputError("need 2 <= y <= x")
    X = math.floor(x)
    if X > PSI_LIMIT:
        raise InvalidInputError("x outside the 64-bit range")
    primes = _primes_upto(math.floor(y))
    memo: dict[tuple[int, int], int] = {}

    def rec(v: int, i: int) -> int:
        # n <= v built from the first i primes
        if v < 2 or i == 0:
            return 1
        if primes[i - 1] >= v:
            return v
        key = (v, i)
        if key in memo:
            return memo[key]
        p = primes[i - 1]
        total = 0
        while v >= 1:
            total += rec(v, i - 1)
            v //= p
        memo[key] = total
        return total

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 10 * len(primes) + 1000))
    try:
        return rec(X, len(primes))
    finally:
        sys.setrecursionlimit(old)


def psi_bruteforce(x, y) -> int:
    X = math.floor(x)
    return sum(1 for n in range(1, X + 1) if n == 1 or max(sympy.primefactors(n)) <= y)


def psi_debruijn(x, y) -> dict:
    """Z from de Bruijn's formula and the point estimate exp(Z)."""
    q = SmoothQuery(float(x), float(y))
    return {"x": x, "y": y, "u": q.u, "Z": q.Z, "estimate": math.exp(q.Z)}


def psi_report(x, y) -> dict:
    row = psi_debruijn(x, y)
    exact = psi_exact(x, y)
    row.update({"psi": exact, "log_psi_over_Z": math.log(exact) / row["Z"]})
    return row


# --- product equation -----------------------------------------------------------------------------


@dataclass(frozen=True)
class ProductEquationSpec:
    k: int
    q: int
    T: float
    gammas: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.k < 2 or self.q < 2:
            raise InvalidInputError("k and q must be >= 2")
        if self.T < 2:
            raise InvalidInputError("T must be >= 2")
        g = self.gammas or (1.0,) * self.k
        if len(g) != self.k or any(x <= 0 for x in g):
            raise InvalidInputError("need k positive exponents")
        object.__setattr__(self, "gammas", tuple(g))

    def bounds(self) -> list[int]:
        # T^gamma, computed so that integral powers stay exact
        out = []
        for g in self.gammas:
            if float(g).is_integer() and float(self.T).is_integer():
                out.append(int(self.T) ** int(g))
            else:
                out.append(math.floor(self.T ** g + 1e-9))
        return out


def _coprime_upto(B: int, q: int) -> np.ndarray:
    a = np.arange(1, B + 1, dtype=np.int64)
    return a[np.gcd(a, q) == 1]


def representation_counts(bounds: Sequence[int], q: int, budget: int = DEFAULT_SIEVE_BUDGET) -> np.ndarray:
    """r[m] = #{(a_1..a_k): prod a_i = m, a_i <= bounds[i], gcd(a_i, q) = 1}."""
    M = math.prod(bounds)
    if M > budget:
        raise BudgetExceededError(M, budget, "sieve entries")
    r = np.zeros(bounds[0] + 1, dtype=np.int64)
    r[_coprime_upto(bounds[0], q)] = 1
    for B in bounds[1:]:
        size = (len(r) - 1) * B
        nxt = np.zeros(size + 1, dtype=np.int64)
        support = np.nonzero(r)[0]
        vals = r[support]
        for b in _coprime_upto(B, q):
            # support * b are distinct for a fixed b, so fancy-index addition is safe
            nxt[support * b] += vals
        r = nxt
    return r


def product_equation_count(spec: ProductEquationSpec, budget: int = DEFAULT_SIEVE_BUDGET) -> int:
    """#{(a, b): a_1...a_k = b_1...b_k, a_i, b_i <= T^gamma_i, gcd(a_i b_i, q) = 1}."""
    r = representation_counts(spec.bounds(), spec.q, budget)
    return int(np.dot(r, r))


def product_equation_bruteforce(spec: ProductEquationSpec) -> int:
    ranges = [[a for a in range(1, B + 1) if math.gcd(a, spec.q) == 1] for B in spec.bounds()]
    r: dict[int, int] = defaultdict(int)
    for tup in itertools.product(*ranges):
        r[math.prod(tup)] += 1
    return sum(v * v for v in r.values())


# --- rank n-1 construction ------------------------------------------------------------------------


def default_primes(k: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    odd = []
    p = 3
    while len(odd) < 2 * (k - 1):
        if sympy.isprime(p):
            odd.append(p)
        p += 2
    return tuple(odd[0::2]), tuple(odd[1::2])


def _check_primes(k: int, ps: Sequence[int], qs: Sequence[int]):
    if k < 2:
        raise InvalidInputError("n must be even and >= 4")
    allp = list(ps) + list(qs)
    if len(ps) != k - 1 or len(qs) != k - 1:
        raise InvalidInputError(f"need {k - 1} primes on each side")
    if len(set(allp)) != len(allp) or any(p == 2 or not sympy.isprime(p) for p in allp):
        raise InvalidInputError("primes must be distinct and odd")


def prefactors(k: int, ps: Sequence[int], qs: Sequence[int]) -> list[int]:
    """Multipliers of a_1..a_k, b_1..b_k in the constructed tuple."""
    return ([2 * math.prod(ps)] + list(qs)) + ([2 * math.prod(qs)] + list(ps))


def build_tuple(a: Sequence[int], b: Sequence[int], ps: Sequence[int], qs: Sequence[int]) -> tuple[int, ...]:
    k = len(a)
    pre = prefactors(k, ps, qs)
    return tuple(c * x for c, x in zip(pre, list(a) + list(b)))


def lower_bound_generate(n: int, T, primes: Sequence[int] | None = None) -> Iterator[tuple[int, ...]]:
    """Tuples with nu_1...nu_k = nu_{k+1}...nu_n and rank n - 1, from a_i, b_i <= T.

    primes lists p_2..p_k followed by q_2..q_k.
    """
    if n % 2 or n < 4:
        raise InvalidInputError("n must be even and >= 4")
    k = n // 2
    if primes is None:
        ps, qs = default_primes(k)
    else:
        primes = list(primes)
        ps, qs = tuple(primes[: k - 1]), tuple(primes[k - 1:])
    _check_primes(k, ps, qs)
    q = 2 * math.prod(ps) * math.prod(qs)
    vals = [a for a in range(1, math.floor(T) + 1) if math.gcd(a, q) == 1]
    by_product: dict[int, list[tuple[int, ...]]] = defaultdict(list)
    for tup in itertools.product(vals, repeat=k):
        by_product[math.prod(tup)].append(tup)
    for prod in sorted(by_product):
        group = by_product[prod]
        for a in group:
            for b in group:
                yield build_tuple(a, b, ps, qs)


def lower_bound_census(n: int, H, primes: Sequence[int] | None = None,
                       budget: int = DEFAULT_SIEVE_BUDGET) -> dict:
    """Number of constructed tuples with all |nu_i| <= H, taking T = H / (largest prefactor)."""
    if n % 2 or n < 4:
        raise InvalidInputError("n must be even and >= 4")
    k = n // 2
    if primes is None:
        ps, qs = default_primes(k)
    else:
        primes = list(primes)
        ps, qs = tuple(primes[: k - 1]), tuple(primes[k - 1:])
    _check_primes(k, ps, qs)
    T = math.floor(H) // max(prefactors(k, ps, qs))
    q = 2 * math.prod(ps) * math.prod(qs)
    count = 0 if T < 1 else int(np.dot(r := representation_counts([T] * k, q, budget), r))
    scale = H ** k * math.log(H) ** ((k - 1) ** 2)
    return {"n": n, "H": H, "T": T, "primes": list(ps) + list(qs), "count": count,
            "ratio": count / scale}
