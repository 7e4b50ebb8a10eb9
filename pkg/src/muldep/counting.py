"""Counting multiplicatively dependent tuples of bounded height, stratified by rank.

Strata: strata[s] counts dependent n-tuples of multiplicative rank s (0 <= s <= n-1).
Torsion is absorbed by dependence, so multiplying coordinates by -1 never changes
the rank; the fast paths count sign-reduced tuples and scale by 2^n.

Paths:

* rationals, n = 2: closed form through perfect-power lines,
* rationals, n = 3: lines and planes of exponent vectors,
* pairs in quadratic fields or of degree 2: explicit line classes,
* everything else: sign-reduced multisets with per-multiset rank and a budget,
* a brute-force path over all ordered tuples (reference for tests).
"""

from __future__ import annotations

import itertools
import logging
import math
import time
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import sympy
from mpmath import iv

from . import fields as F
from . import quadratic as Q
from .algnum import AlgebraicNumber, galois_is_full, is_degenerate, is_irreducible, torsion_order
from .certified import CertifiedValue, ivprec, ivq
from .enumerate import (count_rational_integers, count_rational_numbers, degree_elements,
                        degree_polynomials, field_elements)
from .errors import BudgetExceededError, InvalidInputError, UndecidedError, UnsupportedError
from .multdep import (RankResult, default_bound, discrete_vector, find_dependence, is_torsion,
                      kernel, rank_from_basis, relation_basis)
from .polynomial import IntPolynomial, content, orders_with_totient_at_most, times_root_of_unity_poly

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10 ** 9


@dataclass
class CountRecord:
    mode: str  # "integers" or "numbers"
    kind: str  # "field" or "degree"
    n: int
    field_or_degree: str
    H: Fraction
    total: int
    strata: list[int]
    main_term: CertifiedValue
    N: int
    torsion: int
    elapsed: float = 0.0
    method: str = ""
    undecided: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def ratio(self) -> CertifiedValue:
        with ivprec(F.PREC + 20):
            return CertifiedValue.from_iv(iv.mpf(self.total) / self.main_term.iv, F.PREC)

    def check(self) -> None:
        if self.total != sum(self.strata):
            raise AssertionError("total differs from the sum of strata")
        if self.strata[0] != self.N ** self.n - (self.N - self.torsion) ** self.n:
            raise AssertionError("rank-0 stratum differs from the closed form")

    def csv_header(self) -> list[str]:
        return (["mode", "n", "field_or_degree", "H", "total"] + [f"s{i}" for i in range(self.n)]
                + ["main_term", "main_term_radius", "ratio", "ratio_radius", "elapsed_s"])

    def csv_row(self) -> list:
        r = self.ratio
        return ([self.mode, self.n, self.field_or_degree, str(self.H), self.total] + list(self.strata)
                + [_fmt(self.main_term.mid), _fmt(self.main_term.radius, 3), _fmt(r.mid), _fmt(r.radius, 3),
                   f"{self.elapsed:.3f}"])

    def to_json(self) -> dict:
        return {"mode": self.mode, "kind": self.kind, "n": self.n,
                "field_or_degree": self.field_or_degree, "H": str(self.H), "total": self.total,
                "strata": {str(s): v for s, v in enumerate(self.strata)},
                "main_term": self.main_term.to_json(), "ratio": self.ratio.to_json(),
                "N": self.N, "torsion": self.torsion, "method": self.method,
                "undecided": self.undecided, "elapsed_s": round(self.elapsed, 3), **self.extra}


def _fmt(x, digits: int = 15) -> str:
    import mpmath

    return mpmath.nstr(x, digits)


# --- main terms ---------------------------------------------------------------------------


def main_term_field(mode: str, inv: F.FieldInvariants, n: int, H) -> CertifiedValue:
    H = Fraction(H)
    with ivprec(F.PREC + 40):
        h = ivq(H)
        if mode == "integers":
            v = F.C3(n, inv).iv * h ** (inv.d * (n - 1))
            if inv.r:
                v = v * iv.log(h) ** (inv.r * (n - 1))
        else:
            v = F.C4(n, inv).iv * h ** (2 * inv.d * (n - 1))
        return CertifiedValue.from_iv(v, F.PREC)


def main_term_degree(mode: str, d: int, n: int, H) -> CertifiedValue:
    H = Fraction(H)
    with ivprec(F.PREC + 40):
        h = ivq(H)
        if mode == "integers":
            v = ivq(F.C7(n, d)) * h ** (d * d * (n - 1))
        else:
            v = F.C8(n, d).iv * h ** (d * (d + 1) * (n - 1))
        return CertifiedValue.from_iv(v, F.PREC)


def error_term(kind: str, mode: str, n: int, d: int, r: int = 0, imaginary_or_q: bool = False) -> dict:
    """The theorems' error term as {H_exponent, log_exponent, note}."""
    ex = F.error_exponents(d)
    if kind == "field" and mode == "integers":
        if imaginary_or_q:
            return {"H_exponent": d * (n - 1.5), "log_exponent": 0, "note": "O(H^{d(n-3/2)})"}
        return {"H_exponent": d * (n - 1), "log_exponent": r * (n - 1) - 1,
                "note": "O(H^{d(n-1)} (log H)^{r(n-1)-1})"}
    if kind == "field":
        note = "log H" if (d == 1 and n == 2) else ("exp(c log H/log log H)" if d == 1 else "1")
        return {"H_exponent": 2 * d * (n - 1) - 1, "log_exponent": 1 if (d == 1 and n == 2) else 0,
                "note": f"O(H^{{2d(n-1)-1}} g(H)), g = {note}"}
    if mode == "integers":
        if n == 2 and (d == 2 or d % 2 == 1):
            return {"H_exponent": d * d - d, "log_exponent": ex.rho, "note": "O(H^{d^2-d} (log H)^rho(d))"}
        return {"H_exponent": d * d * (n - 1) - d / 2, "log_exponent": 0, "note": "O(H^{d^2(n-1)-d/2})"}
    if n == 2 and (d == 2 or d % 2 == 1):
        return {"H_exponent": d * d, "log_exponent": ex.vartheta, "note": "O(H^{d^2} (log H)^vartheta(d))"}
    return {"H_exponent": d * (d + 1) * (n - 1) - d / 2, "log_exponent": 1,
            "note": "O(H^{d(d+1)(n-1)-d/2} log H)"}


# --- integer helpers --------------------------------------------------------------------------


def iroot(x: int, k: int) -> int:
    """floor(x^(1/k)) for x >= 0."""
    if x < 2 or k == 1:
        return x
    r = int(round(x ** (1.0 / k)))
    while r ** k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


@lru_cache(maxsize=None)
def _totient_prefix(h: int) -> tuple[int, ...]:
    """prefix[Y] = sum_{p=2}^{Y} phi(p)."""
    phi = list(range(h + 1))
    for p in range(2, h + 1):
        if phi[p] == p:
            for k in range(p, h + 1, p):
                phi[k] -= phi[k] // p
    out = [0] * (h + 1)
    for y in range(2, h + 1):
        out[y] = out[y - 1] + phi[y]
    return tuple(out)


def _primitive_count(X: int, mode: str, prefix) -> int:
    """Non-perfect-powers in [2, X] (integers) or primitive p/q > 1 with p <= X (numbers)."""
    total = 0
    j = 1
    while 2 ** j <= X:
        mu = int(sympy.mobius(j))
        if mu:
            Y = iroot(X, j)
            total += mu * ((Y - 1) if mode == "integers" else prefix[Y])
        j += 1
    return total


def _stream_size_q(mode: str, h: int) -> int:
    return count_rational_integers(h) if mode == "integers" else count_rational_numbers(h)


def fast_count_pairs_rationals(mode: str, H) -> CountRecord:
    """L_{2,Q}(H) or L*_{2,Q}(H) through lines of perfect powers, in O~(H)."""
    t0 = time.perf_counter()
    h = math.floor(Fraction(H))
    if h < 1:
        raise InvalidInputError("H must be >= 1")
    N = _stream_size_q(mode, h)
    s0 = N * N - (N - 2) ** 2
    prefix = _totient_prefix(h) if mode == "numbers" else None
    acc = 0
    k = 1
    while 2 ** k <= h:
        acc += (2 * k - 1) * _primitive_count(iroot(h, k), mode, prefix)
        k += 1
    # every line carries its elements with both signs (and inverses for numbers)
    s1 = 4 * acc if mode == "integers" else 16 * acc
    inv = F.invariants_rationals()
    rec = CountRecord(mode, "field", 2, "Q", Fraction(H), s0 + s1, [s0, s1],
                      main_term_field(mode, inv, 2, H), N, 2, method="fast-pairs")
    rec.elapsed = time.perf_counter() - t0
    return rec


# --- rationals: lines and planes ------------------------------------------------------------------


@lru_cache(maxsize=None)
def _exps(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(sorted((int(p), int(e)) for p, e in sympy.factorint(n).items()))


def _vec(q: Fraction) -> dict[int, int]:
    v = dict(_exps(q.numerator))
    for p, e in _exps(q.denominator):
        v[p] = v.get(p, 0) - e
    return v


def rational_lines(mode: str, h: int) -> list[tuple[dict[int, int], int]]:
    """(direction, weight) for every line of positive non-torsion elements."""
    out = []
    if mode == "integers":
        for c in range(2, h + 1):
            if _is_perfect_power(c):
                continue
            out.append((_vec(Fraction(c)), _power_count(c, h)))
    else:
        for p in range(2, h + 1):
            for q in range(1, p):
                if math.gcd(p, q) != 1 or _is_perfect_power_pair(p, q):
                    continue
                # c^k and c^-k for p^k <= h
                out.append((_vec(Fraction(p, q)), 2 * _power_count(p, h)))
    return out


def _power_count(c: int, h: int) -> int:
    k, v = 0, c
    while v <= h:
        k += 1
        v *= c
    return k


def _is_perfect_power(c: int) -> bool:
    return c > 1 and sympy.perfect_power(c) is not False


def _is_perfect_power_pair(p: int, q: int) -> bool:
    g = 0
    for x in (p, q):
        if x == 1:
            continue
        for _, e in _exps(x):
            g = math.gcd(g, e)
    return g > 1


def _plane_key(v1: dict[int, int], v2: dict[int, int]) -> tuple:
    primes = sorted(set(v1) | set(v2))
    rows = [[Fraction(v1.get(p, 0)) for p in primes], [Fraction(v2.get(p, 0)) for p in primes]]
    c0 = next(i for i, x in enumerate(rows[0]) if x) if any(rows[0]) else None
    if c0 is None or (any(rows[1]) and next(i for i, x in enumerate(rows[1]) if x) < c0):
        rows.reverse()
    a = rows[0]
    c0 = next(i for i, x in enumerate(a) if x)
    a = [x / a[c0] for x in a]
    b = [x - rows[1][c0] * y for x, y in zip(rows[1], a)]
    c1 = next(i for i, x in enumerate(b) if x)
    b = [x / b[c1] for x in b]
    a = [x - a[c1] * y for x, y in zip(a, b)]
    return tuple(primes), tuple(a), tuple(b)


def _distinct_triples(weights: list[int]) -> int:
    """Ordered triples drawn from three distinct classes with the given weights."""
    s1 = sum(weights)
    s2 = sum(w * w for w in weights)
    s3 = sum(w ** 3 for w in weights)
    return s1 ** 3 - 3 * s1 * s2 + 2 * s3


def count_triples_rationals(mode: str, H) -> CountRecord:
    """L_{3,Q}(H) or L*_{3,Q}(H) through lines (rank 1) and planes (rank 2)."""
    t0 = time.perf_counter()
    h = math.floor(Fraction(H))
    N = _stream_size_q(mode, h)
    lines = rational_lines(mode, h)
    weights = [w for _, w in lines]
    W = sum(weights)
    s1_pos = W ** 3 - _distinct_triples(weights)
    planes: dict[tuple, set[int]] = defaultdict(set)
    for i, j in itertools.combinations(range(len(lines)), 2):
        key = _plane_key(lines[i][0], lines[j][0])
        planes[key].update((i, j))
    s2_pos = sum(_distinct_triples([weights[i] for i in ls]) for ls in planes.values() if len(ls) >= 3)
    s0 = N ** 3 - (N - 2) ** 3
    inv = F.invariants_rationals()
    strata = [s0, 8 * s1_pos, 8 * s2_pos]
    rec = CountRecord(mode, "field", 3, "Q", Fraction(H), sum(strata), strata,
                      main_term_field(mode, inv, 3, H), N, 2, method="lines-planes",
                      extra={"lines": len(lines), "planes_with_3_lines": sum(1 for v in planes.values() if len(v) >= 3)})
    rec.elapsed = time.perf_counter() - t0
    return rec


# --- line classes for pairs ------------------------------------------------------------------------


def _neg_key(z):
    if isinstance(z, Q.QuadNumber):
        return (z.m, z.x, z.y)
    return (z.minpoly.coeffs, z.root_index)


def _primitive_direction(dv: tuple) -> tuple[tuple, int]:
    g = 0
    for _, v in dv:
        g = math.gcd(g, v)
    c = g if dv[0][1] > 0 else -g
    return tuple((k, v // c) for k, v in dv), c


def line_classes(elems: list[Q.QuadNumber]) -> list[list[int]]:
    """Partition of the non-torsion elements into classes of pairwise dependent ones."""
    groups: dict[tuple, list[tuple[float, int]]] = defaultdict(list)
    for i, z in enumerate(elems):
        if is_torsion(z):
            continue
        dv = discrete_vector(z)
        real = z.m > 1 and not is_torsion(z / z.conj())
        if not dv:
            # units of one real field with nontrivial minus part share a line
            groups[("unit", z.m)].append((0.0, i))
            continue
        u, c = _primitive_direction(dv)
        if real:
            ell = float(z.log_abs(20) - z.conj().log_abs(20))
            groups[(u, z.m)].append((ell / c, i))
        else:
            groups[(u, None)].append((0.0, i))
    classes: list[list[int]] = []
    for key, members in groups.items():
        if key[0] == "unit" or key[1] is None:
            classes.append([i for _, i in members])
            continue
        members.sort()
        open_: list[tuple[float, int, list[int]]] = []
        for val, i in members:
            home = None
            for cval, rep, cls in reversed(open_):
                if val - cval > 1e-9 * (1 + abs(val)):
                    break
                if relation_basis([elems[rep], elems[i]]):
                    home = cls
                    break
            if home is None:
                open_.append((val, i, [i]))
            else:
                home.append(i)
        classes.extend(cls for _, _, cls in open_)
    return classes


def count_pairs_by_lines(elems: list, torsion: int) -> tuple[list[int], dict]:
    N = len(elems)
    classes = line_classes(elems)
    s0 = N * N - (N - torsion) ** 2
    s1 = sum(len(c) ** 2 for c in classes)
    return [s0, s1], {"lines": len(classes)}


# --- multisets ------------------------------------------------------------------------------------


def _multinomial(counts) -> int:
    n = sum(counts)
    out = math.factorial(n)
    for c in counts:
        out //= math.factorial(c)
    return out


def _sign_representatives(elems: list) -> list:
    keys = {_neg_key(z): z for z in elems}
    reps = []
    for z in elems:
        nz = _negate(z)
        if _neg_key(nz) not in keys:
            raise InvalidInputError("stream is not closed under negation")
        if _neg_key(z) < _neg_key(nz):
            reps.append(z)
    return reps


def _negate(z):
    if isinstance(z, Q.QuadNumber):
        return -z
    c = z.minpoly.coeffs
    f = IntPolynomial.normalize([x * (-1) ** i for i, x in enumerate(c)])
    return AlgebraicNumber(f, z.degree - 1 - z.root_index)


def _tuple_rank(tup: tuple, bound: int | None) -> int:
    """Rank of a tuple without torsion coordinates; n means independent."""
    if len(set(map(_neg_key, tup))) < len(tup):
        return 1
    if all(isinstance(z, Q.QuadNumber) for z in tup):
        return rank_from_basis(len(tup), relation_basis(list(tup))).s
    from .multdep import multiplicative_rank

    return multiplicative_rank(list(tup), bound).s


def _multiset_shard(args) -> tuple[list[int], int]:
    reps, n, bound, shard, shards = args
    strata = [0] * (n + 1)
    undecided = 0
    R = len(reps)
    for combo in itertools.combinations_with_replacement(range(R), n):
        if combo[0] % shards != shard:
            continue
        tup = tuple(reps[i] for i in combo)
        try:
            s = _tuple_rank(tup, bound)
        except UndecidedError:
            undecided += 1
            continue
        strata[s] += _multinomial(Counter(combo).values())
    return strata, undecided


def count_multisets(elems: list, n: int, torsion_pred, budget: int = DEFAULT_BUDGET,
                    bound: int | None = None, shards: int = 1) -> tuple[list[int], dict]:
    """Strata over all ordered n-tuples via sign-reduced multisets of non-torsion elements."""
    N = len(elems)
    tors = [z for z in elems if torsion_pred(z)]
    free = [z for z in elems if not torsion_pred(z)]
    reps = _sign_representatives(free)
    R = len(reps)
    estimate = math.comb(R + n - 1, n)
    if estimate > budget:
        raise BudgetExceededError(estimate, budget)
    jobs = [(reps, n, bound, k, shards) for k in range(shards)]
    if shards > 1:
        with ProcessPoolExecutor(max_workers=shards) as ex:
            parts = list(ex.map(_multiset_shard, jobs))
    else:
        parts = [_multiset_shard(jobs[0])]
    strata = [0] * (n + 1)
    undecided = 0
    for st, u in parts:
        strata = [a + b for a, b in zip(strata, st)]
        undecided += u
    scale = 2 ** n
    out = [N ** n - (N - len(tors)) ** n] + [scale * strata[s] for s in range(1, n)]
    return out, {"multisets": estimate, "undecided": undecided, "independent": scale * strata[n]}


def count_bruteforce(elems: list, n: int, budget: int = DEFAULT_BUDGET, bound: int | None = None) -> list[int]:
    """Reference: rank of every ordered tuple (memoized on the sorted tuple)."""
    N = len(elems)
    if N ** n > budget:
        raise BudgetExceededError(N ** n, budget, "tuples")
    memo: dict[tuple, int] = {}
    strata = [0] * (n + 1)
    keys = [_neg_key(z) for z in elems]
    order = sorted(range(N), key=lambda i: keys[i])
    pos = {i: r for r, i in enumerate(order)}
    for tup in itertools.product(range(N), repeat=n):
        key = tuple(sorted(pos[i] for i in tup))
        if key not in memo:
            vals = [elems[order[r]] for r in key]
            if any(_is_torsion_any(z) for z in vals):
                memo[key] = 0
            else:
                memo[key] = _tuple_rank(tuple(vals), bound)
        strata[memo[key]] += 1
    return strata[:n]


def _is_torsion_any(z) -> bool:
    if isinstance(z, Q.QuadNumber):
        return is_torsion(z)
    return torsion_order(z) is not None


# --- public counting operations --------------------------------------------------------------------


def _check_budget_tuples(N: int, n: int, budget: int):
    if n < 2:
        raise InvalidInputError("n must be >= 2")
    if budget <= 0:
        raise InvalidInputError("budget must be positive")


def count_field(mode: str, field: int, n: int, H, budget: int = DEFAULT_BUDGET, shards: int = 1,
                method: str = "auto") -> CountRecord:
    """L_{n,K}(H) (mode 'integers') or L*_{n,K}(H) ('numbers') for K = Q or Q(sqrt(m))."""
    if mode not in ("integers", "numbers"):
        raise InvalidInputError("mode must be 'integers' or 'numbers'")
    _check_budget_tuples(0, n, budget)
    t0 = time.perf_counter()
    H = Fraction(H)
    if field == 1 and method == "auto":
        if n == 2:
            return fast_count_pairs_rationals(mode, H)
        if n == 3:
            h = math.floor(H)
            nlines = h if mode == "integers" else h * h
            if nlines * nlines // 2 <= budget:
                return count_triples_rationals(mode, H)
    inv = F.field_invariants(field)
    elems = field_elements(mode, field, H)
    w = inv.w
    extra: dict = {}
    if method == "bruteforce":
        strata = count_bruteforce(elems, n, budget)
        used = "bruteforce"
    elif n == 2 and method in ("auto", "lines"):
        strata, extra = count_pairs_by_lines(elems, w)
        used = "lines"
    else:
        strata, extra = count_multisets(elems, n, is_torsion, budget, shards=shards)
        used = "multisets"
    extra.pop("undecided", None)
    rec = CountRecord(mode, "field", n, Q.field_name(field), H, sum(strata), strata,
                      main_term_field(mode, inv, n, H), len(elems), w, method=used, extra=extra)
    rec.elapsed = time.perf_counter() - t0
    return rec


def count_degree(mode: str, d: int, n: int, H, budget: int = DEFAULT_BUDGET, shards: int = 1,
                 method: str = "auto", bound: int | None = None) -> CountRecord:
    """M_{n,d}(H) ('integers') or M*_{n,d}(H) ('numbers')."""
    if mode not in ("integers", "numbers"):
        raise InvalidInputError("mode must be 'integers' or 'numbers'")
    _check_budget_tuples(0, n, budget)
    t0 = time.perf_counter()
    H = Fraction(H)
    if d == 1:
        rec = count_field(mode, 1, n, H, budget, shards, method)
        rec.kind = "degree"
        rec.field_or_degree = "1"
        rec.main_term = main_term_degree(mode, 1, n, H)
        rec.torsion = F.w0(1)
        return rec
    w0 = F.w0(d)
    bound = bound or default_bound(H)
    elems = degree_elements(mode, d, H)
    extra: dict = {}
    undecided = 0
    if d > 2 and method not in ("auto", "multisets", "bruteforce"):
        raise UnsupportedError("degree >= 3 supports only multiset or brute-force counting")
    if method == "bruteforce":
        strata = count_bruteforce(elems, n, budget, bound)
        used = "bruteforce"
    elif d == 2 and n == 2 and method in ("auto", "lines"):
        strata, extra = count_pairs_by_lines(elems, w0)
        used = "lines"
    else:
        strata, extra = count_multisets(elems, n, _is_torsion_any, budget, bound, shards)
        undecided = extra.pop("undecided", 0)
        used = "multisets"
    if d > 2:
        extra["bound"] = bound
    rec = CountRecord(mode, "degree", n, str(d), H, sum(strata), strata,
                      main_term_degree(mode, d, n, H), len(elems), w0, method=used,
                      undecided=undecided, extra=extra)
    rec.elapsed = time.perf_counter() - t0
    if undecided:
        raise UndecidedError(f"{undecided} tuples undecided; the run is invalid")
    return rec


# --- reports --------------------------------------------------------------------------------------


def proposition_exponent(rec: CountRecord, s: int) -> float:
    d = int(rec.field_or_degree) if rec.kind == "degree" else (1 if rec.field_or_degree == "Q" else 2)
    n = rec.n
    if rec.kind == "field":
        base = d * (n - 1) if rec.mode == "integers" else 2 * d * (n - 1)
    else:
        base = d * d * (n - 1) if rec.mode == "integers" else d * (d + 1) * (n - 1)
    return base - d * (math.ceil((s + 1) / 2) - 1)


def stratum_bound_check(rec: CountRecord, s: int | None = None, slack: float = 0.3) -> list[dict]:
    """Empirical exponent log(stratum)/log H against the proposition's exponent."""
    rows = []
    ss = [s] if s is not None else list(range(2, rec.n))
    for t in ss:
        val = rec.strata[t]
        prop = proposition_exponent(rec, t)
        emp = math.log(val) / math.log(float(rec.H)) if val > 0 else float("-inf")
        rows.append({"s": t, "count": val, "empirical_exponent": emp, "proposition_exponent": prop,
                     "slack": slack, "ok": emp <= prop + slack})
    return rows


def compare_main_term(rec: CountRecord) -> dict:
    if rec.kind == "field":
        m = Q.parse_field(rec.field_or_degree)
        inv = F.field_invariants(m)
        d, r = inv.d, inv.r
        err = error_term("field", rec.mode, rec.n, d, r, m == 1 or m < 0)
    else:
        d = int(rec.field_or_degree)
        err = error_term("degree", rec.mode, rec.n, d)
    return {"params": [rec.mode, rec.n, rec.field_or_degree, str(rec.H)], "total": rec.total,
            "main_term": rec.main_term.to_json(), "ratio": rec.ratio.to_json(), "error_term": err}


# --- fixed coefficients and special sets ----------------------------------------------------------


def count_fixed_coeffs(field: int, u: int, v: int, H, include_lower_degree: bool = False) -> dict:
    """Elements of K of height <= H whose minimal polynomial has leading u and constant v.

    For quadratic K only elements of degree 2 are counted unless include_lower_degree.
    """
    if u <= 0 or v == 0:
        raise InvalidInputError("u must be positive and v nonzero")
    H = Fraction(H)
    count = 0
    if field == 1 or include_lower_degree:
        if math.gcd(u, v) == 1 and max(u, abs(v)) <= H:
            count += 1
    if field != 1:
        m = Q.check_field(field)
        M = H * H
        if u <= M and abs(v) <= M:
            from .algnum import quadratic_mahler_le

            bmax = math.floor(2 * M)
            for b in range(-bmax, bmax + 1):
                disc = b * b - 4 * u * v
                if disc == 0 or disc % m or content((u, b, v)) != 1:
                    continue
                t2 = disc // m
                if t2 <= 0 or math.isqrt(t2) ** 2 != t2:
                    continue
                if quadratic_mahler_le(u, b, v, M):
                    count += 2
    exp = math.log(count) / math.log(float(H)) if count and H > 1 else None
    return {"field": Q.field_name(field), "u": u, "v": v, "H": str(H), "count": count,
            "empirical_exponent": exp}


def _box_all(d: int, H: int, monic: bool):
    lead = [1] if monic else [a for a in range(-H, H + 1) if a]
    for a in lead:
        for rest in itertools.product(range(-H, H + 1), repeat=d):
            yield tuple(rest) + (a,)


def _near_integer_factor(f: IntPolynomial, k: int) -> bool:
    """Numeric prefilter: some d of the values alpha_i * eta (eta of order k) form a monic integer factor."""
    import numpy as np

    d = f.degree
    roots = np.roots(list(reversed(f.coeffs)))
    etas = [np.exp(2j * np.pi * j / k) for j in range(1, k + 1) if math.gcd(j, k) == 1]
    vals = [r * e for r in roots for e in etas]
    for S in itertools.combinations(range(len(vals)), d):
        c = np.poly([vals[i] for i in S])
        if np.all(np.abs(c - np.round(c.real)) < 1e-6 * (1 + np.abs(c))):
            return True
    return False


def _in_c_set(f: IntPolynomial) -> bool:
    """alpha * eta has degree d for some root of unity eta != +-1 (alpha a root of f)."""
    d = f.degree
    monic = f.coeffs[-1] == 1
    x = sympy.Symbol("x")
    for k in orders_with_totient_at_most(d * d):
        if k <= 2:
            continue
        if monic and not _near_integer_factor(f, k):
            continue
        g = times_root_of_unity_poly(f.coeffs, k)
        poly = sympy.Poly(list(reversed([sympy.Rational(c) for c in g])), x)
        if any(fac.degree() == d for fac, _ in poly.factor_list()[1]):
            return True
    return False


def count_special_sets(d: int, H: int, include_star: bool = False, c_height: int | None = None) -> dict:
    """Exhaustive counts of F_d, E_d (and starred versions) and C_d, C*_d."""
    if d < 2:
        raise InvalidInputError("special sets need d >= 2")
    if d > 4:
        raise UnsupportedError("Galois test implemented for d <= 4 only")
    H = int(H)
    out: dict = {"d": d, "H": H}

    def sweep(monic: bool):
        deg_count = e_all = e_irr = total = 0
        for c in _box_all(d, H, monic):
            total += 1
            sq = c[0] != 0 or any(c[1:-1])
            if is_degenerate(c):
                deg_count += 1
            if c[0] == 0 or not is_irreducible(c):
                e_all += 1
                continue
            if not galois_is_full(c):
                e_all += 1
                e_irr += 1
        return deg_count, e_all, e_irr, total

    f, e_all, e_irr, tot = sweep(True)
    out.update({"F": f, "E": e_all, "E_irreducible": e_irr, "monic_polynomials": tot})
    if include_star:
        fs, es, es_irr, tots = sweep(False)
        out.update({"F*": fs, "E*": es, "E*_irreducible": es_irr, "polynomials": tots})
    if d <= 3:
        ch = c_height if c_height is not None else H
        polys = degree_polynomials("integers", d, ch)
        out["C"] = d * sum(1 for f_ in polys if _in_c_set(f_))
        out["C_height"] = ch
        if include_star:
            polys = degree_polynomials("numbers", d, ch)
            out["C*"] = d * sum(1 for f_ in polys if _in_c_set(f_))
    lh = math.log(H) if H > 1 else None
    out["exponents"] = {k: (math.log(out[k]) / lh if lh and out.get(k) else None)
                        for k in ("F", "E_irreducible", "E")}
    out["lemma_exponents"] = {"F": d - 1, "E": d - 0.5, "C": d * (d - 0.5), "F*": d, "E*": d + 0.5,
                              "C*": d * (d + 0.5)}
    return out
