"""Certified real values and certified complex root isolation.

All enclosures are produced with ``mpmath.iv`` (outward-rounded interval
arithmetic).  Root isolation refines floating approximations from
``mpmath.polyroots`` into discs that provably contain exactly one root each,
using the inclusion discs

    |z - z_i| <= d * |f(z_i)| / |a_d * prod_{j != i} (z_i - z_j)|

whose connected components contain as many roots as discs.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key, lru_cache

import mpmath
import numpy as np
from mpmath import iv, mp

from .errors import UndecidedError

MAX_PRECISION = 4096


@contextmanager
def ivprec(bits: int):
    old_iv, old_mp = iv.prec, mp.prec
    iv.prec = max(bits, 53)
    mp.prec = max(bits, 53)
    try:
        yield
    finally:
        iv.prec, mp.prec = old_iv, old_mp


def lo(x) -> mpmath.mpf:
    return mp.make_mpf(x._mpi_[0])


def hi(x) -> mpmath.mpf:
    return mp.make_mpf(x._mpi_[1])


def ivq(q) -> "iv.mpf":
    """Tight interval around a rational."""
    q = Fraction(q)
    return iv.mpf(q.numerator) / q.denominator


@dataclass(frozen=True)
class CertifiedValue:
    """Closed interval [lower, upper] known to contain a real quantity."""

    lower: mpmath.mpf
    upper: mpmath.mpf
    precision: int
    exact: Fraction | None = None

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("empty certified interval")

    @classmethod
    def from_iv(cls, x, precision: int) -> "CertifiedValue":
        return cls(lo(x), hi(x), precision)

    @classmethod
    def from_exact(cls, q, precision: int = 64) -> "CertifiedValue":
        q = Fraction(q)
        with ivprec(max(precision, 64) + 10):
            x = ivq(q)
        if q.denominator == 1 or lo(x) == hi(x):
            v = mp.mpf(q.numerator) if q.denominator == 1 else lo(x)
            return cls(v, v, precision, q)
        return cls(lo(x), hi(x), precision, q)

    @property
    def iv(self):
        return iv.mpf([self.lower, self.upper])

    @property
    def mid(self) -> mpmath.mpf:
        with ivprec(self.precision + 20):
            return (self.lower + self.upper) / 2

    @property
    def radius(self) -> mpmath.mpf:
        with ivprec(self.precision + 20):
            return mpmath.mpf(self.upper - self.lower) / 2

    @property
    def width(self) -> mpmath.mpf:
        return self.upper - self.lower

    def __float__(self) -> float:
        return float(self.mid)

    def contains(self, x) -> bool:
        if isinstance(x, Fraction):
            with ivprec(self.precision + 64):
                q = ivq(x)
            return lo(q) <= self.upper and hi(q) >= self.lower
        return self.lower <= x <= self.upper

    def intersects(self, other: "CertifiedValue") -> bool:
        return self.lower <= other.upper and other.lower <= self.upper

    def certainly_le(self, x) -> bool:
        return self.upper <= x

    def certainly_gt(self, x) -> bool:
        return self.lower > x

    def to_json(self) -> dict:
        out = {"mid": mpmath.nstr(self.mid, 30), "radius": mpmath.nstr(self.radius, 5),
               "lower": mpmath.nstr(self.lower, 30), "upper": mpmath.nstr(self.upper, 30)}
        if self.exact is not None:
            out["exact"] = str(self.exact)
        return out

    def __repr__(self) -> str:
        if self.exact is not None:
            return f"CertifiedValue(exact={self.exact})"
        return f"CertifiedValue({mpmath.nstr(self.mid, 20)} ± {mpmath.nstr(self.radius, 3)})"


# --- root isolation ---------------------------------------------------------


@dataclass(frozen=True)
class RootDisc:
    """Disc of given radius around (re, im) containing exactly one root."""

    re: mpmath.mpf
    im: mpmath.mpf
    rad: mpmath.mpf
    is_real: bool
    partner: int  # index of the conjugate root (itself when real)

    def _ball(self):
        return iv.mpf([-self.rad, self.rad])

    def re_iv(self):
        return iv.mpf(self.re) + self._ball()

    def im_iv(self):
        if self.is_real:
            return iv.mpf(0)
        return iv.mpf(self.im) + self._ball()

    def value_iv(self):
        return iv.mpc(self.re_iv(), self.im_iv())

    def modulus_iv(self):
        c = abs(iv.mpc(iv.mpf(self.re), iv.mpf(self.im)))
        m = c + self._ball()
        return iv.mpf([max(mp.zero, lo(m)), hi(m)])


def _smith_discs(coeffs: tuple[int, ...], approx: list) -> list | None:
    d = len(coeffs) - 1
    a = iv.mpf(coeffs[-1])
    zs = [iv.mpc(iv.mpf(z.real), iv.mpf(z.imag)) for z in approx]
    rads = []
    for i, z in enumerate(zs):
        val = iv.mpc(0, 0)
        for c in reversed(coeffs):
            val = val * z + c
        den = a
        for j, w in enumerate(zs):
            if j != i:
                den = den * (z - w)
        dabs = abs(den)
        if lo(dabs) <= 0:
            return None
        rads.append(hi(d * abs(val) / dabs))
    return rads


@lru_cache(maxsize=200_000)
def isolate_roots(coeffs: tuple[int, ...], prec: int = 64) -> tuple[RootDisc, ...]:
    """Certified isolating discs for the roots of a squarefree integer polynomial.

    Discs are sorted by (real part, imaginary part); radii shrink roughly like
    2^-prec.  Raises UndecidedError past MAX_PRECISION.
    """
    d = len(coeffs) - 1
    if d < 1:
        return ()
    work = max(prec, 53)
    while work <= MAX_PRECISION:
        discs = _try_isolate(coeffs, work)
        if discs is not None:
            return discs
        work *= 2
    raise UndecidedError(f"root isolation failed for {coeffs}")


def _tie_bits(coeffs: tuple[int, ...]) -> int:
    """Precision past which overlapping real parts of two roots must be equal.

    A nonzero difference of real parts is an algebraic number of degree <= d^4
    and height <= 4 H^4 with H <= ||f||_2, so Liouville bounds it below by
    (4 H^4)^(-d^4).
    """
    d = len(coeffs) - 1
    if d <= 2:
        return 0
    norm2 = math.sqrt(sum(c * c for c in coeffs))
    return int(d ** 4 * (2 + 4 * math.log2(norm2))) + 16


def _newton_roots(coeffs: tuple[int, ...], work: int) -> list | None:
    """Double-precision roots polished by Newton steps; None when the seed looks unreliable."""
    if max(abs(c) for c in coeffs) > 2 ** 900:
        return None
    seeds = np.roots([float(c) for c in reversed(coeffs)])
    if len(seeds) != len(coeffs) - 1 or not np.all(np.isfinite(seeds)):
        return None
    deriv = [i * c for i, c in enumerate(coeffs)][1:]
    eps = mp.mpf(2) ** (-(work + 8))
    out = []
    for s in seeds:
        z = mp.mpc(float(s.real), float(s.imag))
        for _ in range(8 + 2 * max(1, work // 50).bit_length()):
            f = df = mp.mpc(0)
            for c in reversed(coeffs):
                f = f * z + c
            for c in reversed(deriv):
                df = df * z + c
            if df == 0:
                return None
            step = f / df
            z -= step
            if abs(step) <= eps * (1 + abs(z)):
                break
        else:
            return None
        out.append(z)
    return out


def _try_isolate(coeffs: tuple[int, ...], work: int):
    d = len(coeffs) - 1
    with ivprec(work + 20):
        if d == 1:
            r = Fraction(-coeffs[0], coeffs[1])
            x = ivq(r)
            c = mp.mpf(r.numerator) / r.denominator
            rad = max(abs(hi(x) - c), abs(c - lo(x)))
            return (RootDisc(c, mp.zero, rad, True, 0),)
        approx = _newton_roots(coeffs, work)
        rads = _smith_discs(coeffs, approx) if approx is not None else None
        if rads is None:
            try:
                approx = mpmath.polyroots(list(reversed(coeffs)), maxsteps=200 + 20 * d,
                                          extraprec=work)
            except mpmath.libmp.NoConvergence:
                return None
            rads = _smith_discs(coeffs, approx)
            if rads is None:
                return None
        cs = [(mp.mpf(z.real), mp.mpf(z.imag)) for z in approx]

        def close(p, q, r):
            dist = abs(iv.mpc(iv.mpf(p[0]) - q[0], iv.mpf(p[1]) - q[1]))
            return lo(dist) <= r  # not certainly separated

        for i in range(d):
            for j in range(i + 1, d):
                if close(cs[i], cs[j], rads[i] + rads[j]):
                    return None
        real, partner = [], []
        for i in range(d):
            conj = (cs[i][0], -cs[i][1])
            hits = [j for j in range(d) if close(conj, cs[j], rads[i] + rads[j])]
            if len(hits) != 1:
                return None
            real.append(hits[0] == i)
            partner.append(hits[0])
        discs = []
        slack = mp.mpf(2) ** (-(work + 10))
        for i in range(d):
            if real[i]:
                discs.append(RootDisc(cs[i][0], mp.zero, rads[i], True, i))
                continue
            j = partner[i]
            # symmetrize conjugate pairs so that they share their real part exactly
            re = (cs[i][0] + cs[j][0]) / 2
            im = (cs[i][1] - cs[j][1]) / 2
            rad = max(rads[i], rads[j]) + slack * (1 + abs(re) + abs(im))
            discs.append(RootDisc(re, im, rad, False, j))
        tie_bits = _tie_bits(coeffs)
        failed = []

        def cmp(i, j):
            da, db = discs[i], discs[j]
            ra, rb = da.re_iv(), db.re_iv()
            if hi(ra) < lo(rb):
                return -1
            if hi(rb) < lo(ra):
                return 1
            if not (da.partner == j and not da.is_real) and work < tie_bits:
                failed.append((i, j))
                return 0
            # equal real parts: conjugates, or a tie certified by the separation bound
            ia, ib = da.im_iv(), db.im_iv()
            if hi(ia) < lo(ib):
                return -1
            if hi(ib) < lo(ia):
                return 1
            failed.append((i, j))
            return 0

        order = sorted(range(d), key=cmp_to_key(cmp))
        if failed:
            return None
        remap = {old: new for new, old in enumerate(order)}
        return tuple(
            RootDisc(discs[i].re, discs[i].im, discs[i].rad, discs[i].is_real, remap[discs[i].partner])
            for i in order
        )
