"""Number-field invariants, the counting constants C1..C8 and root-of-unity counts."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import mpmath
from mpmath import iv, mp

from . import quadratic as Q
from .certified import CertifiedValue, hi, ivprec, ivq, lo
from .errors import InvalidInputError
from .polynomial import orders_with_totient_at_most, totient

PREC = 80


@dataclass(frozen=True)
class FieldInvariants:
    d: int
    r1: int
    r2: int
    disc: int
    h: int
    reg: CertifiedValue
    w: int
    zeta2: CertifiedValue
    m: int | None = None  # Q(sqrt(m)) when known, 1 for Q

    def __post_init__(self):
        if self.d != self.r1 + 2 * self.r2:
            raise InvalidInputError("d must equal r1 + 2 r2")
        if self.r < 0:
            raise InvalidInputError("unit rank must be >= 0")
        if self.w < 2 or self.w % 2:
            raise InvalidInputError("w must be even and >= 2")

    @property
    def r(self) -> int:
        return self.r1 + self.r2 - 1

    @property
    def name(self) -> str:
        if self.m is not None:
            return Q.field_name(self.m)
        return f"K(d={self.d},D={self.disc})"

    def to_json(self) -> dict:
        return {"d": self.d, "r1": self.r1, "r2": self.r2, "disc": self.disc, "h": self.h,
                "reg": self.reg.to_json(), "w": self.w, "zeta2": self.zeta2.to_json(),
                "r": self.r, "name": self.name}

    @classmethod
    def from_json(cls, obj: dict) -> "FieldInvariants":
        """Accepts the flat invariants-file format {d, r1, r2, disc, h, reg, w, zeta2}."""
        try:
            reg = _certified_from(obj["reg"])
            zeta2 = _certified_from(obj["zeta2"])
            return cls(int(obj["d"]), int(obj["r1"]), int(obj["r2"]), int(obj["disc"]),
                       int(obj["h"]), reg, int(obj["w"]), zeta2, obj.get("m"))
        except KeyError as exc:
            raise InvalidInputError(f"invariants file misses {exc}") from None


def _certified_from(v) -> CertifiedValue:
    if isinstance(v, dict):
        if "exact" in v:
            return CertifiedValue.from_exact(Fraction(v["exact"]), PREC)
        with mp.workprec(PREC + 20):
            if "lower" in v:
                return CertifiedValue(mp.mpf(v["lower"]), mp.mpf(v["upper"]), PREC)
            mid, rad = mp.mpf(v["mid"]), mp.mpf(v.get("radius", 0))
            return CertifiedValue(mid - rad, mid + rad, PREC)
    if isinstance(v, int):
        return CertifiedValue.from_exact(v, PREC)
    # a bare decimal is trusted to its printed digits
    with mp.workprec(PREC + 20):
        x = mp.mpf(str(v))
        digits = len(str(v).split(".")[-1]) if "." in str(v) else 0
        rad = mp.mpf(10) ** (-digits) / 2
        return CertifiedValue(x - rad, x + rad, PREC)


def load_field_file(path) -> FieldInvariants:
    return FieldInvariants.from_json(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class ErrorExponents:
    sigma: int
    rho: int
    vartheta: int


def error_exponents(d: int) -> ErrorExponents:
    return ErrorExponents(int(d == 1), int(d == 2), int(d in (1, 2)))


# --- invariants --------------------------------------------------------------------------


@lru_cache(maxsize=None)
def invariants_rationals() -> FieldInvariants:
    with ivprec(PREC + 40):
        z2 = CertifiedValue.from_iv(iv.pi ** 2 / 6, PREC)
    return FieldInvariants(1, 1, 0, 1, 1, CertifiedValue.from_exact(1, PREC), 2, z2, 1)


@lru_cache(maxsize=None)
def invariants_quadratic(m: int) -> FieldInvariants:
    m = Q.check_field(m)
    D = Q.field_discriminant(m)
    w = Q.torsion_count(m)
    if m < 0:
        r1, r2 = 0, 1
        h = Q.class_number_forms(D)
        reg = CertifiedValue.from_exact(1, PREC)
    else:
        r1, r2 = 2, 0
        h = Q.class_number_analytic(m)
        reg = Q.regulator(m, PREC)
    with ivprec(PREC + 40):
        z = iv.pi ** 2 / 6 * Q.l_two(D, PREC)
        zeta2 = CertifiedValue.from_iv(z, PREC)
    return FieldInvariants(2, r1, r2, D, h, reg, w, zeta2, m)


def field_invariants(m: int) -> FieldInvariants:
    return invariants_rationals() if m == 1 else invariants_quadratic(m)


# --- constants ----------------------------------------------------------------------------


def _cv(x) -> CertifiedValue:
    return CertifiedValue.from_iv(x, PREC)


def _c1_iv(inv: FieldInvariants):
    r = inv.r
    return (iv.mpf(2) ** inv.r1 * (2 * iv.pi) ** inv.r2 * iv.mpf(inv.d) ** r
            / (iv.sqrt(abs(inv.disc)) * math.factorial(r)))


def _c2_iv(inv: FieldInvariants):
    return (iv.mpf(2) ** (2 * inv.r1) * (2 * iv.pi) ** (2 * inv.r2) * iv.mpf(2) ** inv.r
            * inv.h * inv.reg.iv / (abs(inv.disc) * inv.w * inv.zeta2.iv))


def C1(inv: FieldInvariants) -> CertifiedValue:
    with ivprec(PREC + 40):
        return _cv(_c1_iv(inv))


def C2(inv: FieldInvariants) -> CertifiedValue:
    with ivprec(PREC + 40):
        return _cv(_c2_iv(inv))


def C3(n: int, inv: FieldInvariants) -> CertifiedValue:
    _check_n(n)
    with ivprec(PREC + 40):
        v = iv.mpf(n * (n + 1)) / 2 * inv.w * _c1_iv(inv) ** (n - 1)
        out = _cv(v)
    if inv.d == 1:
        return CertifiedValue.from_exact(Fraction(n * (n + 1), 2) * inv.w * 2 ** (n - 1), PREC)
    return out


def C4(n: int, inv: FieldInvariants) -> CertifiedValue:
    _check_n(n)
    with ivprec(PREC + 40):
        return _cv(iv.mpf(n * n) * inv.w * _c2_iv(inv) ** (n - 1))


def _check_n(n: int):
    if n < 2:
        raise InvalidInputError("n must be >= 2")


def C5(d: int) -> Fraction:
    if d < 1:
        raise InvalidInputError("d must be >= 1")
    out = Fraction(d * 2 ** d)
    for j in range(1, (d - 1) // 2 + 1):
        out *= Fraction(d * (2 * j) ** (d - 2 * j - 1), (2 * j + 1) ** (d - 2 * j))
    return out


def _c6_iv(d: int):
    prod = Fraction(d * 2 ** d)
    for j in range(1, (d - 1) // 2 + 1):
        prod *= Fraction((d + 1) * (2 * j) ** (d - 2 * j), (2 * j + 1) ** (d - 2 * j + 1))
    return ivq(prod) / Q.zeta_iv(d + 1, PREC)


def C6(d: int) -> CertifiedValue:
    if d < 1:
        raise InvalidInputError("d must be >= 1")
    with ivprec(PREC + 40):
        return _cv(_c6_iv(d))


def C7(n: int, d: int) -> Fraction:
    _check_n(n)
    return (n * w0(d) + n * (n - 1)) * C5(d) ** (n - 1)


def C8(n: int, d: int) -> CertifiedValue:
    _check_n(n)
    with ivprec(PREC + 40):
        return _cv((n * w0(d) + 2 * n * (n - 1)) * _c6_iv(d) ** (n - 1))


@lru_cache(maxsize=None)
def w0(d: int) -> int:
    """Number of roots of unity of exact degree d."""
    if d < 1:
        raise InvalidInputError("d must be >= 1")
    if d == 1:
        return 2
    return d * sum(1 for k in orders_with_totient_at_most(d) if totient(k) == d)


def constants_report(inv: FieldInvariants, n_values=(2, 3, 4)) -> dict:
    out = {"field": inv.to_json(), "C1": C1(inv).to_json(), "C2": C2(inv).to_json()}
    for n in n_values:
        out[f"C3(n={n})"] = C3(n, inv).to_json()
        out[f"C4(n={n})"] = C4(n, inv).to_json()
    return out


def degree_constants_report(d: int, n_values=(2, 3, 4)) -> dict:
    out = {"d": d, "w0": w0(d), "C5": str(C5(d)), "C6": C6(d).to_json()}
    for n in n_values:
        out[f"C7(n={n})"] = str(C7(n, d))
        out[f"C8(n={n})"] = C8(n, d).to_json()
    return out


# --- units ------------------------------------------------------------------------------------


def unit_count_quadratic(m: int, H) -> int:
    """Number of units of Q(sqrt(m)) with Weil height <= H (exact)."""
    m = Q.check_field(m)
    H = Fraction(H)
    if H < 1:
        return 0
    w = Q.torsion_count(m)
    if m < 0:
        return w
    eps = Q.fundamental_unit(m)
    # H(eps^k) = eps^(k/2), so eps^k must satisfy eps^k <= H^2
    bound = H * H
    k = 0
    e = Q.QuadNumber.rational(1)
    while True:
        e = e * eps
        if not _quad_le(e, bound):
            break
        k += 1
    return w * (1 + 2 * k)


def _quad_le(z: "Q.QuadNumber", bound: Fraction) -> bool:
    """x + y sqrt(m) <= bound for real m and y > 0, exactly."""
    t = bound - z.x
    if t < 0:
        return False
    return z.y * z.y * z.m <= t * t
