"""Exact arithmetic over Q(sqrt2, sqrt3, sqrt7) plus the rational epsilon ladder.

Every geometric predicate in this package bottoms out in :func:`fe_sign`,
which decides signs exactly: a zero test on coordinates first, then dyadic
interval evaluation at doubling precision (terminates for nonzero elements
because the basis is linearly independent over Q).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from gmpy2 import isqrt, mpq, mpz

__all__ = [
    "BigRational",
    "DivisionByZero",
    "EpsScale",
    "FieldElem",
    "FE_ZERO",
    "FE_ONE",
    "FE_TWO",
    "FE_HALF",
    "SQRT2",
    "SQRT3",
    "SQRT6",
    "SQRT7",
    "SQRT14",
    "SQRT21",
    "SQRT42",
    "fe",
    "fe_inv",
    "fe_mul",
    "fe_sign",
    "rational_from_str",
    "rational_to_str",
    "sign_call_count",
]

# Arbitrary-precision rational; gmpy2 keeps gcd-reduced form with positive
# denominator, which is exactly the BigRational invariant.
BigRational = mpq

RationalLike = Union[int, mpz, mpq]


class DivisionByZero(ZeroDivisionError):
    """Inversion of the zero field element."""


# Basis order {1, sqrt2, sqrt3, sqrt6, sqrt7, sqrt14, sqrt21, sqrt42};
# slot index encodes the squarefree exponent vector as e2 + 2*e3 + 4*e7.
SQUAREFREE_PARTS = (1, 2, 3, 6, 7, 14, 21, 42)

_PRIME_BITS = ((2, 1), (3, 2), (7, 4))


def _build_mul_table():
    table = []
    for i in range(8):
        row = []
        for j in range(8):
            factor = 1
            for prime, bit in _PRIME_BITS:
                if i & bit and j & bit:
                    factor *= prime
            row.append((i ^ j, factor))
        table.append(tuple(row))
    return tuple(table)


_MUL_TABLE = _build_mul_table()

_Q0 = mpq(0)
_Q1 = mpq(1)

# Counts every exact sign decision; the acceptance suite audits that all
# geometric verdict paths pass through here.
_SIGN_CALLS = 0


def sign_call_count() -> int:
    return _SIGN_CALLS


# floor(sqrt(d) * 2^p) cache, keyed by (d, p)
_SQRT_FLOOR_CACHE: dict = {}


def _sqrt_floor(d: int, p: int) -> mpz:
    key = (d, p)
    val = _SQRT_FLOOR_CACHE.get(key)
    if val is None:
        val = isqrt(mpz(d) << (2 * p))
        _SQRT_FLOOR_CACHE[key] = val
    return val


class FieldElem:
    """Element of Q(sqrt2, sqrt3, sqrt7) as 8 rational coordinates."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable[RationalLike]):
        cs = tuple(mpq(x) for x in coeffs)
        if len(cs) != 8:
            raise ValueError("FieldElem needs exactly 8 coefficients")
        self.c = cs

    @staticmethod
    def _raw(cs: tuple) -> "FieldElem":
        """Trusted constructor: cs must be a tuple of 8 mpq values."""
        obj = FieldElem.__new__(FieldElem)
        obj.c = cs
        return obj

    # -- constructors ------------------------------------------------

    @staticmethod
    def from_rational(x: RationalLike) -> "FieldElem":
        return FieldElem((mpq(x), _Q0, _Q0, _Q0, _Q0, _Q0, _Q0, _Q0))

    @staticmethod
    def basis(slot: int, coeff: RationalLike = 1) -> "FieldElem":
        cs = [_Q0] * 8
        cs[slot] = mpq(coeff)
        return FieldElem(cs)

    # -- plumbing ----------------------------------------------------

    def __repr__(self) -> str:
        terms = []
        for coeff, part in zip(self.c, SQUAREFREE_PARTS):
            if coeff == 0:
                continue
            if part == 1:
                terms.append(f"{coeff}")
            else:
                terms.append(f"{coeff}*sqrt{part}")
        return "FieldElem(" + (" + ".join(terms) if terms else "0") + ")"

    def __hash__(self) -> int:
        return hash(self.c)

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.c == other.c

    # -- ring operations ----------------------------------------------

    def __add__(self, other) -> "FieldElem":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElem._raw(tuple(a + b for a, b in zip(self.c, other.c)))

    __radd__ = __add__

    def __sub__(self, other) -> "FieldElem":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElem._raw(tuple(a - b for a, b in zip(self.c, other.c)))

    def __rsub__(self, other) -> "FieldElem":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __neg__(self) -> "FieldElem":
        return FieldElem._raw(tuple(-a for a in self.c))

    def __mul__(self, other) -> "FieldElem":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return fe_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "FieldElem":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return fe_mul(self, fe_inv(other))

    def __rtruediv__(self, other) -> "FieldElem":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return fe_mul(other, fe_inv(self))

    def __pow__(self, k: int) -> "FieldElem":
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = FE_ONE
        base = self
        while k:
            if k & 1:
                out = fe_mul(out, base)
            base = fe_mul(base, base)
            k >>= 1
        return out

    # -- order (exact, via fe_sign) ------------------------------------

    def __lt__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return fe_sign(self - other) < 0

    def __le__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return fe_sign(self - other) <= 0

    def __gt__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return fe_sign(self - other) > 0

    def __ge__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return fe_sign(self - other) >= 0

    # -- queries -------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return all(a == 0 for a in self.c)

    @property
    def is_rational(self) -> bool:
        return all(a == 0 for a in self.c[1:])

    def as_rational(self) -> mpq:
        if not self.is_rational:
            raise ValueError("element is irrational")
        return self.c[0]

    def sign(self) -> int:
        return fe_sign(self)

    def approx(self) -> float:
        """Float estimate for presentation layers only, never for verdicts."""
        total = 0.0
        for coeff, part in zip(self.c, SQUAREFREE_PARTS):
            if coeff != 0:
                total += float(coeff) * (part ** 0.5)
        return total

    def conjugate(self, flip_mask: int) -> "FieldElem":
        """Galois conjugate negating sqrt(p) for primes selected by flip_mask."""
        out = []
        for slot, coeff in enumerate(self.c):
            if (slot & flip_mask).bit_count() & 1:
                out.append(-coeff)
            else:
                out.append(coeff)
        return FieldElem(out)

    def serialize(self) -> str:
        return ",".join(rational_to_str(a) for a in self.c)

    @staticmethod
    def deserialize(text: str) -> "FieldElem":
        parts = text.split(",")
        if len(parts) != 8:
            raise ValueError(f"expected 8 rational fields, got {len(parts)}")
        return FieldElem(tuple(rational_from_str(p) for p in parts))


def _coerce(value) -> "FieldElem":
    if isinstance(value, FieldElem):
        return value
    if isinstance(value, (int, type(mpz(0)), type(_Q0))):
        return FieldElem.from_rational(value)
    return NotImplemented


def fe(value: RationalLike) -> FieldElem:
    """Shorthand rational embedding."""
    return FieldElem.from_rational(value)


def fe_mul(a: FieldElem, b: FieldElem) -> FieldElem:
    """Exact field product; the basis is closed under products."""
    ac, bc = a.c, b.c
    anz = [(i, v) for i, v in enumerate(ac) if v]
    if not anz:
        return FE_ZERO
    bnz = [(j, v) for j, v in enumerate(bc) if v]
    if not bnz:
        return FE_ZERO
    if len(anz) == 1 and anz[0][0] == 0:
        x = anz[0][1]
        return FieldElem._raw(tuple(x * v for v in bc))
    if len(bnz) == 1 and bnz[0][0] == 0:
        x = bnz[0][1]
        return FieldElem._raw(tuple(x * v for v in ac))
    out = [_Q0] * 8
    for i, ai in anz:
        row = _MUL_TABLE[i]
        for j, bj in bnz:
            slot, factor = row[j]
            if factor == 1:
                out[slot] += ai * bj
            else:
                out[slot] += ai * bj * factor
    return FieldElem._raw(tuple(out))


def fe_inv(a: FieldElem) -> FieldElem:
    """Exact inverse via the product of the 7 nontrivial Galois conjugates."""
    if a.is_zero:
        raise DivisionByZero("inverse of zero field element")
    if a.is_rational:
        return FieldElem.from_rational(1 / a.c[0])
    active = [i for i, coeff in enumerate(a.c) if coeff != 0]
    if len(active) == 1:
        slot = active[0]
        coeff = a.c[slot]
        # (c sqrt(d))^-1 = sqrt(d) / (c d)
        return FieldElem.basis(slot, 1 / (coeff * SQUAREFREE_PARTS[slot]))
    if len(active) == 2 and active[0] == 0:
        slot = active[1]
        rat, irr = a.c[0], a.c[slot]
        denom = rat * rat - SQUAREFREE_PARTS[slot] * irr * irr
        cs = [_Q0] * 8
        cs[0] = rat / denom
        cs[slot] = -irr / denom
        return FieldElem(cs)
    cofactor = FE_ONE
    for mask in range(1, 8):
        cofactor = fe_mul(cofactor, a.conjugate(mask))
    norm = fe_mul(a, cofactor)
    if not norm.is_rational:
        raise AssertionError("field norm must be rational")
    return fe_mul(cofactor, FieldElem.from_rational(1 / norm.c[0]))


def fe_sign(a: FieldElem) -> int:
    """Exact sign in {-1, 0, +1}.

    Zero is the all-coefficients-zero test; otherwise dyadic interval
    bounds at doubling precision separate the value from zero.
    """
    global _SIGN_CALLS
    _SIGN_CALLS += 1
    cs = a.c
    nonzero = [(coeff, part) for coeff, part in zip(cs, SQUAREFREE_PARTS) if coeff != 0]
    if not nonzero:
        return 0
    if len(nonzero) == 1:
        coeff = nonzero[0][0]
        return 1 if coeff > 0 else -1
    p = 64
    while True:
        scale = mpz(1) << p
        lo = _Q0
        hi = _Q0
        for coeff, part in nonzero:
            if part == 1:
                lo += coeff
                hi += coeff
                continue
            low_root = _sqrt_floor(part, p)
            if coeff > 0:
                lo += coeff * low_root / scale
                hi += coeff * (low_root + 1) / scale
            else:
                lo += coeff * (low_root + 1) / scale
                hi += coeff * low_root / scale
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        p *= 2


FE_ZERO = FieldElem.from_rational(0)
FE_ONE = FieldElem.from_rational(1)
FE_TWO = FieldElem.from_rational(2)
FE_HALF = FieldElem.from_rational(mpq(1, 2))
SQRT2 = FieldElem.basis(1)
SQRT3 = FieldElem.basis(2)
SQRT6 = FieldElem.basis(3)
SQRT7 = FieldElem.basis(4)
SQRT14 = FieldElem.basis(5)
SQRT21 = FieldElem.basis(6)
SQRT42 = FieldElem.basis(7)


def rational_sqrt_upper(x: mpq) -> mpq:
    """A rational q with q*q >= x, close to sqrt(x); x must be nonnegative."""
    x = mpq(x)
    if x < 0:
        raise ValueError("negative radicand")
    num, den = x.numerator, x.denominator
    return mpq(isqrt(num * den) + 1, den)


def rational_to_str(x: mpq) -> str:
    x = mpq(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def rational_from_str(text: str) -> mpq:
    return mpq(text.strip())


@dataclass(frozen=True)
class EpsScale:
    """The rational epsilon ladder eps = delta**10.

    All fractional powers of eps used by the constructions are integer
    powers of delta (tenths), so every coordinate stays rational.
    In full-fidelity mode delta = (10n)**-10, hence eps = (10n)**-100.
    """

    delta: mpq
    n: int

    def __post_init__(self):
        d = mpq(self.delta)
        if not (0 < d < 1):
            raise ValueError("delta must lie strictly between 0 and 1")
        object.__setattr__(self, "delta", d)
        if self.n < 0:
            raise ValueError("array half-length must be nonnegative")

    @staticmethod
    def full_fidelity(n: int) -> "EpsScale":
        if n < 1:
            raise ValueError("full-fidelity scale needs n >= 1")
        return EpsScale(delta=mpq(1, (10 * n) ** 10), n=n)

    @staticmethod
    def relaxed(n: int, delta: RationalLike) -> "EpsScale":
        return EpsScale(delta=mpq(delta), n=n)

    def eps_power(self, tenths: int) -> mpq:
        if tenths < 0:
            raise ValueError("tenths must be nonnegative")
        return self.delta ** tenths

    @property
    def eps(self) -> mpq:
        return self.eps_power(10)

    @property
    def sqrt_eps(self) -> mpq:
        return self.eps_power(5)

    @property
    def eps15(self) -> mpq:
        return self.eps_power(15)

    @property
    def eps17(self) -> mpq:
        return self.eps_power(17)

    @property
    def eps_sq(self) -> mpq:
        return self.eps_power(20)
