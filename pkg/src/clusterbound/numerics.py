"""Exact rationals and outward-rounded enclosures of real numbers.

Every transcendental quantity (pi, square roots, exp, sinh) is produced as an
:class:`Enclosure` whose endpoints are exact rationals, so that order relations
derived from them are proofs rather than floating-point guesses.

Precision is always given in significant decimal digits.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

Number = Union[int, Fraction]

DEFAULT_PRECISION = 64
_ENV_PRECISION_CAP = "CLUSTERBOUND_MAX_PRECISION"
_GUARD_BITS = 16


def _read_precision_cap() -> int:
    raw = os.environ.get(_ENV_PRECISION_CAP)
    if raw is None:
        return 4096
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"{_ENV_PRECISION_CAP} must be an integer, got {raw!r}") from None
    if cap < DEFAULT_PRECISION:
        raise ValueError(f"{_ENV_PRECISION_CAP} must be at least {DEFAULT_PRECISION}")
    return cap


MAX_PRECISION = _read_precision_cap()


class Verdict(enum.Enum):
    """Outcome of comparing a left-hand quantity against a right-hand one."""

    LESS = "Proven-Less"
    GREATER = "Proven-Greater"
    EQUAL = "Equal"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self) -> str:
        return self.value

    def flip(self) -> "Verdict":
        if self is Verdict.LESS:
            return Verdict.GREATER
        if self is Verdict.GREATER:
            return Verdict.LESS
        return self


def to_fraction(x: Number) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


def compare(a: Number, b: Number) -> Verdict:
    """Exact three-way comparison of rationals."""
    a, b = to_fraction(a), to_fraction(b)
    if a < b:
        return Verdict.LESS
    if a > b:
        return Verdict.GREATER
    return Verdict.EQUAL


def fraction_str(x: Number) -> str:
    """``numerator/denominator`` in lowest terms (``n/1`` for integers)."""
    x = to_fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(text: str) -> Fraction:
    num, sep, den = text.partition("/")
    if not sep:
        return Fraction(int(num))
    return Fraction(int(num), int(den))


def _bits(digits: int) -> int:
    if digits < 1:
        raise ValueError(f"precision must be a positive number of digits, got {digits}")
    return math.ceil(digits * math.log2(10)) + _GUARD_BITS


def _floor_log2(x: Fraction) -> int:
    """floor(log2(|x|)) for nonzero x."""
    n, d = abs(x.numerator), x.denominator
    e = n.bit_length() - d.bit_length()
    # 2**e <= n/d < 2**(e+1) after at most one correction
    if e >= 0:
        if n < d << e:
            e -= 1
    elif n << -e < d:
        e -= 1
    return e


def round_down(x: Fraction, bits: int) -> Fraction:
    """Largest dyadic with ``bits`` significant bits that is <= x."""
    if x == 0:
        return x
    shift = bits - _floor_log2(x)
    if shift >= 0:
        return Fraction((x.numerator << shift) // x.denominator, 1 << shift)
    return Fraction((x.numerator // (x.denominator << -shift)) << -shift)


def round_up(x: Fraction, bits: int) -> Fraction:
    return -round_down(-x, bits)


def decimal_str(x: Number, digits: int = 6, rounding: str = "nearest") -> str:
    """Render a rational with exactly ``digits`` significant decimal digits.

    ``rounding`` is ``"nearest"`` (ties away from zero), ``"down"`` (towards
    -inf) or ``"up"`` (towards +inf); the directed modes print enclosure
    endpoints without losing containment.
    """
    x = to_fraction(x)
    if x == 0:
        return "0"
    a = abs(x)
    e = _floor_log10(a) + 1  # 10**(e-1) <= a < 10**e
    scaled = a * Fraction(10) ** (digits - e)
    if rounding == "nearest":
        q = math.floor(scaled + Fraction(1, 2))
    elif rounding in ("down", "up"):
        q = math.floor(scaled) if (rounding == "down") == (x > 0) else math.ceil(scaled)
    else:
        raise ValueError(f"unknown rounding mode {rounding!r}")
    if q == 10**digits:
        q //= 10
        e += 1
    s = str(q)
    if e <= 0:
        body = "0." + "0" * (-e) + s
    elif e >= digits:
        body = s + "0" * (e - digits)
    else:
        body = s[:e] + "." + s[e:]
    return ("-" if x < 0 else "") + body


def _floor_log10(a: Fraction) -> int:
    e = len(str(a.numerator)) - len(str(a.denominator))
    while Fraction(10) ** e > a:
        e -= 1
    while Fraction(10) ** (e + 1) <= a:
        e += 1
    return e


@dataclass(frozen=True)
class Enclosure:
    """Closed interval ``[lower, upper]`` with exact rational endpoints."""

    lower: Fraction
    upper: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "lower", to_fraction(self.lower))
        object.__setattr__(self, "upper", to_fraction(self.upper))
        if self.lower > self.upper:
            raise ValueError(f"empty enclosure [{self.lower}, {self.upper}]")

    @classmethod
    def point(cls, x: Number) -> "Enclosure":
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2

    def contains(self, x: Union[Number, "Enclosure"]) -> bool:
        if isinstance(x, Enclosure):
            return self.lower <= x.lower and x.upper <= self.upper
        x = to_fraction(x)
        return self.lower <= x <= self.upper

    __contains__ = contains

    def rounded(self, digits: int) -> "Enclosure":
        """Outward rounding to about ``digits`` significant digits."""
        bits = _bits(digits)
        return Enclosure(round_down(self.lower, bits), round_up(self.upper, bits))

    def __str__(self) -> str:
        return f"[{decimal_str(self.lower, 10, 'down')}, {decimal_str(self.upper, 10, 'up')}]"

    # arithmetic ------------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "Enclosure":
        if isinstance(other, Enclosure):
            return other
        return Enclosure.point(to_fraction(other))

    def __neg__(self) -> "Enclosure":
        return Enclosure(-self.upper, -self.lower)

    def __add__(self, other) -> "Enclosure":
        o = self._coerce(other)
        return Enclosure(self.lower + o.lower, self.upper + o.upper)

    __radd__ = __add__

    def __sub__(self, other) -> "Enclosure":
        o = self._coerce(other)
        return Enclosure(self.lower - o.upper, self.upper - o.lower)

    def __rsub__(self, other) -> "Enclosure":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Enclosure":
        o = self._coerce(other)
        products = (
            self.lower * o.lower,
            self.lower * o.upper,
            self.upper * o.lower,
            self.upper * o.upper,
        )
        return Enclosure(min(products), max(products))

    __rmul__ = __mul__

    def reciprocal(self) -> "Enclosure":
        if self.lower <= 0 <= self.upper:
            raise ZeroDivisionError(f"enclosure {self} contains zero")
        return Enclosure(1 / self.upper, 1 / self.lower)

    def __truediv__(self, other) -> "Enclosure":
        return self * self._coerce(other).reciprocal()

    def __rtruediv__(self, other) -> "Enclosure":
        return self._coerce(other) * self.reciprocal()

    def __pow__(self, k: int) -> "Enclosure":
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        if k == 0:
            return Enclosure.point(1)
        lo, hi = self.lower**k, self.upper**k
        if k % 2 == 0:
            if self.lower >= 0:
                return Enclosure(lo, hi)
            if self.upper <= 0:
                return Enclosure(hi, lo)
            return Enclosure(Fraction(0), max(lo, hi))
        return Enclosure(lo, hi)


def as_enclosure(x: Union[Number, Enclosure]) -> Enclosure:
    return x if isinstance(x, Enclosure) else Enclosure.point(to_fraction(x))


def separate(a: Union[Number, Enclosure], b: Union[Number, Enclosure]) -> Verdict:
    """Order of ``a`` relative to ``b`` if the enclosures prove one.

    Two exact points that coincide give ``EQUAL``; overlapping intervals give
    ``INCONCLUSIVE``.
    """
    a, b = as_enclosure(a), as_enclosure(b)
    if a.upper < b.lower:
        return Verdict.LESS
    if a.lower > b.upper:
        return Verdict.GREATER
    if a.width == 0 and b.width == 0:
        return Verdict.EQUAL
    return Verdict.INCONCLUSIVE


# kernels -----------------------------------------------------------------


def _arctan_inv(x: int, w: int) -> tuple[int, int]:
    """Bounds ``(lo, hi)`` on ``arctan(1/x) * 2**w`` for an integer x >= 2."""
    one = 1 << w
    total = 0
    k = 0
    power = x
    x2 = x * x
    while True:
        term = one // ((2 * k + 1) * power)
        if term == 0:
            break
        total += -term if k % 2 else term
        k += 1
        power *= x2
    # each floor loses < 1 unit; the first omitted term is < 1 unit
    slack = k + 1
    return total - slack, total + slack


@lru_cache(maxsize=32)
def _pi_bits(bits: int) -> Enclosure:
    w = bits + 8
    a_lo, a_hi = _arctan_inv(5, w)
    b_lo, b_hi = _arctan_inv(239, w)
    scale = 1 << w
    return Enclosure(Fraction(16 * a_lo - 4 * b_hi, scale), Fraction(16 * a_hi - 4 * b_lo, scale))


def enclose_pi(digits: int = DEFAULT_PRECISION) -> Enclosure:
    """pi via Machin's formula 16 atan(1/5) - 4 atan(1/239)."""
    return _pi_bits(_bits(digits)).rounded(digits)


def enclose_pi_euler(digits: int = DEFAULT_PRECISION) -> Enclosure:
    """pi via Euler's 4 atan(1/2) + 4 atan(1/3); kept as an independent cross-check."""
    w = _bits(digits) + 8
    a_lo, a_hi = _arctan_inv(2, w)
    b_lo, b_hi = _arctan_inv(3, w)
    scale = 1 << w
    return Enclosure(Fraction(4 * (a_lo + b_lo), scale), Fraction(4 * (a_hi + b_hi), scale)).rounded(digits)


def _sqrt_fraction(x: Fraction, digits: int) -> Enclosure:
    if x < 0:
        raise ValueError(f"square root of negative number {x}")
    p, q = x.numerator, x.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Enclosure.point(Fraction(rp, rq))
    w = _bits(digits) + max(0, (q.bit_length() - p.bit_length()) // 2)
    s = math.isqrt((p * q) << (2 * w))
    den = q << w
    return Enclosure(Fraction(s, den), Fraction(s + 1, den)).rounded(digits)


def _exp_nonneg(a: Fraction, digits: int) -> Enclosure:
    """exp(a) for a >= 0 by halving, Taylor series and repeated squaring."""
    if a == 0:
        return Enclosure.point(1)
    k = 0
    while a > Fraction(1, 2) * (1 << k):
        k += 1
    # squaring k times multiplies relative error by about 2**k
    w = _bits(digits) + k + 8 + max(0, _floor_log2(a)).bit_length()
    one = 1 << w
    y = a / (1 << k)
    y_lo = (y.numerator << w) // y.denominator
    y_hi = -((-y.numerator << w) // y.denominator)

    lo_sum = term = one
    j = 1
    while term:
        term = term * y_lo // (j * one)
        lo_sum += term
        j += 1

    hi_sum = term = one
    j = 1
    while term > 1:
        term = -(-term * y_hi // (j * one))
        hi_sum += term
        j += 1
    # y <= 1/2 so the omitted tail is at most the last term; + 1 for rounding
    hi_sum += term + 1

    lo, hi = lo_sum, hi_sum
    for _ in range(k):
        lo = lo * lo // one
        hi = -(-hi * hi // one)
    return Enclosure(Fraction(lo, one), Fraction(hi, one))


def _exp_fraction(x: Fraction, digits: int) -> Enclosure:
    if x >= 0:
        return _exp_nonneg(x, digits).rounded(digits)
    return _exp_nonneg(-x, digits + 2).reciprocal().rounded(digits)


def _sinh_fraction(x: Fraction, digits: int) -> Enclosure:
    if x == 0:
        return Enclosure.point(0)
    d = digits + 2
    if x < 0:
        return -_sinh_fraction(-x, digits)
    e = _exp_nonneg(x, d)
    # sinh is positive for x > 0; cancellation near 0 only widens the result
    return ((e - e.reciprocal()) / 2).rounded(digits)


_KERNELS = {
    "sqrt": _sqrt_fraction,
    "exp": _exp_fraction,
    "sinh": _sinh_fraction,
}


def enclose(f: str, x: Union[Number, Enclosure, None] = None, digits: int = DEFAULT_PRECISION) -> Enclosure:
    """Enclosure of ``f(x)`` for ``f`` in ``pi``, ``sqrt``, ``exp``, ``sinh``.

    All three functions of ``x`` are monotone increasing, so an enclosure
    argument is handled by evaluating at its endpoints.
    """
    if f == "pi":
        if x is not None:
            raise TypeError("pi takes no argument")
        return enclose_pi(digits)
    try:
        kernel = _KERNELS[f]
    except KeyError:
        raise ValueError(f"unknown function {f!r}; expected one of pi, sqrt, exp, sinh") from None
    if x is None:
        raise TypeError(f"{f} requires an argument")
    if isinstance(x, Enclosure):
        if x.width == 0:
            return kernel(x.lower, digits)
        return Enclosure(kernel(x.lower, digits).lower, kernel(x.upper, digits).upper)
    return kernel(to_fraction(x), digits)


def sqrt(x, digits: int = DEFAULT_PRECISION) -> Enclosure:
    return enclose("sqrt", x, digits)


def exp(x, digits: int = DEFAULT_PRECISION) -> Enclosure:
    return enclose("exp", x, digits)


def sinh(x, digits: int = DEFAULT_PRECISION) -> Enclosure:
    return enclose("sinh", x, digits)


def pi(digits: int = DEFAULT_PRECISION) -> Enclosure:
    return enclose_pi(digits)


def precision_schedule(start: int = DEFAULT_PRECISION, cap: int | None = None):
    """Yield ``start, 2*start, ...`` up to and including ``cap``."""
    cap = MAX_PRECISION if cap is None else cap
    p = start
    while p < cap:
        yield p
        p *= 2
    yield cap


def refine(build, start: int = DEFAULT_PRECISION, cap: int | None = None) -> tuple[Verdict, int]:
    """Escalate precision until ``build(digits)`` returns a decided verdict.

    ``build`` maps a precision to a :class:`Verdict`. Returns the first
    non-inconclusive verdict with the precision that produced it, or
    ``(INCONCLUSIVE, cap)``.
    """
    digits = start
    for digits in precision_schedule(start, cap):
        verdict = build(digits)
        if verdict is not Verdict.INCONCLUSIVE:
            return verdict, digits
    return Verdict.INCONCLUSIVE, digits
