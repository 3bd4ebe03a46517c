"""Fixed-point dyadic intervals used to evaluate generalised polynomials.

An interval at precision p is a pair of integers ``(lo, hi)`` standing for
``[lo / 2^p, hi / 2^p]``.  Exact values (``int`` or ``Fraction``) travel
alongside and are only converted when they meet an interval.  Every
operation rounds outward, so the result always encloses the true value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath


class Unresolved(ArithmeticError):
    """A floor-type operation could not be decided at the current precision."""


@dataclass(frozen=True)
class IntervalValue:
    """An enclosure ``[lo, hi] / 2^p``, or an exact rational when ``lo`` is ``None``."""

    lo: int | None
    hi: int | None
    p: int
    exact: Fraction | None = None

    @classmethod
    def of_exact(cls, x) -> "IntervalValue":
        return cls(None, None, 0, Fraction(x))

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    @property
    def lower(self) -> Fraction:
        return self.exact if self.is_exact else Fraction(self.lo, 1 << self.p)

    @property
    def upper(self) -> Fraction:
        return self.exact if self.is_exact else Fraction(self.hi, 1 << self.p)

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2

    def contains(self, x) -> bool:
        return self.lower <= x <= self.upper

    def __float__(self):
        return float(self.midpoint)

    def __repr__(self):
        if self.is_exact:
            return f"IntervalValue(exact={self.exact})"
        return f"IntervalValue([{float(self.lower)!r}, {float(self.upper)!r}], p={self.p})"


def is_exact(x) -> bool:
    return not isinstance(x, tuple)


def to_interval(x, p: int) -> tuple[int, int]:
    if isinstance(x, tuple):
        return x
    if isinstance(x, int):
        return (x << p, x << p)
    num, den = x.numerator << p, x.denominator
    return (num // den, -((-num) // den))


def _ceil_shift(v: int, p: int) -> int:
    return -((-v) >> p)


# --------------------------------------------------------------------------
# constants


@lru_cache(maxsize=256)
def sqrt_interval(m: int, p: int) -> tuple[int, int]:
    s = math.isqrt(m << (2 * p))
    if s * s == m << (2 * p):
        return (s, s)
    return (s, s + 1)


@lru_cache(maxsize=64)
def phi_interval(p: int) -> tuple[int, int]:
    lo, hi = sqrt_interval(5, p)
    one = 1 << p
    return ((one + lo) >> 1, _ceil_shift(one + hi, 1))


@lru_cache(maxsize=64)
def pi_interval(p: int) -> tuple[int, int]:
    # mpmath supplies pi to p + 32 bits; the margin of two units covers rounding
    with mpmath.workprec(p + 32):
        v = int(mpmath.floor(mpmath.ldexp(mpmath.pi, p)))
    return (v - 1, v + 2)


def constant(name: str, arg, p: int) -> tuple[int, int]:
    if name == "sqrt":
        return sqrt_interval(arg, p)
    if name == "phi":
        return phi_interval(p)
    if name == "pi":
        return pi_interval(p)
    raise ValueError(f"unknown constant {name!r}")


# --------------------------------------------------------------------------
# arithmetic; every function takes exact values or (lo, hi) pairs


def add(x, y, p):
    if not isinstance(x, tuple) and not isinstance(y, tuple):
        return x + y
    a, b = to_interval(x, p), to_interval(y, p)
    return (a[0] + b[0], a[1] + b[1])


def sub(x, y, p):
    if not isinstance(x, tuple) and not isinstance(y, tuple):
        return x - y
    a, b = to_interval(x, p), to_interval(y, p)
    return (a[0] - b[1], a[1] - b[0])


def neg(x, p):
    if not isinstance(x, tuple):
        return -x
    return (-x[1], -x[0])


def _scale(c, iv):
    # exact rational c times interval iv, rounded outward
    if isinstance(c, int):
        u, v = c * iv[0], c * iv[1]
        return (u, v) if u <= v else (v, u)
    num, den = c.numerator, c.denominator
    u, v = num * iv[0], num * iv[1]
    if u > v:
        u, v = v, u
    return (u // den, -((-v) // den))


def mul(x, y, p):
    xt, yt = isinstance(x, tuple), isinstance(y, tuple)
    if not xt and not yt:
        return x * y
    if not xt:
        return _scale(x, y)
    if not yt:
        return _scale(y, x)
    a, b = x
    c, d = y
    ps = (a * c, a * d, b * c, b * d)
    return (min(ps) >> p, _ceil_shift(max(ps), p))


def power(x, e: int, p: int):
    if not isinstance(x, tuple):
        return x ** e
    if e == 0:
        return 1
    if e == 1:
        return x
    lo, hi = x
    shift = p * (e - 1)
    if lo >= 0:
        return (lo ** e >> shift, _ceil_shift(hi ** e, shift))
    if hi <= 0:
        a, b = -hi, -lo
        if e % 2 == 0:
            return (a ** e >> shift, _ceil_shift(b ** e, shift))
        return (-_ceil_shift(b ** e, shift), -(a ** e >> shift))
    if e % 2 == 0:
        m = max(-lo, hi)
        return (0, _ceil_shift(m ** e, shift))
    return (-_ceil_shift((-lo) ** e, shift), _ceil_shift(hi ** e, shift))


def floor_(x, p):
    if not isinstance(x, tuple):
        return x if isinstance(x, int) else x.numerator // x.denominator
    a = x[0] >> p
    if x[1] >> p != a:
        raise Unresolved("floor")
    return a


def nint(x, p):
    if not isinstance(x, tuple):
        return floor_(x + Fraction(1, 2), p)
    half = 1 << (p - 1)
    return floor_((x[0] + half, x[1] + half), p)


def frac(x, p):
    a = floor_(x, p)
    if not isinstance(x, tuple):
        return x - a
    s = a << p
    return (x[0] - s, x[1] - s)


def dist(x, p):
    a = nint(x, p)
    if not isinstance(x, tuple):
        return abs(x - a)
    s = a << p
    lo, hi = x[0] - s, x[1] - s
    if lo >= 0:
        return (lo, hi)
    if hi <= 0:
        return (-hi, -lo)
    return (0, max(-lo, hi))


def as_value(x, p) -> IntervalValue:
    if isinstance(x, tuple):
        return IntervalValue(x[0], x[1], p)
    return IntervalValue.of_exact(x)
