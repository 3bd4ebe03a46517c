"""Sound evaluation of generalised polynomials.

Trees are compiled once into closures ``f(n, p)``.  Subtrees without
irrational constants return exact ``int``/``Fraction`` values; the rest
return intervals at precision p.  A floor that cannot be decided raises
:class:`Unresolved`, and :func:`evaluate` retries with doubled precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import interval as iv
from .expr import (Add, Const, Expr, Func, Mul, Neg, Num, Pow, Sub, Var,
                   is_rational, parse)
from .interval import IntervalValue, Unresolved

DEFAULT_P0 = 64
DEFAULT_PMAX = 4096


class UnresolvedFloorError(ArithmeticError):
    """Raised when a floor stays undecided at the maximum precision."""

    def __init__(self, expr, n, p_max):
        super().__init__(f"floor unresolved for n={n} at {p_max} bits in {expr}")
        self.n = n
        self.p_max = p_max


@dataclass(frozen=True)
class EvalResult:
    value: object  # int, Fraction, or IntervalValue
    precision: int  # 0 when no interval arithmetic was needed
    exact: bool

    @property
    def resolved(self) -> bool:
        return True


def _compile(e: Expr):
    if isinstance(e, Num):
        v = e.value
        v = v.numerator if v.denominator == 1 else v
        return lambda n, p: v
    if isinstance(e, Var):
        return lambda n, p: n
    if isinstance(e, Const):
        name, arg = e.name, e.arg
        return lambda n, p: iv.constant(name, arg, p)
    if isinstance(e, (Add, Sub, Mul)):
        f, g = _compile(e.left), _compile(e.right)
        op = {Add: iv.add, Sub: iv.sub, Mul: iv.mul}[type(e)]
        return lambda n, p: op(f(n, p), g(n, p), p)
    if isinstance(e, Neg):
        f = _compile(e.arg)
        return lambda n, p: iv.neg(f(n, p), p)
    if isinstance(e, Pow):
        f, k = _compile(e.base), e.exp
        return lambda n, p: iv.power(f(n, p), k, p)
    if isinstance(e, Func):
        f = _compile(e.arg)
        op = {"floor": iv.floor_, "frac": iv.frac, "nint": iv.nint, "dist": iv.dist}[e.name]
        return lambda n, p: op(f(n, p), p)
    raise TypeError(e)


def _normalise(v):
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    return v


class Compiled:
    """A compiled expression with precision management."""

    def __init__(self, e: Expr | str, p0: int = DEFAULT_P0, p_max: int = DEFAULT_PMAX):
        if isinstance(e, str):
            e = parse(e)
        self.expr = e
        self.rational = is_rational(e)
        self.p0 = p0
        self.p_max = p_max
        self.fn = _compile(e)
        self.max_precision = 0

    def raw(self, n: int):
        """Exact value or ``(lo, hi, p)``; raises UnresolvedFloorError."""
        if self.rational:
            return _normalise(self.fn(n, 0)), 0
        p = self.p0
        while True:
            try:
                v = self.fn(n, p)
            except Unresolved:
                if p >= self.p_max:
                    raise UnresolvedFloorError(self.expr, n, self.p_max) from None
                p = min(2 * p, self.p_max)
                continue
            if p > self.max_precision:
                self.max_precision = p
            return v, p

    def __call__(self, n: int) -> EvalResult:
        v, p = self.raw(n)
        if isinstance(v, tuple):
            return EvalResult(iv.as_value(v, p), p, False)
        return EvalResult(_normalise(v), p, self.rational)

    def decide(self, n: int, test):
        """Evaluate then apply ``test(value, p)`` which may raise Unresolved.

        Used for comparisons that need their own precision escalation.
        """
        if self.rational:
            return test(_normalise(self.fn(n, 0)), 0)
        p = self.p0
        while True:
            try:
                out = test(self.fn(n, p), p)
            except Unresolved:
                if p >= self.p_max:
                    raise UnresolvedFloorError(self.expr, n, self.p_max) from None
                p = min(2 * p, self.p_max)
                continue
            if p > self.max_precision:
                self.max_precision = p
            return out


def evaluate(e: Expr | str, n: int, p0: int = DEFAULT_P0,
             p_max: int = DEFAULT_PMAX) -> EvalResult:
    """Evaluate ``e`` at ``n``.

    Rational trees are evaluated exactly.  Otherwise floors are resolved by
    precision doubling from ``p0``; if the result is itself irrational an
    :class:`IntervalValue` enclosure is returned.
    """
    return Compiled(e, p0, p_max)(n)


def floor_value(e: Expr | str, n: int, p0: int = DEFAULT_P0,
                p_max: int = DEFAULT_PMAX) -> int:
    """``floor(e(n))`` decided soundly."""
    if isinstance(e, str):
        e = parse(e)
    return Compiled(Func("floor", e), p0, p_max)(n).value


__all__ = ["Compiled", "EvalResult", "IntervalValue", "UnresolvedFloorError",
           "evaluate", "floor_value", "DEFAULT_P0", "DEFAULT_PMAX"]
