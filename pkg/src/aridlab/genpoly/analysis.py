"""Sequences built from generalised polynomials, sparse threshold sets, discrepancy."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..seqkit import Sequence
from .evaluate import DEFAULT_P0, DEFAULT_PMAX, Compiled
from .expr import Expr, Func, Mul, Num, parse
from .interval import Unresolved, to_interval


@dataclass(frozen=True)
class SparseGenPolySpec:
    """Membership ``dist(inner(n)) < eps(n)``.

    ``eps`` is ``n^(-c)`` with ``c = Fraction`` > 0, or an expression.
    ``n = 0`` belongs to the set when eps is a power of n (eps(0) is
    infinite); with an expression eps the comparison is made literally.
    """

    inner: Expr
    c: Fraction | None = Fraction(1)
    eps: Expr | None = None

    def __post_init__(self):
        if self.eps is None and (self.c is None or self.c <= 0):
            raise ValueError("threshold exponent c must be positive")


class GenPolySequence(Sequence):
    """``floor(e(n)) mod m``, a value-set indicator, or a sparse threshold set."""

    def __init__(self, e: Expr | str | None = None, mod: int | None = None,
                 value_set=None, spec: SparseGenPolySpec | None = None,
                 p0: int = DEFAULT_P0, p_max: int = DEFAULT_PMAX,
                 horizon: int | None = None, name: str | None = None):
        super().__init__()
        if isinstance(e, str):
            e = parse(e)
        modes = sum(x is not None for x in (mod, value_set, spec))
        if modes != 1:
            raise ValueError("choose exactly one of mod, value_set, spec")
        if mod is not None and mod < 1:
            raise ValueError("modulus must be positive")
        self.expr = e if spec is None else spec.inner
        self.mod = mod
        self.value_set = None if value_set is None else sorted(Fraction(v) for v in value_set)
        self.spec = spec
        self.horizon = horizon
        self.name = name or str(self.expr)
        if mod is not None:
            self._c = Compiled(Func("floor", e), p0, p_max)
            self._test = None
        elif value_set is not None:
            self._c = Compiled(e, p0, p_max)
            self._test = self._in_set
        else:
            self._c = Compiled(Func("dist", spec.inner), p0, p_max)
            self._eps = None if spec.eps is None else Compiled(spec.eps, p0, p_max)
            self._test = None

    @property
    def max_precision(self) -> int:
        return self._c.max_precision

    def _in_set(self, v, p):
        if not isinstance(v, tuple):
            return int(Fraction(v) in self.value_set)
        lo, hi = Fraction(v[0], 1 << p), Fraction(v[1], 1 << p)
        for x in self.value_set:
            if lo <= x <= hi:
                raise Unresolved("value-set membership")
        return 0

    def _threshold(self, n: int) -> int:
        spec = self.spec
        if spec.eps is None:
            if n == 0:
                return 1
            a, b = spec.c.numerator, spec.c.denominator
            na = abs(n) ** a

            def test(v, p):
                # dist^b * n^a < 1, decided on the enclosure
                if not isinstance(v, tuple):
                    return int(Fraction(v) ** b * na < 1)
                lo, hi = v
                if hi ** b * na < 1 << (p * b):
                    return 1
                if lo ** b * na >= 1 << (p * b):
                    return 0
                raise Unresolved("threshold")

            return self._c.decide(n, test)
        eps = self._eps

        def test2(v, p):
            w = eps.fn(n, p) if not eps.rational else eps.fn(n, 0)
            if not isinstance(v, tuple) and not isinstance(w, tuple):
                return int(v < w)
            a, b = to_interval(v, p), to_interval(w, p)
            if a[1] < b[0]:
                return 1
            if a[0] >= b[1]:
                return 0
            raise Unresolved("threshold")

        return self._c.decide(n, test2)

    def term(self, n: int) -> int:
        if self.mod is not None:
            v, _ = self._c.raw(n)
            return v % self.mod
        if self.value_set is not None:
            return self._c.decide(n, self._test)
        return self._threshold(n)

    def _compute(self, start, stop):
        return [self.term(n) for n in range(start, stop)]


def threshold_set(inner: Expr | str, c=Fraction(1), eps: Expr | str | None = None,
                  **kw) -> GenPolySequence:
    if isinstance(inner, str):
        inner = parse(inner)
    if isinstance(eps, str):
        eps = parse(eps)
    return GenPolySequence(spec=SparseGenPolySpec(inner, None if eps is not None else Fraction(c), eps), **kw)


HEISENBERG = "sqrt(2)*n*floor(sqrt(3)*n)"


def heisenberg_set(c=Fraction(1), **kw) -> GenPolySequence:
    """``{n : dist(sqrt(2) n floor(sqrt(3) n)) < n^-c}``."""
    return threshold_set(HEISENBERG, c, **kw)


# --------------------------------------------------------------------------
# discrepancy


def star_discrepancy(points) -> Fraction:
    """Exact star discrepancy of points in [0, 1) given as rationals."""
    xs = sorted(points)
    N = len(xs)
    if N == 0:
        raise ValueError("no points")
    best = Fraction(0)
    for i, x in enumerate(xs, 1):
        best = max(best, Fraction(i, N) - x, x - Fraction(i - 1, N))
    return best


@dataclass(frozen=True)
class DiscrepancyReport:
    N: int
    value: Fraction  # D*_N of the point midpoints (exact for rational inputs)
    error_bound: Fraction  # |value - true D*_N| <= error_bound
    max_precision: int
    exact: bool

    def __float__(self):
        return float(self.value)


def discrepancy(e: Expr | str, N: int, lam=Fraction(1), a: int = 1,
                p0: int = DEFAULT_P0, p_max: int = DEFAULT_PMAX) -> DiscrepancyReport:
    """Star discrepancy of ``{lam * e(a n) mod 1 : 0 <= n < N}``."""
    if N < 1:
        raise ValueError("N must be positive")
    if isinstance(e, str):
        e = parse(e)
    c = Compiled(Func("frac", Mul(Num(Fraction(lam)), e)), p0, p_max)
    pts = []
    err = Fraction(0)
    exact = True
    for n in range(N):
        v, p = c.raw(a * n)
        if isinstance(v, tuple):
            lo, hi = v
            pts.append(Fraction(lo + hi, 1 << (p + 1)))
            err = max(err, Fraction(hi - lo, 1 << (p + 1)))
            exact = False
        else:
            pts.append(Fraction(v))
    return DiscrepancyReport(N, star_discrepancy(pts), err, c.max_precision, exact)
