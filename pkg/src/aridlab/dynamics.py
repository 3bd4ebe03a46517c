"""Skew-product maps on the torus representing polynomial sequences.

For p(x)/m = sum_i a_i C(x, i) the map

    T(x_1, ..., x_d) = (x_1 + a_d, x_2 + x_1 + a_{d-1}, ..., x_d + x_{d-1} + a_1)

started at z = (0, ..., 0, a_0) has last coordinate p(n)/m mod 1 after n
steps.  Rational coefficients are handled exactly as integers modulo the
common denominator D; quadratic-surd coefficients use interval arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .genpoly import interval as iv
from .genpoly.expr import Add, Expr, Mul, Num, Pow, Var, lift
from .genpoly.evaluate import Compiled, DEFAULT_P0, DEFAULT_PMAX, UnresolvedFloorError
from .genpoly.interval import Unresolved


@dataclass(frozen=True)
class BinomialLift:
    p: tuple  # coefficients c_0..c_d of p(x) (Fraction or Expr)
    m: int
    a: tuple  # a_0..a_d with p(x)/m = sum a_i C(x, i)

    @property
    def d(self) -> int:
        return len(self.a) - 1

    @property
    def exact(self) -> bool:
        return all(isinstance(x, Fraction) for x in self.a)


def _weights(d: int) -> list:
    """w[i][t] = Δ^i(x^t)(0) = sum_j (-1)^(i-j) C(i, j) j^t."""
    return [[sum((-1) ** (i - j) * comb(i, j) * j ** t for j in range(i + 1))
             for t in range(d + 1)] for i in range(d + 1)]


def binomial_lift(p, m: int) -> BinomialLift:
    """Coefficients a_i = Δ^i(p/m)(0) of p(x)/m in the binomial basis.

    ``p`` lists the coefficients of p in increasing degree; entries may be
    rationals or generalised-polynomial constant expressions (surds).
    """
    coeffs = list(p)
    while len(coeffs) > 1 and not isinstance(coeffs[-1], Expr) and coeffs[-1] == 0:
        coeffs.pop()
    d = len(coeffs) - 1
    if d < 1:
        raise ValueError("p must have degree at least 1")
    if m < 1:
        raise ValueError("m must be positive")
    W = _weights(d)
    surd = any(isinstance(c, Expr) for c in coeffs)
    out = []
    for i in range(d + 1):
        if not surd:
            out.append(sum((Fraction(W[i][t]) * Fraction(coeffs[t]) for t in range(d + 1)),
                           Fraction(0)) / m)
            continue
        terms = [(Fraction(W[i][t], m), coeffs[t]) for t in range(d + 1) if W[i][t]]
        rational = sum((w * c for w, c in terms if not isinstance(c, Expr)), Fraction(0))
        e: Expr = Num(rational)
        for w, c in terms:
            if isinstance(c, Expr):
                e = Add(e, Mul(Num(w), c))
        out.append(e)
    norm = tuple(c if isinstance(c, Expr) else Fraction(c) for c in coeffs)
    return BinomialLift(norm, m, tuple(out))


def poly_expr(coeffs) -> Expr:
    """Expression c_0 + c_1 n + ... + c_d n^d."""
    e: Expr = coeffs[0] if isinstance(coeffs[0], Expr) else Num(Fraction(coeffs[0]))
    for t, c in enumerate(coeffs[1:], 1):
        term = Var() if t == 1 else Pow(Var(), t)
        e = Add(e, Mul(lift(c), term))
    return e


def eval_poly(coeffs, n: int) -> Fraction:
    return sum((Fraction(c) * n ** t for t, c in enumerate(coeffs)), Fraction(0))


# --------------------------------------------------------------------------
# the skew system


class SkewSystem:
    def __init__(self, a):
        a = tuple(a)
        if len(a) < 2:
            raise ValueError("need a_0..a_d with d >= 1")
        self.a = a
        self.d = len(a) - 1
        self.exact = all(not isinstance(x, Expr) for x in a)
        if self.exact:
            fr = [Fraction(x) for x in a]
            self.D = math.lcm(*(x.denominator for x in fr))
            self.A = [int(x * self.D) % self.D for x in fr]
        else:
            self._consts = [Compiled(x if isinstance(x, Expr) else Num(Fraction(x)))
                            for x in a]

    @classmethod
    def from_lift(cls, lift_: BinomialLift) -> "SkewSystem":
        return cls(lift_.a)

    # exact mode works on integers modulo D representing x_j = X_j / D
    def start_state(self) -> list:
        z = [0] * self.d
        z[-1] = self.A[0]
        return z

    def step_int(self, x: list) -> list:
        D, A, d = self.D, self.A, self.d
        y = [0] * d
        y[0] = (x[0] + A[d]) % D
        for j in range(1, d):
            # coordinate j+1 (1-based) uses a_{d-j}
            y[j] = (x[j] + x[j - 1] + A[d - j]) % D
        return y

    def iterate_int(self, N: int):
        """Yield the integer states of T^n z for n = 0..N."""
        x = self.start_state()
        yield x
        for _ in range(N):
            x = self.step_int(x)
            yield x

    def orbit(self, n: int, p0: int = DEFAULT_P0, p_max: int = DEFAULT_PMAX):
        """T^n z with coordinates in [0, 1)."""
        if n < 0:
            raise ValueError("n must be nonnegative")
        if self.exact:
            x = self.start_state()
            for _ in range(n):
                x = self.step_int(x)
            return tuple(Fraction(v, self.D) for v in x)
        return tuple(self._orbit_interval(n, p0, p_max))

    def closed_form_int(self, n: int) -> list:
        """(T^n z)_j = z_j + sum_{i=1}^{j} a_{d-j+i} C(n, i), as integers mod D."""
        D, A, d = self.D, self.A, self.d
        out = []
        for j in range(1, d + 1):
            v = A[0] if j == d else 0
            for i in range(1, j + 1):
                v += A[d - j + i] * comb(n, i)
            out.append(v % D)
        return out

    # interval mode

    def _orbit_raw(self, n: int, p: int):
        a = [c.fn(0, p) if not c.rational else c.fn(0, 0) for c in self._consts]
        d = self.d
        x = [0] * (d - 1) + [a[0]]
        for _ in range(n):
            y = [iv.add(x[0], a[d], p)]
            for j in range(1, d):
                y.append(iv.add(iv.add(x[j], x[j - 1], p), a[d - j], p))
            x = y
        return x

    def _orbit_interval(self, n, p0, p_max):
        p = p0
        while True:
            x = self._orbit_raw(n, p)
            try:
                return [iv.as_value(iv.frac(v, p), p) for v in x]
            except Unresolved:
                if p >= p_max:
                    raise UnresolvedFloorError("orbit", n, p_max) from None
                p *= 2

    def last_coordinate_in(self, n: int, l: int, m: int, p0: int = DEFAULT_P0,
                           p_max: int = DEFAULT_PMAX) -> bool:
        """Is (T^n z)_d in [l/m, (l+1)/m)?  Sound in interval mode."""
        if self.exact:
            x = self.orbit(n)[-1]
            return Fraction(l, m) <= x < Fraction(l + 1, m)
        p = p0
        while True:
            v = self._orbit_raw(n, p)[-1]
            try:
                # floor(m * frac(x)) == l decides membership
                return iv.floor_(iv.mul(m, iv.frac(v, p), p), p) == l
            except Unresolved:
                if p >= p_max:
                    raise UnresolvedFloorError("orbit", n, p_max) from None
                p *= 2

    def state_period(self, limit: int | None = None) -> int:
        """Period of the (purely periodic) exact orbit of z."""
        if not self.exact:
            raise ValueError("period detection needs rational coefficients")
        limit = limit or self.D * math.factorial(self.d) + 1
        z = self.start_state()
        x = self.step_int(z)
        n = 1
        while x != z:
            if n >= limit:
                raise RuntimeError("period not found within limit")
            x = self.step_int(x)
            n += 1
        return n

    def last_coordinate_period(self) -> int:
        P = self.state_period()
        seq = [x[-1] for x in self.iterate_int(P - 1)]
        for q in range(1, P + 1):
            if P % q == 0 and all(seq[i] == seq[i % q] for i in range(P)):
                return q
        return P


# --------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class IdentityReport:
    ok: bool
    checked: int
    first_failure: tuple | None = None  # (n, j, iterated, closed form)

    def describe(self) -> str:
        if self.ok:
            return f"identity holds for all coordinates, n <= {self.checked - 1}"
        n, j, x, y = self.first_failure
        return f"mismatch at n={n}, coordinate {j}: {x} vs {y}"


def verify_identity(s: SkewSystem, N: int) -> IdentityReport:
    """Compare the iterated orbit with the closed form for n <= N, exactly."""
    if not s.exact:
        raise ValueError("exact verification needs rational coefficients")
    for n, x in enumerate(s.iterate_int(N)):
        y = s.closed_form_int(n)
        if x != y:
            j = next(i for i in range(s.d) if x[i] != y[i]) + 1
            return IdentityReport(False, n, (n, j, Fraction(x[j - 1], s.D), Fraction(y[j - 1], s.D)))
    return IdentityReport(True, N + 1)


def verify_bridge(coeffs, m: int, N: int) -> IdentityReport:
    """floor(p(n)) ≡ l (mod m) iff (T^n z)_d ∈ [l/m, (l+1)/m), for n <= N.

    The floor side is computed through the generalised-polynomial
    evaluator, the orbit side by iterating the skew system.
    """
    lift_ = binomial_lift(coeffs, m)
    s = SkewSystem.from_lift(lift_)
    from .genpoly.expr import Func
    c = Compiled(Func("floor", poly_expr(list(lift_.p))))
    D = s.D
    for n, x in enumerate(s.iterate_int(N)):
        l = c.raw(n)[0] % m
        # l/m <= x/D < (l+1)/m, cross-multiplied
        if not l * D <= x[-1] * m < (l + 1) * D:
            return IdentityReport(False, n, (n, s.d, Fraction(x[-1], D), Fraction(l, m)))
    return IdentityReport(True, N + 1)
