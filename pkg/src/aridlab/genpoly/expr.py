"""Expression trees for generalised polynomials, with parser and printer.

Grammar (whitespace insignificant)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' factor) | ('/' uint))*
    unary  := '-' unary | factor
    factor := atom ('^' uint)?
    atom   := int | int '/' uint | 'n' | 'pi' | 'phi' | 'sqrt(' uint ')'
            | ('floor' | 'frac' | 'nint' | 'dist') '(' expr ')' | '(' expr ')'

Unary minus in front of a literal is folded into the literal, and ``x / q``
for a positive integer q is stored as ``x * (1/q)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class Expr:
    __slots__ = ()

    def __str__(self):
        return to_string(self)

    # python operators give a small builder DSL
    def __add__(self, other):
        return Add(self, lift(other))

    def __radd__(self, other):
        return Add(lift(other), self)

    def __sub__(self, other):
        return Sub(self, lift(other))

    def __rsub__(self, other):
        return Sub(lift(other), self)

    def __mul__(self, other):
        return Mul(self, lift(other))

    def __rmul__(self, other):
        return Mul(lift(other), self)

    def __neg__(self):
        return Neg(self)

    def __pow__(self, e: int):
        return Pow(self, e)


@dataclass(frozen=True, eq=True)
class Num(Expr):
    value: Fraction


@dataclass(frozen=True, eq=True)
class Const(Expr):
    name: str  # "sqrt", "pi", "phi"
    arg: int | None = None


@dataclass(frozen=True, eq=True)
class Var(Expr):
    name: str = "n"


@dataclass(frozen=True, eq=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True, eq=True)
class Pow(Expr):
    base: Expr
    exp: int

    def __post_init__(self):
        if self.exp < 0:
            raise ValueError("negative exponent")


FUNCTIONS = ("floor", "frac", "nint", "dist")


@dataclass(frozen=True, eq=True)
class Func(Expr):
    name: str
    arg: Expr

    def __post_init__(self):
        if self.name not in FUNCTIONS:
            raise ValueError(f"unknown function {self.name!r}")


N = Var()


def lift(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction)):
        return Num(Fraction(x))
    raise TypeError(f"cannot use {x!r} in an expression")


def sqrt(m: int) -> Const:
    if m < 2 or math.isqrt(m) ** 2 == m:
        raise ValueError(f"sqrt({m}) is not an irrational square root")
    return Const("sqrt", m)


PI = Const("pi")
PHI = Const("phi")


def floor(x) -> Func:
    return Func("floor", lift(x))


def frac(x) -> Func:
    return Func("frac", lift(x))


def nint(x) -> Func:
    return Func("nint", lift(x))


def dist(x) -> Func:
    return Func("dist", lift(x))


# --------------------------------------------------------------------------
# queries


def children(e: Expr):
    if isinstance(e, (Add, Sub, Mul)):
        return (e.left, e.right)
    if isinstance(e, (Neg, Func)):
        return (e.arg,)
    if isinstance(e, Pow):
        return (e.base,)
    return ()


def walk(e: Expr):
    stack = [e]
    while stack:
        x = stack.pop()
        yield x
        stack.extend(children(x))


def is_rational(e: Expr) -> bool:
    """True when the tree contains no irrational constant."""
    return not any(isinstance(x, Const) for x in walk(e))


def count_nodes(e: Expr, kind) -> int:
    return sum(1 for x in walk(e) if isinstance(x, kind))


def substitute(e: Expr, value: Expr) -> Expr:
    """Replace the variable by ``value``."""
    if isinstance(e, Var):
        return value
    if isinstance(e, (Num, Const)):
        return e
    if isinstance(e, Add):
        return Add(substitute(e.left, value), substitute(e.right, value))
    if isinstance(e, Sub):
        return Sub(substitute(e.left, value), substitute(e.right, value))
    if isinstance(e, Mul):
        return Mul(substitute(e.left, value), substitute(e.right, value))
    if isinstance(e, Neg):
        return Neg(substitute(e.arg, value))
    if isinstance(e, Pow):
        return Pow(substitute(e.base, value), e.exp)
    if isinstance(e, Func):
        return Func(e.name, substitute(e.arg, value))
    raise TypeError(e)


# --------------------------------------------------------------------------
# printer

_ADD, _MUL, _UNARY, _ATOM = 1, 2, 3, 4


def _num_text(v: Fraction) -> str:
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


def _prec(e: Expr) -> int:
    if isinstance(e, (Add, Sub)):
        return _ADD
    if isinstance(e, Mul):
        return _MUL
    if isinstance(e, Neg):
        return _UNARY
    if isinstance(e, Num):
        if e.value < 0:
            return _UNARY
        return _ATOM
    if isinstance(e, Pow):
        return _UNARY
    return _ATOM


def to_string(e: Expr) -> str:
    """Canonical text form; ``parse(to_string(e))`` rebuilds ``e``."""

    def go(x: Expr, need: int) -> str:
        s = body(x)
        return f"({s})" if _prec(x) < need else s

    def body(x: Expr) -> str:
        if isinstance(x, Num):
            return _num_text(x.value)
        if isinstance(x, Const):
            return f"sqrt({x.arg})" if x.name == "sqrt" else x.name
        if isinstance(x, Var):
            return x.name
        if isinstance(x, Add):
            return f"{go(x.left, _ADD)} + {go(x.right, _MUL)}"
        if isinstance(x, Sub):
            return f"{go(x.left, _ADD)} - {go(x.right, _MUL)}"
        if isinstance(x, Mul):
            return f"{go(x.left, _MUL)}*{go(x.right, _UNARY + 1 if _right_needs_atom(x.right) else _UNARY)}"
        if isinstance(x, Neg):
            inner = go(x.arg, _UNARY)
            # keep "-3" distinct from the folded literal -3
            if isinstance(x.arg, Num) or inner.startswith("-"):
                inner = f"({body(x.arg)})"
            return f"-{inner}"
        if isinstance(x, Pow):
            base = body(x.base)
            if _prec(x.base) < _ATOM or (isinstance(x.base, Num) and x.base.value.denominator != 1):
                base = f"({base})"
            return f"{base}^{x.exp}"
        if isinstance(x, Func):
            return f"{x.name}({body(x.arg)})"
        raise TypeError(x)

    return body(e)


def _right_needs_atom(x: Expr) -> bool:
    # a right operand of '*' may not start with '-' (it would parse, but
    # is harder to read); negative literals are parenthesised
    return isinstance(x, Neg) or (isinstance(x, Num) and x.value < 0)


# --------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise ParseError(f"expected {ch!r}, found {found!r}", self.pos)
        self.pos += 1

    def uint(self) -> int:
        self.skip()
        start = self.pos
        if self.peek() == "-":
            raise ParseError("negative exponent or divisor not allowed", self.pos)
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected an unsigned integer", self.pos)
        return int(self.text[start:self.pos])

    def ident(self) -> str:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalpha() or self.text[self.pos] == "_"):
            self.pos += 1
        return self.text[start:self.pos]

    def parse(self) -> Expr:
        e = self.expr()
        self.skip()
        if self.pos != len(self.text):
            raise ParseError(f"unexpected {self.text[self.pos]!r}", self.pos)
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            rhs = self.term()
            e = Add(e, rhs) if op == "+" else Sub(e, rhs)
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.peek() in ("*", "/"):
            op = self.text[self.pos]
            self.pos += 1
            if op == "*":
                e = Mul(e, self.unary())
            else:
                pos = self.pos
                q = self.uint()
                if q == 0:
                    raise ParseError("division by zero", pos)
                e = Mul(e, Num(Fraction(1, q)))
        return e

    def unary(self) -> Expr:
        if self.peek() == "-":
            self.pos += 1
            inner = self.unary()
            if isinstance(inner, Num) and not self._parenthesised_literal:
                return Num(-inner.value)
            self._parenthesised_literal = False
            return Neg(inner)
        self._parenthesised_literal = False
        return self.factor()

    _parenthesised_literal = False

    def factor(self) -> Expr:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            exp = self.uint()
            self._parenthesised_literal = False
            return Pow(base, exp)
        return base

    def atom(self) -> Expr:
        ch = self.peek()
        start = self.pos
        if ch.isdigit():
            v = self.uint()
            if self.peek() == "/":
                save = self.pos
                self.pos += 1
                if self.peek().isdigit():
                    q = self.uint()
                    if q == 0:
                        raise ParseError("division by zero", save + 1)
                    return Num(Fraction(v, q))
                self.pos = save
            return Num(Fraction(v))
        if ch == "(":
            self.pos += 1
            e = self.expr()
            self.expect(")")
            self._parenthesised_literal = isinstance(e, Num)
            return e
        if ch.isalpha():
            name = self.ident()
            if name == "n":
                return Var()
            if name == "pi":
                return PI
            if name == "phi":
                return PHI
            if name == "sqrt":
                self.expect("(")
                pos = self.pos
                m = self.uint()
                self.expect(")")
                if m < 2 or math.isqrt(m) ** 2 == m:
                    raise ParseError(f"sqrt({m}) is not irrational; write the integer", pos)
                return Const("sqrt", m)
            if name in FUNCTIONS:
                self.expect("(")
                e = self.expr()
                self.expect(")")
                return Func(name, e)
            raise ParseError(f"unknown constant or function {name!r}", start)
        raise ParseError(f"unexpected {ch or 'end of input'!r}", self.pos)


def parse(text: str) -> Expr:
    """Parse a generalised-polynomial expression."""
    return _Parser(text).parse()
