"""Named automatic sequences and sets, Fibonacci words and linear recurrences.

Membership of 0 follows the empty-word convention: (0)_k is the empty
word, so 0 belongs to every set defined by forbidding factors (F_B, the
Baum-Sweet variants, the alternating set) and to no set defined by a
required pattern (powers of k, popcount two, "contains w").
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .dfao import (CANONICAL, MSD, ROBUST, Dfao, build_dfao,
                   from_digits, minimize, normalize, str_to_word)
from .seqkit import BlockSequence, FunctionSequence, Sequence


def _finish(a: Dfao, robust: bool) -> Dfao:
    return minimize(normalize(a)) if robust else minimize(a)


# --------------------------------------------------------------------------
# automata


def thue_morse(k: int = 2) -> Dfao:
    """t_n = s_k(n) mod 2 (digit-sum parity); the classical case is k = 2."""
    return minimize(build_dfao(k, None, 0, lambda s, d: (s + d) % 2, lambda s: s, MSD, ROBUST))


def factor_free_dfao(banned: Iterable, k: int = 2) -> Dfao:
    """Aho-Corasick style automaton of F_B reading canonical words.

    States are the longest suffixes of the input that are proper prefixes of
    a banned word, plus a dead state.  Leading zeros are not ignored, so the
    result is only correct on canonical expansions (the raw machine).
    """
    B = [tuple(b) for b in banned]
    if any(len(b) == 0 for b in B):
        raise ValueError("the empty word cannot be banned")
    if any(d >= k for b in B for d in b):
        raise ValueError(f"banned word has a digit >= {k}")
    prefixes = {b[:i] for b in B for i in range(len(b))}

    def step(s, d):
        if s is None:
            return None
        w = s + (d,)
        if any(w[len(w) - len(b):] == b for b in B if len(b) <= len(w)):
            return None
        while w not in prefixes:
            w = w[1:]
        return w

    return minimize(build_dfao(k, None, (), step, lambda s: int(s is not None), MSD, CANONICAL))


def bfree(banned: Iterable, k: int = 2, robust: bool = True) -> Dfao:
    """Indicator of F_B = {n : no b in B is a factor of (n)_k}."""
    B = [str_to_word(b, k) if isinstance(b, str) else tuple(b) for b in banned]
    return _finish(factor_free_dfao(B, k), robust)


def contains_factor(w, k: int = 2) -> Dfao:
    """Indicator of {n : w is a factor of (n)_k}."""
    w = str_to_word(w, k) if isinstance(w, str) else tuple(w)
    a = factor_free_dfao([w], k)
    a = a.with_outputs([1 - o for o in a.outputs])
    return minimize(normalize(a))


def powers(k: int = 2, base: int | None = None) -> Dfao:
    """Indicator of {k^l : l >= 0} read in ``base`` (default k)."""
    base = base or k
    if base != k:
        from .dfao import base_root
        return base_root(powers(k), base, MSD)
    # states: 0 nothing read, 1 read a single 1, 2 dead
    def step(s, d):
        if s == 0:
            return 0 if d == 0 else (1 if d == 1 else 2)
        if s == 1:
            return 1 if d == 0 else 2
        return 2

    return minimize(build_dfao(k, None, 0, step, lambda s: int(s == 1), MSD, ROBUST))


def popcount_two(k: int = 2) -> Dfao:
    """{[1 0^a 1 0^b]_k}: the rank-two arid example (for k = 2, popcount two)."""
    def step(s, d):
        if s == 3 or d > 1:
            return 3
        return min(s + d, 3)

    return minimize(build_dfao(k, None, 0, step, lambda s: int(s == 2), MSD, ROBUST))


def baum_sweet_factor() -> Dfao:
    """1 iff (n)_2 has no factor 1 0^l 1 with l odd."""
    def step(s, d):
        if s == "dead":
            return s
        if s == "start":
            return ("one", 0) if d else "start"
        _, parity = s
        if d == 0:
            return ("one", 1 - parity)
        return "dead" if parity else ("one", 0)

    return minimize(build_dfao(2, None, "start", step, lambda s: int(s != "dead"), MSD, ROBUST))


def baum_sweet_classic() -> Dfao:
    """1 iff every maximal block of zeros in (n)_2 has even length."""
    def step(s, d):
        if s == "dead":
            return s
        if s == "start":
            return ("in", 0) if d else "start"
        _, parity = s
        if d == 0:
            return ("in", 1 - parity)
        return "dead" if parity else ("in", 0)

    def out(s):
        return int(s == "start" or (s != "dead" and s[1] == 0))

    return minimize(build_dfao(2, None, "start", step, out, MSD, ROBUST))


def alternating() -> Dfao:
    """Binary expansions avoiding 00 and 11: 0, 1, 2, 5, 10, 21, ..."""
    return bfree([(0, 0), (1, 1)], 2)


def parity(k: int = 2) -> Dfao:
    """n mod 2."""
    from .setalg import residue_dfao
    return residue_dfao(2, k)


def periodic(pattern, k: int = 2) -> Dfao:
    from .seqkit import periodic_dfao
    return periodic_dfao(list(pattern), k)


def constant(value: int = 1, k: int = 2) -> Dfao:
    return Dfao(k, ((0,) * k,), (value,), 0, MSD, ROBUST)


def union(a: Dfao, b: Dfao) -> Dfao:
    from .dfao import product
    return product(normalize(a), normalize(b), lambda x, y: int(x == 1 or y == 1))


def three_times_powers_of_four() -> Dfao:
    """{3·4^l} = {[11 (00)^l]_2}."""
    def step(s, d):
        table = {("s", 0): "s", ("s", 1): "a", ("a", 1): "b", ("b", 0): "c", ("c", 0): "b"}
        return table.get((s, d), "x")

    return minimize(build_dfao(2, None, "s", step, lambda s: int(s == "b"), MSD, ROBUST))


def even_powers_of_two() -> Dfao:
    """{4^l} = {[1 (00)^l]_2}."""
    def step(s, d):
        table = {("s", 0): "s", ("s", 1): "b", ("b", 0): "c", ("c", 0): "b"}
        return table.get((s, d), "x")

    return minimize(build_dfao(2, None, "s", step, lambda s: int(s == "b"), MSD, ROBUST))


# --------------------------------------------------------------------------
# Fibonacci word, three ways


def fib_word_prefix(n: int) -> list:
    """First n letters of the fixed point of 0 -> 01, 1 -> 0."""
    w = [0]
    while len(w) < n:
        w = [x for c in w for x in ((0, 1) if c == 0 else (0,))]
    return w[:n]


FIB_STURMIAN = "floor((2-phi)*(n+2)) - floor((2-phi)*(n+1))"


def fib_word_sturmian(p0: int = 128) -> Sequence:
    from .genpoly.analysis import GenPolySequence
    return GenPolySequence(FIB_STURMIAN, mod=2, p0=p0, name="fib_word_sturmian")


def fib_word_morphic() -> Sequence:
    return BlockSequence(fib_word_prefix, name="fib_word_morphic")


def zeckendorf(n: int) -> tuple:
    """Digits v_d ... v_2 with n = sum v_i F_i (F_2 = 1, F_3 = 2), greedy."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return ()
    fibs = [1, 2]
    while fibs[-1] <= n:
        fibs.append(fibs[-1] + fibs[-2])
    while fibs[-1] > n:
        fibs.pop()
    out = []
    for f in reversed(fibs):
        if f <= n:
            out.append(1)
            n -= f
        else:
            out.append(0)
    return tuple(out)


def from_zeckendorf(word) -> int:
    word = tuple(word)
    if any(a == b == 1 for a, b in zip(word, word[1:])):
        raise ValueError("adjacent ones are not a Zeckendorf representation")
    fibs = [1, 2]
    while len(fibs) < len(word):
        fibs.append(fibs[-1] + fibs[-2])
    return sum(f for f, v in zip(reversed(fibs[:len(word)]), word) if v)


def w_fib(n: int) -> int:
    """v_2 of the Zeckendorf representation (0 for n = 0)."""
    z = zeckendorf(n)
    return z[-1] if z else 0


def fib_word_zeckendorf() -> Sequence:
    return FunctionSequence(w_fib, name="fib_word_zeckendorf")


# --------------------------------------------------------------------------
# linear recurrences


@dataclass(frozen=True)
class LinRecSpec:
    coeffs: tuple  # c_1..c_n
    initial: tuple  # a_0..a_{n-1}

    def __post_init__(self):
        if len(self.coeffs) != len(self.initial) or not self.coeffs:
            raise ValueError("order mismatch")

    def terms(self, count: int) -> list:
        a = list(self.initial[:count])
        while len(a) < count:
            a.append(sum(c * a[-i] for i, c in enumerate(self.coeffs, 1)))
        return a


class LinRecValues:
    def __init__(self, values: list):
        self.values = values

    def __contains__(self, x) -> bool:
        i = bisect.bisect_left(self.values, x)
        return i < len(self.values) and self.values[i] == x

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)


def linrec_values(spec: LinRecSpec, count: int) -> LinRecValues:
    if count > 10 ** 6:
        raise ValueError("count is limited to 10^6 terms")
    return LinRecValues(sorted(set(spec.terms(count))))


# --------------------------------------------------------------------------
# standard decomposition of rank <= 1 arid sets


@dataclass(frozen=True)
class ExpProgression:
    """{a k^(t l) + b : l >= 0} with rational a, b."""

    a: Fraction
    b: Fraction
    k: int
    t: int

    def term(self, l: int) -> int:
        v = self.a * self.k ** (self.t * l) + self.b
        assert v.denominator == 1
        return v.numerator

    def values_below(self, bound: int) -> list:
        out = []
        l = 0
        while True:
            v = self.term(l)
            if v >= bound:
                return out
            out.append(v)
            l += 1

    def __str__(self):
        return f"{{{self.a}*{self.k}^({self.t}l) + {self.b}}}"


@dataclass(frozen=True)
class LinProgression:
    a: int
    b: int


@dataclass
class StandardDecomposition:
    k: int
    exponential: list
    linear: list
    finite: list

    def values_below(self, bound: int) -> list:
        vals = set(x for x in self.finite if x < bound)
        for p in self.exponential:
            vals.update(p.values_below(bound))
        return sorted(vals)

    def __str__(self):
        lines = [str(p) for p in self.exponential]
        if self.finite:
            lines.append("finite " + ",".join(map(str, self.finite)))
        return "\n".join(lines) if lines else "∅"


def standard_decompose(a: Dfao, verify_bound: int = 2 ** 32) -> StandardDecomposition:
    """Closed forms a k^(tl) + b for the rank-one pieces of an arid set.

    [v0 w^l v1]_k = A k^(tl) + B with t = |w|,
    A = k^|v1| ([v0]_k + [w]_k/(k^t - 1)) and B = [v1]_k - k^|v1| [w]_k/(k^t - 1).
    """
    from .growth import Counter, arid_decompose, classify
    cl = classify(a)
    if not cl.arid or cl.rank > 1:
        raise ValueError(f"need an arid set of rank <= 1, got {cl.describe()}")
    k = a.k
    dec = arid_decompose(a)
    exp, finite = [], []
    for s in dec.sets:
        if s.rank == 0:
            finite.append(from_digits(s.vs[0], k))
            continue
        v0, v1 = s.vs
        (w,) = s.ws
        t = len(w)
        geo = Fraction(from_digits(w, k), k ** t - 1)
        A = k ** len(v1) * (from_digits(v0, k) + geo)
        B = from_digits(v1, k) - k ** len(v1) * geo
        exp.append(ExpProgression(A, B, k, t))
    out = StandardDecomposition(k, exp, [], sorted(finite))
    if verify_bound:
        vals = out.values_below(verify_bound)
        for v in vals:
            if a.run(v) != 1:
                raise AssertionError(f"{v} produced by the decomposition but not in the set")
        if len(vals) != Counter(a).below(verify_bound):
            raise AssertionError("decomposition misses members below the bound")
    return out


# --------------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    params: str
    kind: str  # "dfao" or "sequence"
    description: str


CATALOGUE = [
    CorpusEntry("thue_morse", "k=2", "dfao", "parity of the base-k digit sum"),
    CorpusEntry("baum_sweet_factor", "", "dfao", "no factor 1 0^l 1 with l odd"),
    CorpusEntry("baum_sweet_classic", "", "dfao", "all maximal zero blocks of even length"),
    CorpusEntry("bfree", "ban=W[,W...] k=2", "dfao", "no banned word as a factor"),
    CorpusEntry("contains", "word=W k=2", "dfao", "expansion contains W as a factor"),
    CorpusEntry("powers", "k=2", "dfao", "powers of k"),
    CorpusEntry("rank2", "", "dfao", "[1 0^a 1 0^b]_2 (popcount two)"),
    CorpusEntry("alternating", "", "dfao", "binary expansions avoiding 00 and 11"),
    CorpusEntry("three_powers_four", "", "dfao", "3·4^l = [11 (00)^l]_2"),
    CorpusEntry("powers_four", "", "dfao", "4^l = [1 (00)^l]_2"),
    CorpusEntry("parity", "k=2", "dfao", "n mod 2"),
    CorpusEntry("periodic", "pattern=0,1,... k=2", "dfao", "periodic sequence"),
    CorpusEntry("all", "k=2", "dfao", "constant 1"),
    CorpusEntry("fib_word_sturmian", "", "sequence", "floor((2-phi)(n+2)) - floor((2-phi)(n+1))"),
    CorpusEntry("fib_word_morphic", "", "sequence", "fixed point of 0 -> 01, 1 -> 0"),
    CorpusEntry("fib_word_zeckendorf", "", "sequence", "last Zeckendorf digit"),
]


def build_named(name: str, k: int = 2, ban=None, word=None, pattern=None):
    """Build a catalogue entry: a minimised zero-robust Dfao or a Sequence."""
    if name == "thue_morse":
        return thue_morse(k)
    if name == "baum_sweet_factor":
        return baum_sweet_factor()
    if name == "baum_sweet_classic":
        return baum_sweet_classic()
    if name == "bfree":
        if not ban:
            raise ValueError("bfree needs at least one banned word")
        return bfree(ban, k)
    if name == "contains":
        if not word:
            raise ValueError("contains needs a word")
        return contains_factor(word, k)
    if name == "powers":
        return powers(k)
    if name == "rank2":
        return popcount_two(2)
    if name == "alternating":
        return alternating()
    if name == "three_powers_four":
        return three_times_powers_of_four()
    if name == "powers_four":
        return even_powers_of_two()
    if name == "parity":
        return parity(k)
    if name == "periodic":
        if not pattern:
            raise ValueError("periodic needs a pattern")
        return periodic(pattern, k)
    if name == "all":
        return constant(1, k)
    if name == "fib_word_sturmian":
        return fib_word_sturmian()
    if name == "fib_word_morphic":
        return fib_word_morphic()
    if name == "fib_word_zeckendorf":
        return fib_word_zeckendorf()
    raise ValueError(f"unknown corpus entry {name!r}")
