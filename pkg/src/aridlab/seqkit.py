"""Sequence-level tools: k-kernels, kernel automata, weak periodicity."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence as SeqType

from .dfao import (LSD, MSD, ROBUST, Dfao, ResourceError, distinguishing_word,
                   minimize, normalize, to_reading, to_text)


class HorizonError(ValueError):
    """A sequence was asked for a term beyond its declared horizon."""


# --------------------------------------------------------------------------
# sequences


class Sequence:
    """A map N_0 -> small integers with a cached prefix.

    Subclasses implement ``_compute(start, stop)`` returning the list of
    terms in ``range(start, stop)``.  ``horizon`` is the first index that
    cannot be evaluated (``None`` for unbounded).
    """

    horizon: int | None = None
    name: str = "sequence"

    def __init__(self):
        self._cache: list = []

    def _compute(self, start: int, stop: int) -> list:
        raise NotImplementedError

    def values(self, stop: int) -> list:
        if self.horizon is not None and stop > self.horizon:
            raise HorizonError(f"{self.name}: requested {stop} terms, horizon is {self.horizon}")
        have = len(self._cache)
        if stop > have:
            self._cache.extend(self._compute(have, stop))
        return self._cache[:stop]

    def __call__(self, n: int):
        if n < len(self._cache):
            return self._cache[n]
        if self.horizon is not None and n >= self.horizon:
            raise HorizonError(f"{self.name}: index {n} beyond horizon {self.horizon}")
        return self._compute(n, n + 1)[0]

    @property
    def dfao(self) -> Dfao | None:
        return None


class DfaoSequence(Sequence):
    def __init__(self, a: Dfao, name: str = "dfao"):
        super().__init__()
        self.automaton = a
        self.name = name
        self._msd = a if a.reading == MSD else None

    @property
    def dfao(self) -> Dfao:
        return self.automaton

    def _compute(self, start, stop):
        a = self.automaton
        if self._msd is None:
            try:
                self._msd = to_reading(a, MSD, cap=20000)
            except ResourceError:
                return [a.run(n) for n in range(start, stop)]
        m = self._msd
        k, delta = m.k, m.delta
        # state of n is delta[state(n // k)][n % k]; valid on canonical words
        states = getattr(self, "_states", [m.initial])
        for n in range(len(states), stop):
            states.append(delta[states[n // k]][n % k])
        self._states = states
        out = m.outputs
        return [out[states[n]] for n in range(start, stop)]

    def __call__(self, n):
        return self.automaton.run(n)


class FunctionSequence(Sequence):
    def __init__(self, fn: Callable[[int], int], horizon: int | None = None,
                 name: str = "function"):
        super().__init__()
        self.fn = fn
        self.horizon = horizon
        self.name = name

    def _compute(self, start, stop):
        return [self.fn(n) for n in range(start, stop)]


class BlockSequence(Sequence):
    """Sequence computed by a function returning whole prefixes."""

    def __init__(self, prefix_fn: Callable[[int], list], horizon: int | None = None,
                 name: str = "block"):
        super().__init__()
        self.prefix_fn = prefix_fn
        self.horizon = horizon
        self.name = name

    def _compute(self, start, stop):
        return list(self.prefix_fn(stop)[start:stop])


class PrefixSequence(Sequence):
    def __init__(self, values: SeqType[int], name: str = "prefix"):
        super().__init__()
        self._cache = list(values)
        self.horizon = len(self._cache)
        self.name = name

    def _compute(self, start, stop):
        raise HorizonError(f"{self.name}: horizon is {self.horizon}")


def as_sequence(f) -> Sequence:
    if isinstance(f, Sequence):
        return f
    if isinstance(f, Dfao):
        return DfaoSequence(f)
    if callable(f):
        return FunctionSequence(f)
    return PrefixSequence(f)


# --------------------------------------------------------------------------
# exact kernel


@dataclass
class KernelElement:
    index: int
    l: int
    r: int
    value_at_zero: int
    automaton: Dfao | None = None
    vector: tuple = ()


@dataclass
class KernelTable:
    k: int
    elements: list
    edges: dict  # (element index, digit) -> element index
    closed: bool = True
    exact: bool = True

    def __len__(self):
        return len(self.elements)

    def to_text(self) -> str:
        if not self.closed:
            raise ValueError("kernel table is not closed")
        a = dfao_from_kernel(self)
        comments = {e.index: f"kernel l={e.l} r={e.r}" for e in self.elements}
        return to_text(a, comments)


def kernel_exact(a: Dfao, cap: int = 100000, vector_len: int = 16) -> KernelTable:
    """The full k-kernel of the sequence generated by ``a``.

    Kernel elements n -> a(k^l n + r) are the word functions from states of a
    zero-robust LSD automaton.  New candidates are compared with the
    elements found so far by product-automaton emptiness.
    """
    b = normalize(to_reading(a, LSD))
    k = b.k
    reps: list[int] = []  # automaton state representing each element
    elements: list[KernelElement] = []
    edges: dict = {}

    def find(q):
        for i, p in enumerate(reps):
            if distinguishing_word(b, b, p, q) is None:
                return i
        return None

    def add(q, l, r):
        if len(elements) >= cap:
            raise ResourceError(f"kernel larger than cap {cap}")
        sub = minimize(b.with_initial(q))
        vec = tuple(sub.run(n) for n in range(vector_len))
        elements.append(KernelElement(len(elements), l, r, b.outputs[q], sub, vec))
        reps.append(q)
        return len(elements) - 1

    add(b.initial, 0, 0)
    queue = deque([0])
    while queue:
        i = queue.popleft()
        e, q = elements[i], reps[i]
        for d in range(k):
            t = b.delta[q][d]
            j = find(t)
            if j is None:
                j = add(t, e.l + 1, e.r + d * k ** e.l)
                queue.append(j)
            edges[(i, d)] = j
    return KernelTable(k, elements, edges, True, True)


def dfao_from_kernel(t: KernelTable) -> Dfao:
    """Eilenberg's automaton: states are kernel elements, LSD reading."""
    if not t.closed:
        raise ValueError("kernel table is not closed under n -> kn + d")
    n = len(t.elements)
    delta = []
    for i in range(n):
        row = []
        for d in range(t.k):
            if (i, d) not in t.edges:
                raise ValueError(f"missing kernel edge ({i}, {d})")
            row.append(t.edges[(i, d)])
        delta.append(tuple(row))
    outputs = tuple(e.value_at_zero for e in t.elements)
    return Dfao(t.k, tuple(delta), outputs, 0, LSD, ROBUST)


# --------------------------------------------------------------------------
# empirical kernel


@dataclass
class EmpiricalKernel:
    k: int
    l_max: int
    prefix_len: int
    profile: list  # profile[l] = number of distinct vectors at level l
    table: KernelTable
    cumulative: list = None  # distinct vectors over all levels <= l

    @property
    def saturated(self) -> bool:
        return self.table.closed

    def rows(self):
        return [(l, c) for l, c in enumerate(self.profile)]


def kernel_empirical(f, l_max: int, prefix_len: int, k: int = 2) -> EmpiricalKernel:
    """Count distinct truncated kernel vectors per level.

    Level l holds the vectors (f(k^l n + r))_{n < prefix_len} for r < k^l.
    Vectors that agree on the prefix are merged, so the counts can only
    undercount the true kernel.
    """
    f = as_sequence(f)
    vals = f.values(k ** l_max * prefix_len)
    profile, cumulative = [], []
    union: set = set()
    for l in range(l_max + 1):
        step = k ** l
        seen = {tuple(vals[r::step][:prefix_len]) for r in range(step)}
        profile.append(len(seen))
        union |= seen
        cumulative.append(len(union))

    # breadth-first table of distinct vectors with closure edges
    def vec(l, r):
        return tuple(vals[r::k ** l][:prefix_len])

    index = {vec(0, 0): 0}
    elements = [KernelElement(0, 0, 0, vals[0], None, vec(0, 0))]
    edges = {}
    closed = True
    queue = deque([0])
    while queue:
        i = queue.popleft()
        e = elements[i]
        if e.l == l_max:
            closed = False
            continue
        for d in range(k):
            l, r = e.l + 1, e.r + d * k ** e.l
            v = vec(l, r)
            j = index.get(v)
            if j is None:
                j = index[v] = len(elements)
                elements.append(KernelElement(j, l, r, v[0], None, v))
                queue.append(j)
            edges[(i, d)] = j
    table = KernelTable(k, elements, edges, closed, False)
    return EmpiricalKernel(k, l_max, prefix_len, profile, table, cumulative)


# --------------------------------------------------------------------------
# weak periodicity


@dataclass(frozen=True)
class WeakPeriodicityWitness:
    a: int
    b: int
    q: int
    r: int
    r2: int
    verification: str  # "exact" or "bounded"
    horizon: int

    def describe(self) -> str:
        return (f"witness q={self.q} r={self.r} r'={self.r2} "
                f"(a={self.a}, b={self.b}) {self.verification}"
                + ("" if self.verification == "exact" else f" n<={self.horizon}"))


@dataclass(frozen=True)
class Exhaustion:
    a: int
    b: int
    q_max: int
    horizon: int
    candidates: int
    rejected_exactly: int = 0

    def describe(self) -> str:
        return (f"exhausted: no witness with q<={self.q_max}, n<={self.horizon} "
                f"({self.candidates} residue pairs tested)")


def weak_periodicity_search(f, a: int = 1, b: int = 0, q_max: int = 16,
                            N: int = 1024, exact: bool = True):
    """First (q, r, r') with f(a(qn+r)+b) = f(a(qn+r')+b) for n <= N.

    Residues range over 0 <= r < r' < 2q.  For automaton-backed inputs the
    bounded candidate is upgraded to an exact witness by an equivalence
    check of the two affine restrictions; candidates that fail the exact
    check are skipped.  Returns an :class:`Exhaustion` report when nothing
    is found.
    """
    if a < 1 or b < 0:
        raise ValueError("need a >= 1 and b >= 0")
    seq = as_sequence(f)
    automaton = seq.dfao if exact else None
    stop = a * (q_max * N + 2 * q_max) + b + 1
    vals = seq.values(stop)
    g = vals[b::a]
    tested = rejected = 0
    for q in range(1, q_max + 1):
        for r in range(2 * q):
            row = g[r:r + q * N + 1:q]
            for r2 in range(r + 1, 2 * q):
                tested += 1
                if g[r2:r2 + q * N + 1:q] != row:
                    continue
                if automaton is None:
                    return WeakPeriodicityWitness(a, b, q, r, r2, "bounded", N)
                from .setalg import affine_preimage
                from .dfao import equivalent
                p1 = affine_preimage(automaton, a * q, a * r + b)
                p2 = affine_preimage(automaton, a * q, a * r2 + b)
                if equivalent(p1, p2):
                    return WeakPeriodicityWitness(a, b, q, r, r2, "exact", N)
                rejected += 1
    return Exhaustion(a, b, q_max, N, tested, rejected)


# --------------------------------------------------------------------------
# mismatch sets


def periodic_dfao(pattern: SeqType[int], k: int = 2, reading: str = MSD) -> Dfao:
    """Automaton of n -> pattern[n mod len(pattern)]."""
    from .dfao import build_dfao
    p = len(pattern)
    if p < 1:
        raise ValueError("empty pattern")
    if reading == MSD:
        a = build_dfao(k, None, 0, lambda v, d: (k * v + d) % p,
                       lambda v: pattern[v], MSD, ROBUST)
    else:
        a = build_dfao(k, None, (0, 1 % p),
                       lambda st, d: ((st[0] + d * st[1]) % p, (st[1] * k) % p),
                       lambda st: pattern[st[0]], LSD, ROBUST)
    return minimize(a)


def mismatch_set(f: Dfao, period: int, pattern: SeqType[int]) -> Dfao:
    """Indicator of Z = {n : f(n) != pattern[n mod period]}."""
    from .dfao import product
    if len(pattern) != period or period < 1:
        raise ValueError("pattern length must equal the period")
    g = normalize(f)
    return product(g, periodic_dfao(pattern, f.k, g.reading),
                   lambda x, y: int(x != y))


def best_fit_pattern(f: Dfao, period: int):
    """Pattern minimising the density of the mismatch set.

    Returns ``(pattern, density)`` using exact uniform densities of the
    joint sequence n -> (f(n), n mod period); ``None`` when some density
    does not exist.
    """
    from .dfao import product
    from .setalg import uniform_density
    g = normalize(f)
    res = periodic_dfao(list(range(period)), f.k, g.reading)
    joint = product(g, res, lambda x, y: x * period + y)
    rep = uniform_density(joint)
    if not rep.exists:
        return None
    values = sorted(set(f.outputs))
    pattern = []
    miss = Fraction(0)
    for r in range(period):
        best = max(values, key=lambda y: (rep.rho.get(y * period + r, 0), -y))
        pattern.append(best)
        share = sum((rep.rho.get(y * period + r, 0) for y in values), Fraction(0))
        miss += share - rep.rho.get(best * period + r, 0)
    return pattern, miss
