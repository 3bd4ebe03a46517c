"""IP and IPS witnesses extracted from automata, and finite-sums checks."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import lcm

from .dfao import LSD, Dfao, analyze, from_digits, minimize, to_reading, word_to_str
from .growth import Classification, _path, canonical_language, classify


class NotIps(ValueError):
    """Raised when an IPS witness is requested for an arid set."""


class HypothesisError(ValueError):
    """The factor-universality hypothesis fails; ``word`` is never a factor."""

    def __init__(self, word: tuple, k: int):
        self.word = word
        super().__init__(f"no member of the set has {word_to_str(word, k) or 'ε'} as a factor")


# --------------------------------------------------------------------------
# IPS witnesses from non-arid automata


@dataclass(frozen=True)
class IpsWitness:
    k: int
    state: int  # state of the canonical-language automaton
    u0: tuple
    v1: tuple
    v2: tuple
    u1: tuple
    automaton: Dfao

    @property
    def l(self) -> int:
        return len(self.v1)

    def generator(self, i: int) -> int:
        """n_i = ([v2] - [v1]) k^((i-1) l + |u1|), i >= 1."""
        k = self.k
        diff = from_digits(self.v2, k) - from_digits(self.v1, k)
        return diff * k ** ((i - 1) * self.l + len(self.u1))

    def generators(self, T: int) -> list:
        return [self.generator(i) for i in range(1, T + 1)]

    def shift(self, t: int) -> int:
        """N_t = [u0 v1^t u1]_k."""
        return from_digits(self.u0 + self.v1 * t + self.u1, self.k)

    def shifts(self, T: int) -> list:
        return [self.shift(t) for t in range(1, T + 1)]

    def describe(self, T: int = 4) -> str:
        k = self.k
        w = lambda x: word_to_str(x, k) or "ε"  # noqa: E731
        lines = [f"state={self.state} l={self.l}",
                 f"u0={w(self.u0)} v1={w(self.v1)} v2={w(self.v2)} u1={w(self.u1)}"]
        for i in range(1, T + 1):
            lines.append(f"n_{i}={self.generator(i)}  N_{i}={self.shift(i)}")
        return "\n".join(lines)


def _power_to(v: tuple, L: int) -> tuple:
    return v * (L // len(v))


def ips_witness(a: Dfao, evidence: Classification | None = None, target: int = 1) -> IpsWitness:
    """Words u0, v1, v2, u1 with u0 {v1, v2}^* u1 inside the language of a.

    The noncommuting loops from the classification are replaced by powers
    of equal length and ordered so that [v1]_k < [v2]_k; u0 is a shortest
    access word of the loop state and u1 a shortest word from it to an
    accepting state.
    """
    ev = evidence if evidence is not None else classify(a, target)
    if ev.arid:
        raise NotIps(f"the set is arid (rank {ev.rank}); no IPS witness")
    c = ev.automaton
    s = ev.state
    L = lcm(len(ev.v1), len(ev.v2))
    v1, v2 = _power_to(ev.v1, L), _power_to(ev.v2, L)
    if from_digits(v1, c.k) > from_digits(v2, c.k):
        v1, v2 = v2, v1
    everything = set(range(c.num_states))
    u0 = _path(c, c.initial, s, everything)
    u1 = _shortest_to_output(c, s, 1)
    if u0 is None or u1 is None:
        raise NotIps("witness state is not trim")
    if c.walk(s, v1) != s or c.walk(s, v2) != s or v1 + v2 == v2 + v1:
        raise AssertionError("classification evidence does not give noncommuting loops")
    return IpsWitness(c.k, s, u0, v1, v2, u1, c)


def _shortest_to_output(a: Dfao, src: int, value: int):
    parent = {src: None}
    queue = deque([src])
    while queue:
        s = queue.popleft()
        if a.outputs[s] == value:
            word = []
            while parent[s] is not None:
                s, d = parent[s]
                word.append(d)
            return tuple(reversed(word))
        for d, t in enumerate(a.delta[s]):
            if t not in parent:
                parent[t] = (s, d)
                queue.append(t)
    return None


# --------------------------------------------------------------------------
# finite sums


@dataclass
class FsReport:
    ok: bool
    checked: int
    first_failure: tuple | None = None  # (alpha, t, value)
    levels: dict = field(default_factory=dict)  # t -> (members, total)

    def describe(self) -> str:
        lines = []
        for t, (good, total) in sorted(self.levels.items()):
            lines.append(f"t={t}: verified {good}/{total} sums")
        if self.ok:
            lines.append(f"all {self.checked} scheduled sums are members")
        else:
            alpha, t, value = self.first_failure
            lines.append(f"failure: alpha={{{','.join(map(str, alpha))}}} t={t} value={value}")
        return "\n".join(lines)


def _subset_sums(gens: list) -> list:
    sums = [0] * (1 << len(gens))
    for mask in range(1, len(sums)):
        low = mask & -mask
        sums[mask] = sums[mask ^ low] + gens[low.bit_length() - 1]
    return sums


def _alpha(mask: int) -> tuple:
    return tuple(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def verify_fs(a: Dfao, gens, shifts=None, T: int | None = None, target: int = 1,
              stop_at_first: bool = False) -> FsReport:
    """Check n_alpha + shift ∈ E for the finite sums of the generators.

    ``shifts`` may be None (no shift), an integer (a constant shift, all
    nonempty alpha ⊆ {1..T}), or a list N_1..N_T (alpha ⊆ {1..t} paired with
    N_t for every t <= T).
    """
    gens = list(gens)
    T = len(gens) if T is None else T
    if T > 20:
        raise ValueError("at most 20 generators")
    if T > len(gens) or any(g <= 0 for g in gens[:T]):
        raise ValueError("need T positive generators")
    gens = gens[:T]
    sums = _subset_sums(gens)
    if shifts is None or isinstance(shifts, int):
        schedule = [(T, shifts or 0)]
    else:
        shifts = list(shifts)
        if len(shifts) < T:
            raise ValueError("need a shift N_t for every t <= T")
        schedule = [(t, shifts[t - 1]) for t in range(1, T + 1)]
    checked = 0
    first = None
    levels = {}
    for t, N in schedule:
        good = 0
        for mask in range(1, 1 << t):
            value = sums[mask] + N
            checked += 1
            if a.run(value) == target:
                good += 1
            elif first is None:
                first = (_alpha(mask), t, value)
                if stop_at_first:
                    levels[t] = (good, (1 << t) - 1)
                    return FsReport(False, checked, first, levels)
        levels[t] = (good, (1 << t) - 1)
    return FsReport(first is None, checked, first, levels)


def translate_ip_failure(a: Dfao, gens, m: int, target: int = 1):
    """First alpha (in binary-mask order) with n_alpha + m outside E, or None.

    A result shows that FS(gens) is not contained in E - m.
    """
    gens = list(gens)
    sums = _subset_sums(gens)
    for mask in range(1, len(sums)):
        if a.run(sums[mask] + m) != target:
            return _alpha(mask), sums[mask]
    return None


# --------------------------------------------------------------------------
# factor universality


@dataclass(frozen=True)
class FactorReport:
    ok: bool
    word: tuple | None  # shortest word that is never a factor, if any
    explored: int


def factor_universality(a: Dfao, target: int = 1) -> FactorReport:
    """Decide whether every word is a factor of some (n)_k with n ∈ E.

    A word w is a factor of an accepted canonical word iff some accessible
    state of the canonical-language automaton reaches a coaccessible state
    on w.  Breadth-first search over the images δ(P, w) of the accessible
    set P finds the shortest failing word, or proves there is none.
    """
    c = canonical_language(a, target)
    info = analyze(c, 1)
    co = info.coaccessible
    start = frozenset(info.accessible)
    seen = {start: ()}
    queue = deque([start])
    while queue:
        P = queue.popleft()
        if not P & co:
            return FactorReport(False, seen[P], len(seen))
        for d in range(c.k):
            Q = frozenset(c.delta[s][d] for s in P)
            if Q not in seen:
                seen[Q] = seen[P] + (d,)
                queue.append(Q)
    return FactorReport(True, None, len(seen))


# --------------------------------------------------------------------------
# shifted IP witnesses


@dataclass(frozen=True)
class ShiftedIpWitness:
    k: int
    automaton: Dfao  # robust LSD automaton the diagram lives in
    s: int
    s2: int
    v: tuple
    z: tuple
    u: tuple
    steps: dict = field(default_factory=dict, compare=False)

    @property
    def l(self) -> int:
        return len(self.v)

    @property
    def N(self) -> int:
        """Shift N = [u^R]_k."""
        return from_digits(tuple(reversed(self.u)), self.k)

    def generator(self, i: int) -> int:
        """n_i = k^((i-1) l + |u|) [v^R]_k."""
        return self.k ** ((i - 1) * self.l + len(self.u)) * from_digits(tuple(reversed(self.v)), self.k)

    def generators(self, T: int) -> list:
        return [self.generator(i) for i in range(1, T + 1)]

    def diagram(self) -> list:
        """Rows (from, word, to) of the four transitions of the diagram."""
        b = self.automaton
        return [(self.s, "z", b.walk(self.s, self.z)), (self.s, "v", b.walk(self.s, self.v)),
                (self.s2, "z", b.walk(self.s2, self.z)), (self.s2, "v", b.walk(self.s2, self.v))]

    def check(self) -> bool:
        b = self.automaton
        want = [self.s2, self.s, self.s2, self.s]
        return ([row[2] for row in self.diagram()] == want and b.outputs[self.s] == 1
                and any(self.v) and b.walk(b.initial, self.u) == self.s)

    def describe(self, T: int = 4) -> str:
        k = self.k
        w = lambda x: word_to_str(x, k) or "ε"  # noqa: E731
        lines = [f"s={self.s} s'={self.s2} l={self.l}",
                 f"u={w(self.u)} (LSD first)", f"v={w(self.v)}", f"z=0^{len(self.z)}",
                 "  from  word  to",
                 *[f"  {x:>4}  {lab:>4}  {y}" for x, lab, y in self.diagram()],
                 f"N={self.N}"]
        for i in range(1, T + 1):
            lines.append(f"n_{i}={self.generator(i)}")
        return "\n".join(lines)


def _shortest(b: Dfao, src: int, dst: int):
    return _path(b, src, dst, set(range(b.num_states)))


def _accepting_tail(b: Dfao, q: int):
    """Shortest y containing a nonzero digit with τ(δ(q, y)) = 1."""
    start = (q, False)
    parent = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        s, nz = node
        if nz and b.outputs[s] == 1:
            word = []
            while parent[node] is not None:
                node, d = parent[node]
                word.append(d)
            return tuple(reversed(word))
        for d, t in enumerate(b.delta[s]):
            nxt = (t, nz or d != 0)
            if nxt not in parent:
                parent[nxt] = (node, d)
                queue.append(nxt)
    return None


def shifted_ip_witness(a: Dfao, target: int = 1) -> ShiftedIpWitness:
    """Constructive shifted-IP witness for a set meeting every factor.

    Works on the minimal zero-robust automaton reading least significant
    digit first.  The pair-scheduling word, the return path from
    δ(s, 0^n), the stabilised state s' = δ(s, 0^m) and the words
    v = (0^m u)^m, z = 0^l are built step by step; E then contains all
    n_alpha + N.
    """
    rep = factor_universality(a, target)
    if not rep.ok:
        raise HypothesisError(rep.word, a.k)
    b = minimize(to_reading(a.indicator(target), LSD))
    k, n = b.k, b.num_states
    zero = lambda t: (0,) * t  # noqa: E731

    # pair-scheduling word w = w_1 ... w_{n^2}
    pairs = [(p, q) for p in range(n) for q in range(n)]
    pieces: list = []
    w: tuple = ()
    for p, q in pairs:
        cur = b.walk(p, w)
        piece = _shortest(b, cur, q)
        piece = piece if piece is not None else ()
        pieces.append(piece)
        w += piece

    # x w y with y not a power of 0 ending in an accepting state
    x = y = None
    for p in b.accessible():
        tail = _accepting_tail(b, b.walk(p, w))
        if tail is not None:
            x, y, r0 = _shortest(b, b.initial, p), tail, p
            break
    if y is None:
        raise HypothesisError(w + (1,), k)
    s = b.walk(b.initial, x + w + y)
    s_tilde = b.walk(s, zero(n))
    j = pairs.index((r0, s_tilde)) + 1
    v_tilde = sum(pieces[j:], ()) + y
    if b.walk(s_tilde, v_tilde) != s:
        raise AssertionError("return path from δ(s, 0^n) does not reach s")

    # first repeat in the orbit of s under 0
    orbit = {}
    t, cur = 0, s
    while cur not in orbit:
        orbit[cur] = t
        cur = b.delta[cur][0]
        t += 1
    i0, j0 = orbit[cur], t
    period = j0 - i0
    m = period * (i0 // period + 1)
    s2 = b.walk(s, zero(m))
    u_ret = zero(n) + v_tilde
    v = (zero(m) + u_ret) * m
    l = m * (len(u_ret) + m)
    z = zero(l)
    u_acc = _shortest(b, b.initial, s)
    steps = {"n": n, "w": w, "x": x, "y": y, "j": j, "s_tilde": s_tilde, "v_tilde": v_tilde,
             "i": i0, "j_zero": j0, "m": m, "u_return": u_ret}
    out = ShiftedIpWitness(k, b, s, s2, v, z, u_acc, steps)
    if not out.check():
        raise AssertionError("constructed words do not satisfy the diagram")
    return out
