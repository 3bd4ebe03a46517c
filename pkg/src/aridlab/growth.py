"""Growth of automatic sets: aridity, rank, exact counting and decompositions.

Sets are given by indicator automata.  Structural questions are answered on
the automaton of the canonical language {(n)_k : n in E}, which never
contains words with a leading zero, so leading-zero loops of a zero-robust
automaton cannot inflate the rank.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .dfao import (CANONICAL, MSD, Dfao, analyze, build_dfao, digits,
                   from_digits, minimize, to_reading, word_to_str)


def _indicator(a: Dfao, target: int) -> Dfao:
    return a if set(a.outputs) <= {0, 1} and target == 1 else a.indicator(target)


def robust_msd(a: Dfao, target: int = 1) -> Dfao:
    """Zero-robust minimal MSD indicator of ``{n : a(n) = target}``."""
    return minimize(to_reading(_indicator(a, target), MSD))


def canonical_language(a: Dfao, target: int = 1) -> Dfao:
    """Automaton of the words (n)_k with a(n) = target (no leading zeros).

    A fresh start state sends 0 to a dead sink and other digits to the
    robust automaton.  Its output is the indicator of the empty word, i.e.
    of n = 0.
    """
    r = robust_msd(a, target)
    n = r.num_states
    dead, start = n, n + 1
    delta = list(r.delta) + [(dead,) * r.k,
                             (dead,) + tuple(r.delta[r.initial][d] for d in range(1, r.k))]
    outputs = r.outputs + (0, r.outputs[r.initial])
    return minimize(Dfao(r.k, tuple(delta), outputs, start, MSD, CANONICAL))


# --------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class Classification:
    arid: bool
    rank: int | None
    automaton: Dfao  # canonical-language automaton the verdict refers to
    state: int | None = None  # witness state when not arid
    v1: tuple = ()
    v2: tuple = ()
    empty: bool = False
    finite: bool = False

    def describe(self) -> str:
        if self.arid:
            return f"arid rank={self.rank}"
        k = self.automaton.k
        return (f"not-arid state={self.state} v1={word_to_str(self.v1, k)} "
                f"v2={word_to_str(self.v2, k)}")


def _path(a: Dfao, src: int, dst: int, allowed) -> tuple:
    """Shortest word from src to dst staying inside ``allowed``."""
    if src == dst:
        return ()
    parent = {src: None}
    queue = deque([src])
    while queue and dst not in parent:
        s = queue.popleft()
        for d, t in enumerate(a.delta[s]):
            if t in allowed and t not in parent:
                parent[t] = (s, d)
                queue.append(t)
    if dst not in parent:
        return None
    word = []
    s = dst
    while parent[s] is not None:
        s, d = parent[s]
        word.append(d)
    return tuple(reversed(word))


def classify(a: Dfao, target: int = 1) -> Classification:
    """Arid with its rank, or not arid with two noncommuting loops.

    On the trim canonical automaton, a nontrivial strongly connected
    component that is not a simple cycle has a state with two distinct
    in-component edges; closing each edge back to the state gives loops
    v1, v2 with different first letters, hence v1 v2 != v2 v1.  Otherwise
    the rank is the largest number of cyclic components on a path of the
    component DAG.
    """
    c = canonical_language(a, target)
    info = analyze(c, 1)
    trim = info.trim
    if not trim:
        return Classification(True, 0, c, empty=True, finite=True)
    comps = info.sccs
    cyclic = {}
    for i, comp in enumerate(comps):
        members = comp & trim
        if not members:
            continue
        inner = [(s, d, t) for s in members for d, t in enumerate(c.delta[s]) if t in members]
        if not inner:
            cyclic[i] = False
            continue
        cyclic[i] = True
        for s in sorted(members):
            out = [(d, t) for d, t in enumerate(c.delta[s]) if t in members]
            if len(out) >= 2:
                (d1, t1), (d2, t2) = out[0], out[1]
                v1 = (d1,) + _path(c, t1, s, members)
                v2 = (d2,) + _path(c, t2, s, members)
                return Classification(False, None, c, s, v1, v2)
    # longest path counting cyclic components, over trim components
    best: dict[int, int] = {}
    for i in reversed(range(len(comps))):
        if i not in cyclic:
            continue
        nxt = [best[j] for j in info.dag[i] if j in best]
        best[i] = int(cyclic[i]) + max(nxt, default=0)
    start = info.component[c.initial]
    rank = best.get(start, 0)
    return Classification(True, rank, c, finite=(rank == 0))


# --------------------------------------------------------------------------
# counting


class Counter:
    """Exact counts of ``{n : a(n) = 1}`` by digit dynamic programming."""

    def __init__(self, a: Dfao, target: int = 1):
        self.a = robust_msd(a, target)
        self._cnt = [[int(o == 1) for o in self.a.outputs]]

    def cnt(self, j: int) -> list:
        """cnt(j)[s] = number of length-j words accepted from state s."""
        delta = self.a.delta
        while len(self._cnt) <= j:
            prev = self._cnt[-1]
            self._cnt.append([sum(prev[t] for t in row) for row in delta])
        return self._cnt[j]

    def below(self, n: int) -> int:
        """|E ∩ [0, n)|."""
        if n <= 0:
            return 0
        a = self.a
        ds = digits(n, a.k)
        L = len(ds)
        total = 0
        s = a.initial
        for i, d in enumerate(ds):
            c = self.cnt(L - i - 1)
            row = a.delta[s]
            for e in range(d):
                total += c[row[e]]
            s = row[d]
        return total

    def range(self, M: int, N: int) -> int:
        """|E ∩ [M, M + N)|."""
        if M < 0 or N < 0:
            raise ValueError("M and N must be nonnegative")
        return self.below(M + N) - self.below(M)


def count_below(a: Dfao, n: int, target: int = 1) -> int:
    return Counter(a, target).below(n)


def count_range(a: Dfao, M: int, N: int, target: int = 1) -> int:
    return Counter(a, target).range(M, N)


# --------------------------------------------------------------------------
# exact maximal window counts


def _consecutive_pairs(a: Dfao) -> dict:
    """Realisable (state of q, state of q+1) pairs with access data.

    q = p d (k-1)^j and q + 1 = p (d+1) 0^j; returns pair -> (p, d, j).
    """
    k = a.k
    access = _access_words(a)
    pairs = {}
    for r, p in access.items():
        for d in range(k - 1):
            x, y = a.delta[r][d], a.delta[r][d + 1]
            seen = set()
            j = 0
            while (x, y) not in seen:
                seen.add((x, y))
                pairs.setdefault((x, y), (p, d, j))
                x, y = a.delta[x][k - 1], a.delta[y][0]
                j += 1
    return pairs


def _access_words(a: Dfao) -> dict:
    access = {a.initial: ()}
    queue = deque([a.initial])
    while queue:
        s = queue.popleft()
        for d, t in enumerate(a.delta[s]):
            if t not in access:
                access[t] = access[s] + (d,)
                queue.append(t)
    return access


@dataclass(frozen=True)
class WindowMax:
    N: int
    count: int
    M: int  # a window start achieving the maximum


def max_window(a: Dfao, N: int, target: int = 1, counter: Counter | None = None) -> WindowMax:
    """Exact ``max_M |E ∩ [M, M+N)|`` over all M >= 0.

    Split M = h k^L + m with L the digit length of N.  Then M + N has high
    part h or h + 1, and the count is a sum of per-digit contributions of
    (m, m + N) read in parallel with a guessed carry.  The high parts only
    enter through the pair of states they reach, which ranges over
    (s, s) and the realisable consecutive pairs.
    """
    if N <= 0:
        return WindowMax(N, 0, 0)
    counter = counter or Counter(a, target)
    a = counter.a
    k = a.k
    nd = digits(N, k)
    L = len(nd)
    delta = a.delta
    cnts = [counter.cnt(j) for j in range(L + 1)]

    # memo over (position, x, y, carry expected out of this position)
    memo: dict = {}

    def best(i, x, y, c):
        key = (i, x, y, c)
        if key in memo:
            return memo[key]
        if i == L:
            res = (0, ()) if c == 0 else (None, ())
            memo[key] = res
            return res
        rem = cnts[L - i - 1]
        rx, ry = delta[x], delta[y]
        out = (None, ())
        for m in range(k):
            lx = sum(rem[rx[e]] for e in range(m))
            for cin in (0, 1):
                t = m + nd[i] + cin
                if t // k != c:
                    continue
                b = t % k
                ly = sum(rem[ry[e]] for e in range(b))
                sub, digs = best(i + 1, rx[m], ry[b], cin)
                if sub is None:
                    continue
                v = ly - lx + sub
                if out[0] is None or v > out[0]:
                    out = (v, (m,) + digs)
        memo[key] = out
        return out

    access = _access_words(a)
    candidates = []
    for s, p in access.items():
        v, digs = best(0, s, s, 0)
        if v is not None:
            candidates.append((v, from_digits(p, k) * k ** L + from_digits(digs, k)))
    for (s, t), (p, d, j) in _consecutive_pairs(a).items():
        v, digs = best(0, s, t, 1)
        if v is not None:
            q = from_digits(p + (d,) + (k - 1,) * j, k)
            candidates.append((v + cnts[L][s], q * k ** L + from_digits(digs, k)))
    count, M = max(candidates, key=lambda x: (x[0], -x[1]))
    return WindowMax(N, count, M)


# --------------------------------------------------------------------------
# arid decompositions


@dataclass(frozen=True)
class BasicAridSet:
    """``{v0 w1^l1 v1 ... wr^lr vr : l_i >= 0}`` over base k."""

    k: int
    vs: tuple  # r + 1 words
    ws: tuple  # r nonempty words

    @property
    def rank(self) -> int:
        return len(self.ws)

    def words(self, max_len: int):
        """All words of the set with length <= max_len."""
        fixed = sum(len(v) for v in self.vs)

        def rec(i, budget, acc):
            if i == len(self.ws):
                yield acc + self.vs[-1]
                return
            w = self.ws[i]
            l = 0
            while l * len(w) <= budget:
                yield from rec(i + 1, budget - l * len(w), acc + self.vs[i] + w * l)
                l += 1

        if fixed > max_len:
            return
        yield from rec(0, max_len - fixed, ())

    def count_of_length(self, n: int) -> int:
        budget = n - sum(len(v) for v in self.vs)
        if budget < 0:
            return 0
        ways = [1] + [0] * budget
        for w in self.ws:
            t = len(w)
            for b in range(t, budget + 1):
                ways[b] += ways[b - t]
        return ways[budget]

    def __str__(self):
        parts = []
        k = self.k
        for i, v in enumerate(self.vs):
            parts.append(word_to_str(v, k) if v else "ε")
            if i < len(self.ws):
                parts.append(f"({word_to_str(self.ws[i], k)})*")
        return " ".join(parts)


@dataclass
class AridDecomposition:
    k: int
    sets: list

    @property
    def rank(self) -> int:
        return max((s.rank for s in self.sets), default=0)

    def words(self, max_len: int):
        for s in self.sets:
            yield from s.words(max_len)

    def __str__(self):
        return "\n".join(str(s) for s in self.sets) if self.sets else "∅"


class VerificationError(AssertionError):
    """Internal consistency check failed."""


class NotAridError(ValueError):
    pass


def _decompose_automaton(c: Dfao) -> list:
    info = analyze(c, 1)
    trim = info.trim
    if not trim:
        return []
    comps = info.sccs
    # the unique in-component successor of each state on a cycle
    cycle_next = {}
    for comp in comps:
        members = comp & trim
        for s in members:
            inner = [(d, t) for d, t in enumerate(c.delta[s]) if t in members]
            if len(inner) > 1:
                raise NotAridError("automaton is not arid")
            if inner:
                cycle_next[s] = inner[0]

    def cycle_word(s):
        word = []
        x = s
        while True:
            d, x = cycle_next[x]
            word.append(d)
            if x == s:
                return tuple(word)

    out = []

    def leave(x, comp_members, vs, ws, cur):
        # accept here or exit the component along an edge
        if c.outputs[x] == 1:
            out.append(BasicAridSet(c.k, tuple(vs) + (cur,), tuple(ws)))
        for d, t in enumerate(c.delta[x]):
            if t in trim and t not in comp_members:
                enter(t, vs, ws, cur + (d,))

    def enter(s, vs, ws, cur):
        comp = comps[info.component[s]] & trim
        if s not in cycle_next:
            leave(s, comp, vs, ws, cur)
            return
        w = cycle_word(s)
        vs2, ws2 = vs + [cur], ws + [w]
        # walk once around the cycle, leaving at each state
        x, seg = s, ()
        for _ in range(len(w)):
            leave(x, comp, vs2, ws2, seg)
            d, x = cycle_next[x]
            seg = seg + (d,)

    enter(c.initial, [], [], ())
    return out


def _merge(sets: list) -> list:
    """Absorb {.. x .. } into {.. x' (w)* ..} when x = x' w."""
    changed = True
    sets = list(sets)
    while changed:
        changed = False
        keys = {(s.vs, s.ws): s for s in sets}
        for s in sets:
            for i, w in enumerate(s.ws):
                v = s.vs[i]
                if len(v) < len(w) or v[len(v) - len(w):] != w:
                    continue
                shorter = v[:len(v) - len(w)]
                # the set with block i removed and v_i, v_{i+1} joined
                q_vs = s.vs[:i] + (shorter + s.vs[i + 1],) + s.vs[i + 2:]
                q_ws = s.ws[:i] + s.ws[i + 1:]
                q = keys.get((q_vs, q_ws))
                if q is None:
                    continue
                new = BasicAridSet(s.k, s.vs[:i] + (shorter,) + s.vs[i + 1:], s.ws)
                sets = [x for x in sets if x is not s and x is not q] + [new]
                changed = True
                break
            if changed:
                break
    return sorted(sets, key=lambda s: (s.rank, len(s.vs[0]), s.vs, s.ws))


def decompose_language(c: Dfao, verify_len: int = 24) -> AridDecomposition:
    sets = _merge(_decompose_automaton(c))
    d = AridDecomposition(c.k, sets)
    if verify_len:
        verify_decomposition(d, c, verify_len)
    return d


def arid_decompose(a: Dfao, target: int = 1, verify_len: int = 24) -> AridDecomposition:
    """Finite union of basic arid sets equal to the canonical language of E.

    Every accepting path of the trim canonical automaton passes through a
    chain of simple cycles; one basic set is emitted per choice of entry
    and exit states.  The result is checked on all words up to
    ``verify_len`` digits.
    """
    cl = classify(a, target)
    if not cl.arid:
        raise NotAridError(cl.describe())
    return decompose_language(cl.automaton, verify_len)


def _length_counts(c: Dfao, max_len: int) -> list:
    cnt = [int(o == 1) for o in c.outputs]
    table = [cnt]
    for _ in range(max_len):
        prev = table[-1]
        table.append([sum(prev[t] for t in row) for row in c.delta])
    return [table[n][c.initial] for n in range(max_len + 1)]


def verify_decomposition(d: AridDecomposition, c: Dfao, max_len: int = 24):
    """Generated words are accepted, and per-length counts agree."""
    expected = _length_counts(c, max_len)
    got = [0] * (max_len + 1)
    for s in d.sets:
        for n in range(max_len + 1):
            got[n] += s.count_of_length(n)
        for w in s.words(max_len):
            if c.run_word(w) != 1:
                raise VerificationError(f"{word_to_str(w, c.k)} generated by {s} but rejected")
    if got != expected:
        raise VerificationError(f"length counts differ: {got} vs {expected}")
    return True


def decomposition_dfao(d: AridDecomposition) -> Dfao:
    """Canonical-language automaton of a decomposition (subset construction)."""
    k = d.k
    # NFA states: (set index, position in the flattened pattern)
    trans: dict = {}
    finals = set()
    starts = set()
    for si, s in enumerate(d.sets):
        pos = 0
        node = (si, pos)
        starts.add(node)
        for i, v in enumerate(s.vs):
            for ch in v:
                nxt = (si, pos + 1)
                trans.setdefault(node, []).append((ch, nxt))
                node, pos = nxt, pos + 1
            if i < len(s.ws):
                w = s.ws[i]
                loop_start = node
                for j, ch in enumerate(w):
                    nxt = loop_start if j == len(w) - 1 else (si, pos + 1)
                    trans.setdefault(node, []).append((ch, nxt))
                    if j < len(w) - 1:
                        node, pos = nxt, pos + 1
                node = loop_start
        finals.add(node)

    def step(S, digit):
        return frozenset(t for x in S for ch, t in trans.get(x, ()) if ch == digit)

    return minimize(build_dfao(k, None, frozenset(starts), step,
                               lambda S: int(bool(S & finals)), MSD, CANONICAL))


# --------------------------------------------------------------------------
# restrictions


def _prefix_dfa(v: tuple, k: int, state_count_hint=None):
    """States 0..|v| (matched so far) and |v|+1 (failed); |v| is absorbing."""
    n = len(v)

    def step(i, d):
        if i == n or i == n + 1:
            return i
        return i + 1 if v[i] == d else n + 1

    return step


def _suffix_dfa(u: tuple, k: int):
    """KMP automaton: longest suffix of the input that is a prefix of u."""
    n = len(u)
    fail = [0] * (n + 1)
    for i in range(1, n):
        j = fail[i]
        while j and u[i] != u[j]:
            j = fail[j]
        fail[i + 1] = j + 1 if u[i] == u[j] else 0

    def step(i, d):
        if i == n:
            i = fail[n]
        while i and u[i] != d:
            i = fail[i]
        return i + 1 if (i < n and u[i] == d) else 0

    return step


def _restrict(c: Dfao, step, init, accept) -> Dfao:
    return minimize(build_dfao(
        c.k, None, (c.initial, init),
        lambda st, d: (c.delta[st[0]][d], step(st[1], d)),
        lambda st: int(c.outputs[st[0]] == 1 and accept(st[1])), MSD, CANONICAL))


def _language_of(src) -> Dfao:
    if isinstance(src, AridDecomposition):
        return decomposition_dfao(src)
    return canonical_language(src)


@dataclass
class Restriction:
    word: tuple
    automaton: Dfao  # canonical-language automaton of the restricted set
    decomposition: AridDecomposition

    @property
    def rank(self):
        return self.decomposition.rank


def prefix_restrict(src, v: Iterable[int], verify_len: int = 24) -> Restriction:
    """``E ∩ vΣ*``: members whose expansion starts with ``v``."""
    c = _language_of(src)
    v = tuple(v)
    r = _restrict(c, _prefix_dfa(v, c.k), 0, lambda i: i == len(v))
    return Restriction(v, r, decompose_language(r, verify_len))


def suffix_restrict(src, u: Iterable[int], verify_len: int = 24) -> Restriction:
    """``E ∩ Σ*u``: members whose expansion ends with ``u``."""
    c = _language_of(src)
    u = tuple(u)
    r = _restrict(c, _suffix_dfa(u, c.k), 0, lambda i: i == len(u))
    return Restriction(u, r, decompose_language(r, verify_len))


def _words_by_length(k: int, max_len: int, nonzero_first: bool):
    for n in range(1, max_len + 1):
        for w in itertools.product(range(k), repeat=n):
            if nonzero_first and w[0] == 0:
                continue
            yield w


def find_rank1_prefix(src, max_len: int = 12, verify_len: int = 24) -> Restriction | None:
    """Shortest prefix v with E ∩ vΣ* infinite of rank 1."""
    c = _language_of(src)
    for v in _words_by_length(c.k, max_len, True):
        r = prefix_restrict(src, v, verify_len)
        if r.rank == 1:
            return r
    return None


def find_rank1_suffix(src, max_len: int = 12, verify_len: int = 24) -> Restriction | None:
    """Shortest suffix u with E ∩ Σ*u infinite of rank 1."""
    c = _language_of(src)
    for u in _words_by_length(c.k, max_len, False):
        r = suffix_restrict(src, u, verify_len)
        if r.rank == 1:
            return r
    return None


# --------------------------------------------------------------------------
# pumping


@dataclass(frozen=True)
class PumpingWitness:
    w: tuple
    L: int
    u0: tuple
    v: tuple
    u1: tuple
    N: int
    k: int

    def pumped(self, t: int) -> int:
        return from_digits(self.u0 + self.v * t + self.u1, self.k)

    def describe(self) -> str:
        f = lambda x: word_to_str(x, self.k) if x else "ε"
        return f"w={f(self.w)} = u0 v u1 with u0={f(self.u0)} v={f(self.v)} u1={f(self.u1)} (N={self.N})"


def pumping_witness(a: Dfao, n: int, L: int, t_check: int = 8) -> PumpingWitness:
    """Factor (n)_k = u0 v u1 with a repeated state inside the window [L, L+N]."""
    m = minimize(to_reading(a, MSD))
    N = m.num_states
    w = digits(n, m.k)
    if L < 0 or L > len(w) - N:
        raise ValueError(f"need 0 <= L <= |(n)_k| - N = {len(w) - N}")
    states = [m.initial]
    for d in w:
        states.append(m.delta[states[-1]][d])
    seen = {}
    for i in range(L, L + N + 1):
        s = states[i]
        if s in seen:
            j0 = seen[s]
            wit = PumpingWitness(tuple(w), L, tuple(w[:j0]), tuple(w[j0:i]), tuple(w[i:]), N, m.k)
            target = m.run(n)
            for t in range(t_check + 1):
                if m.run(wit.pumped(t)) != target:
                    raise VerificationError("pumped value changed output")
            return wit
        seen[s] = i
    raise VerificationError("no repeated state in the window")  # pigeonhole makes this unreachable
