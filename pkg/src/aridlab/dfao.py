"""Deterministic finite automata with output (DFAO) over base-k digits.

A :class:`Dfao` reads the base-k digits of an integer, either most
significant digit first (``"msd"``) or least significant digit first
(``"lsd"``), and prints the output attached to the final state.  The
canonical representation of 0 is the empty word.

``zero_policy`` records whether the automaton is known to ignore leading
zeros of the input (``"robust"``), or whether it is only guaranteed to be
correct on canonical digit strings (``"canonical"``).  Most algorithms in
this package normalise to a robust automaton first, because then equality
of sequences and equality of word functions coincide.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

MSD = "msd"
LSD = "lsd"
ROBUST = "robust"
CANONICAL = "canonical"

DIGIT_CHARS = "0123456789abcdefghijklmnopqrstuvwxyz"
DEFAULT_STATE_CAP = 10**6


class ResourceError(RuntimeError):
    """A construction exceeded its configured state cap."""


class DfaoFormatError(ValueError):
    """Malformed DFAO text."""


# --------------------------------------------------------------------------
# digit words


def digits(n: int, k: int) -> tuple[int, ...]:
    """Canonical base-k representation of ``n``, most significant digit first.

    ``digits(0, k)`` is the empty tuple.
    """
    if n < 0:
        raise ValueError("negative integers have no base-k representation")
    if k == 2:
        return tuple(map(int, bin(n)[2:])) if n else ()
    out = []
    while n:
        n, d = divmod(n, k)
        out.append(d)
    return tuple(reversed(out))


def from_digits(word: Iterable[int], k: int) -> int:
    """The integer ``[word]_k`` (most significant digit first)."""
    n = 0
    for d in word:
        n = n * k + d
    return n


def padded_digits(n: int, k: int, length: int) -> tuple[int, ...]:
    """Base-k digits of ``n`` left-padded with zeros to ``length``."""
    ds = digits(n, k)
    if len(ds) > length:
        raise ValueError(f"{n} needs more than {length} base-{k} digits")
    return (0,) * (length - len(ds)) + ds


def word_to_str(word: Sequence[int], k: int = 10) -> str:
    if k > len(DIGIT_CHARS):
        return ".".join(map(str, word))
    return "".join(DIGIT_CHARS[d] for d in word)


def str_to_word(text: str, k: int) -> tuple[int, ...]:
    """Parse a digit string such as ``"1001"``; dotted form for large k."""
    text = text.strip()
    if text in ("", "ε", "eps"):
        return ()
    if "." in text:
        word = tuple(int(t) for t in text.split("."))
    else:
        word = tuple(DIGIT_CHARS.index(c.lower()) for c in text)
    if any(d >= k for d in word):
        raise ValueError(f"digit out of range for base {k}: {text!r}")
    return word


# --------------------------------------------------------------------------
# the automaton type


@dataclass(frozen=True)
class Dfao:
    """A complete DFAO.  States are dense indices ``0..len(outputs)-1``."""

    k: int
    delta: tuple[tuple[int, ...], ...]
    outputs: tuple[int, ...]
    initial: int = 0
    reading: str = MSD
    zero_policy: str = CANONICAL
    labels: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("base k must be at least 2")
        if self.reading not in (MSD, LSD):
            raise ValueError(f"unknown reading direction {self.reading!r}")
        if self.zero_policy not in (ROBUST, CANONICAL):
            raise ValueError(f"unknown zero policy {self.zero_policy!r}")
        n = len(self.outputs)
        if n == 0 or len(self.delta) != n:
            raise ValueError("delta and outputs must describe the same states")
        if not 0 <= self.initial < n:
            raise ValueError("initial state out of range")
        for row in self.delta:
            if len(row) != self.k:
                raise ValueError("transition table is not total")
            for t in row:
                if not 0 <= t < n:
                    raise ValueError("transition to an unknown state")
        # normalise containers so equality is structural
        object.__setattr__(self, "delta", tuple(tuple(r) for r in self.delta))
        object.__setattr__(self, "outputs", tuple(self.outputs))

    @property
    def num_states(self) -> int:
        return len(self.outputs)

    @property
    def robust(self) -> bool:
        return self.zero_policy == ROBUST

    def walk(self, state: int, word: Iterable[int]) -> int:
        delta = self.delta
        for d in word:
            state = delta[state][d]
        return state

    def run_word(self, word: Iterable[int]) -> int:
        """Output after reading ``word`` (given in reading order)."""
        return self.outputs[self.walk(self.initial, word)]

    def run(self, n: int) -> int:
        """The n-th term of the sequence generated by this automaton."""
        ds = digits(n, self.k)
        if self.reading == LSD:
            ds = ds[::-1]
        return self.outputs[self.walk(self.initial, ds)]

    def __call__(self, n: int) -> int:
        return self.run(n)

    def with_initial(self, state: int) -> "Dfao":
        return Dfao(self.k, self.delta, self.outputs, state, self.reading,
                    self.zero_policy, self.labels)

    def with_outputs(self, outputs: Sequence[int]) -> "Dfao":
        return Dfao(self.k, self.delta, tuple(outputs), self.initial,
                    self.reading, self.zero_policy)

    def indicator(self, target: int = 1) -> "Dfao":
        """0/1 automaton of the set where the output equals ``target``."""
        return self.with_outputs([int(o == target) for o in self.outputs])

    def accessible(self) -> list[int]:
        """States reachable from the initial state, in BFS order."""
        seen = {self.initial}
        order = [self.initial]
        queue = deque(order)
        while queue:
            s = queue.popleft()
            for t in self.delta[s]:
                if t not in seen:
                    seen.add(t)
                    order.append(t)
                    queue.append(t)
        return order

    def output_values(self) -> list[int]:
        return sorted(set(self.outputs[s] for s in self.accessible()))

    def __repr__(self):
        return (f"Dfao(k={self.k}, states={self.num_states}, "
                f"reading={self.reading}, zero_policy={self.zero_policy})")


def build_dfao(k: int, states, initial, transition: Callable, output: Callable,
               reading: str = MSD, zero_policy: str = CANONICAL,
               cap: int = DEFAULT_STATE_CAP) -> Dfao:
    """Build a DFAO by exploring hashable states from ``initial``.

    ``transition(state, digit)`` returns the successor, ``output(state)`` the
    printed value.  ``states`` is ignored when ``None``; otherwise it seeds
    the exploration order.
    """
    index: dict = {}
    order: list = []

    def intern(s):
        i = index.get(s)
        if i is None:
            if len(order) >= cap:
                raise ResourceError(f"state cap {cap} exceeded")
            i = index[s] = len(order)
            order.append(s)
        return i

    intern(initial)
    for s in states or ():
        intern(s)
    delta = []
    i = 0
    while i < len(order):
        s = order[i]
        delta.append(tuple(intern(transition(s, d)) for d in range(k)))
        i += 1
    outputs = tuple(output(s) for s in order)
    return Dfao(k, tuple(delta), outputs, 0, reading, zero_policy)


# --------------------------------------------------------------------------
# minimisation


def minimize(a: Dfao) -> Dfao:
    """Moore partition refinement on the accessible part.

    The result is canonical: states are numbered in BFS discovery order from
    the initial state (digits explored in increasing order), so two
    automata computing the same word function minimise to equal objects.
    """
    reach = a.accessible()
    pos = {s: i for i, s in enumerate(reach)}
    delta = [tuple(pos[t] for t in a.delta[s]) for s in reach]
    outs = [a.outputs[s] for s in reach]

    values = {v: i for i, v in enumerate(sorted(set(outs)))}
    block = [values[o] for o in outs]
    count = len(values)
    while True:
        sigs: dict = {}
        new = []
        for s in range(len(reach)):
            sig = (block[s],) + tuple(block[t] for t in delta[s])
            new.append(sigs.setdefault(sig, len(sigs)))
        if len(sigs) == count:
            block = new
            break
        block, count = new, len(sigs)

    # BFS renumbering of blocks from the initial state's block
    start = block[0]
    rep = {}
    for s in range(len(reach)):
        rep.setdefault(block[s], s)
    number = {start: 0}
    order = [start]
    queue = deque(order)
    while queue:
        b = queue.popleft()
        for t in delta[rep[b]]:
            bt = block[t]
            if bt not in number:
                number[bt] = len(order)
                order.append(bt)
                queue.append(bt)
    new_delta = tuple(tuple(number[block[t]] for t in delta[rep[b]]) for b in order)
    new_out = tuple(outs[rep[b]] for b in order)
    return Dfao(a.k, new_delta, new_out, 0, a.reading, a.zero_policy, a.labels)


# --------------------------------------------------------------------------
# zero normalisation and reading direction


def normalize(a: Dfao) -> Dfao:
    """Return an equivalent zero-robust automaton (minimised).

    MSD: a fresh start state loops on 0 and otherwise behaves like the old
    start state.  LSD: each state remembers the state reached after the
    last non-zero digit, whose output is printed.
    """
    if a.robust:
        return a
    k = a.k
    if a.reading == MSD:
        n = a.num_states
        row = tuple([n] + [a.delta[a.initial][d] for d in range(1, k)])
        b = Dfao(k, a.delta + (row,), a.outputs + (a.outputs[a.initial],), n,
                 MSD, ROBUST)
        return minimize(b)

    def step(st, d):
        cur, committed = st
        nxt = a.delta[cur][d]
        return (nxt, nxt if d else committed)

    b = build_dfao(k, None, (a.initial, a.initial), step,
                   lambda st: a.outputs[st[1]], LSD, ROBUST)
    return minimize(b)


def reverse_word_function(a: Dfao, cap: int = DEFAULT_STATE_CAP) -> Dfao:
    """Automaton computing ``w -> a(reverse(w))``, via transition maps S -> S.

    The new state after reading ``u`` is the map ``s -> delta(s, reverse(u))``;
    its output is the image of the old initial state.  The reading flag is
    flipped, the zero policy kept, and the result minimised.
    """
    ident = tuple(range(a.num_states))
    delta = a.delta

    def step(f, d):
        return tuple(f[delta[s][d]] for s in ident)

    b = build_dfao(a.k, None, ident, step, lambda f: a.outputs[f[a.initial]],
                   LSD if a.reading == MSD else MSD, a.zero_policy, cap)
    return minimize(b)


def reverse_reading(a: Dfao, cap: int = DEFAULT_STATE_CAP) -> Dfao:
    """Equivalent automaton (same integer sequence) reading the other way."""
    return reverse_word_function(normalize(a), cap)


def to_reading(a: Dfao, reading: str, cap: int = DEFAULT_STATE_CAP) -> Dfao:
    """Robust, minimised automaton for the same sequence in ``reading``."""
    a = normalize(a)
    if a.reading != reading:
        a = reverse_word_function(a, cap)
    return a


def canonical(a: Dfao, reading: str = MSD) -> Dfao:
    """Canonical form of the integer sequence: robust, minimal, ``reading``."""
    return minimize(to_reading(a, reading))


# --------------------------------------------------------------------------
# products and equivalence


def product(a: Dfao, b: Dfao, combine: Callable[[int, int], int]) -> Dfao:
    """Minimised automaton of ``n -> combine(a(n), b(n))``."""
    if a.k != b.k:
        raise ValueError(f"base mismatch: {a.k} vs {b.k}")
    if a.reading != b.reading:
        raise ValueError("reading direction mismatch")
    policy = ROBUST if a.robust and b.robust else CANONICAL
    p = build_dfao(a.k, None, (a.initial, b.initial),
                   lambda st, d: (a.delta[st[0]][d], b.delta[st[1]][d]),
                   lambda st: combine(a.outputs[st[0]], b.outputs[st[1]]),
                   a.reading, policy)
    return minimize(p)


def distinguishing_word(a: Dfao, b: Dfao, qa: int | None = None,
                        qb: int | None = None):
    """Shortest word on which the word functions differ, or ``None``.

    This is an emptiness test on the product automaton with output
    ``a != b``.  Start states default to the initial states.
    """
    if a.k != b.k:
        raise ValueError("base mismatch")
    start = (a.initial if qa is None else qa, b.initial if qb is None else qb)
    parent = {start: None}
    queue = deque([start])
    while queue:
        st = queue.popleft()
        if a.outputs[st[0]] != b.outputs[st[1]]:
            word = []
            while parent[st] is not None:
                st, d = parent[st]
                word.append(d)
            return tuple(reversed(word))
        for d in range(a.k):
            nxt = (a.delta[st[0]][d], b.delta[st[1]][d])
            if nxt not in parent:
                parent[nxt] = (st, d)
                queue.append(nxt)
    return None


def equivalent(a: Dfao, b: Dfao) -> bool:
    """Do ``a`` and ``b`` generate the same integer sequence?"""
    if a.k != b.k:
        raise ValueError("base mismatch")
    a = normalize(a)
    b = to_reading(b, a.reading)
    return distinguishing_word(a, b) is None


def counterexample(a: Dfao, b: Dfao) -> int | None:
    """Some ``n`` with ``a(n) != b(n)``, or ``None`` when equivalent."""
    a = normalize(a)
    b = to_reading(b, a.reading)
    w = distinguishing_word(a, b)
    if w is None:
        return None
    if a.reading == LSD:
        w = w[::-1]
    return from_digits(w, a.k)


# --------------------------------------------------------------------------
# base change


def base_power(a: Dfao, e: int) -> Dfao:
    """Re-encode a k-automaton as a k^e-automaton for the same sequence."""
    a = normalize(a)
    K = a.k ** e
    rows = []
    for s in range(a.num_states):
        row = []
        for D in range(K):
            ds = padded_digits(D, a.k, e)
            if a.reading == LSD:
                ds = ds[::-1]
            row.append(a.walk(s, ds))
        rows.append(tuple(row))
    return minimize(Dfao(K, tuple(rows), a.outputs, a.initial, a.reading, ROBUST))


def base_root(a: Dfao, k: int, reading: str | None = None) -> Dfao:
    """Re-encode a k^e-automaton as a k-automaton for the same sequence."""
    e = 1
    while k ** e < a.k:
        e += 1
    if k ** e != a.k:
        raise ValueError(f"{a.k} is not a power of {k}")
    reading = reading or a.reading
    lsd = to_reading(a, LSD)

    def value(pending):
        return sum(d * k ** i for i, d in enumerate(pending))

    def step(st, d):
        q, pending = st
        pending = pending + (d,)
        if len(pending) == e:
            return (lsd.delta[q][value(pending)], ())
        return (q, pending)

    def out(st):
        q, pending = st
        return lsd.outputs[lsd.delta[q][value(pending)] if pending else q]

    b = minimize(build_dfao(k, None, (lsd.initial, ()), step, out, LSD, ROBUST))
    return to_reading(b, reading)


# --------------------------------------------------------------------------
# structural analysis


@dataclass(frozen=True)
class AutomatonAnalysis:
    accessible: frozenset
    coaccessible: frozenset
    sccs: tuple  # tuple of frozensets in topological order (sources first)
    component: dict  # state -> index into sccs
    dag: dict  # component index -> frozenset of successor component indices
    trim: frozenset

    def cyclic(self, comp: int, a: Dfao, states: frozenset | None = None) -> bool:
        """Does component ``comp`` carry a cycle (restricted to ``states``)?"""
        members = self.sccs[comp]
        if len(members) > 1:
            return True
        (s,) = members
        return any(t == s for t in a.delta[s])

    def trim_edges(self, a: Dfao, s: int) -> list[tuple[int, int]]:
        return [(d, t) for d, t in enumerate(a.delta[s]) if t in self.trim]


def strongly_connected_components(n: int, succ: Callable[[int], Iterable[int]],
                                  nodes: Iterable[int] | None = None):
    """Tarjan's algorithm (iterative); components in topological order."""
    nodes = list(range(n)) if nodes is None else list(nodes)
    allowed = set(nodes)
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    comps: list[frozenset] = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter([t for t in succ(root) if t in allowed]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter([t for t in succ(w) if t in allowed])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                comps.append(frozenset(comp))
    comps.reverse()
    return comps


def analyze(a: Dfao, target: int = 1) -> AutomatonAnalysis:
    """Accessible/coaccessible sets, SCC condensation and trim part."""
    acc = frozenset(a.accessible())
    preds: dict[int, set[int]] = {s: set() for s in range(a.num_states)}
    for s in range(a.num_states):
        for t in a.delta[s]:
            preds[t].add(s)
    co = {s for s in range(a.num_states) if a.outputs[s] == target}
    queue = deque(co)
    while queue:
        t = queue.popleft()
        for s in preds[t]:
            if s not in co:
                co.add(s)
                queue.append(s)
    co = frozenset(co)
    comps = strongly_connected_components(a.num_states, lambda s: a.delta[s],
                                          sorted(acc))
    component = {s: i for i, c in enumerate(comps) for s in c}
    dag = {}
    for i, c in enumerate(comps):
        dag[i] = frozenset(component[t] for s in c for t in a.delta[s]
                           if component[t] != i)
    return AutomatonAnalysis(acc, co, tuple(comps), component, dag, acc & co)


# --------------------------------------------------------------------------
# text format


_HEADER = re.compile(r"^dfao\s+(.*)$")


def to_text(a: Dfao, state_comments: dict | None = None,
            header_comments: Sequence[str] = ()) -> str:
    """Serialise in the line-based DFAO text format."""
    lines = [f"# {c}" for c in header_comments]
    head = (f"dfao k={a.k} states={a.num_states} initial={a.initial} "
            f"reading={a.reading}")
    if a.robust:
        head += " zero=robust"
    lines.append(head)
    for s in range(a.num_states):
        if state_comments and s in state_comments:
            lines.append(f"# {state_comments[s]}")
        trans = " ".join(f"{d}:{t}" for d, t in enumerate(a.delta[s]))
        lines.append(f"state {s} output={a.outputs[s]} {trans}")
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Dfao:
    """Parse the DFAO text format.

    Rejects missing transitions, out-of-range digits and duplicate state
    lines.  The optional header key ``zero=robust`` marks leading-zero
    insensitivity; without it the automaton is treated as canonical-only.
    """
    header = None
    rows: dict[int, tuple[int, dict[int, int]]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            m = _HEADER.match(line)
            if not m:
                raise DfaoFormatError(f"line {lineno}: expected 'dfao' header")
            header = {}
            for tok in m.group(1).split():
                if "=" not in tok:
                    raise DfaoFormatError(f"line {lineno}: bad header field {tok!r}")
                key, val = tok.split("=", 1)
                header[key] = val
            for key in ("k", "states", "initial", "reading"):
                if key not in header:
                    raise DfaoFormatError(f"line {lineno}: header lacks {key}=")
            continue
        toks = line.split()
        if toks[0] != "state" or len(toks) < 3 or not toks[2].startswith("output="):
            raise DfaoFormatError(f"line {lineno}: expected 'state <idx> output=<int> ...'")
        try:
            idx = int(toks[1])
            out = int(toks[2][len("output="):])
            trans = {}
            for tok in toks[3:]:
                d, t = tok.split(":")
                d, t = int(d), int(t)
                if d in trans:
                    raise DfaoFormatError(f"line {lineno}: digit {d} listed twice")
                trans[d] = t
        except ValueError as exc:
            if isinstance(exc, DfaoFormatError):
                raise
            raise DfaoFormatError(f"line {lineno}: {exc}") from None
        if idx in rows:
            raise DfaoFormatError(f"line {lineno}: duplicate state {idx}")
        rows[idx] = (out, trans)
    if header is None:
        raise DfaoFormatError("empty DFAO text")
    k, n = int(header["k"]), int(header["states"])
    if sorted(rows) != list(range(n)):
        raise DfaoFormatError(f"expected state lines 0..{n - 1}")
    delta, outputs = [], []
    for s in range(n):
        out, trans = rows[s]
        for d in trans:
            if not 0 <= d < k:
                raise DfaoFormatError(f"state {s}: digit {d} out of range for base {k}")
        if sorted(trans) != list(range(k)):
            raise DfaoFormatError(f"state {s}: missing transitions")
        for t in trans.values():
            if not 0 <= t < n:
                raise DfaoFormatError(f"state {s}: target {t} out of range")
        delta.append(tuple(trans[d] for d in range(k)))
        outputs.append(out)
    return Dfao(k, tuple(delta), tuple(outputs), int(header["initial"]),
                header["reading"], ROBUST if header.get("zero") == "robust" else CANONICAL)
