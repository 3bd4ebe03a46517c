"""Algebra of automatic sets and their densities."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .dfao import (LSD, MSD, ROBUST, Dfao, analyze, build_dfao,
                   minimize, normalize, product, to_reading)


def residue_dfao(m: int, k: int, reading: str = MSD) -> Dfao:
    """Automaton printing n mod m."""
    if reading == MSD:
        a = build_dfao(k, None, 0, lambda v, d: (k * v + d) % m, lambda v: v, MSD, ROBUST)
    else:
        a = build_dfao(k, None, (0, 1 % m),
                       lambda st, d: ((st[0] + d * st[1]) % m, (st[1] * k) % m),
                       lambda st: st[0], LSD, ROBUST)
    return minimize(a)


def congruence_filter(a: Dfao, m: int, r: int, target: int = 1) -> Dfao:
    """Indicator of ``{n : a(n) = target and n ≡ r (mod m)}``."""
    if m < 1 or not 0 <= r < m:
        raise ValueError("need m >= 1 and 0 <= r < m")
    a = normalize(a)
    return product(a, residue_dfao(m, a.k, a.reading),
                   lambda x, y: int(x == target and y == r))


def affine_preimage(a: Dfao, alpha: int, beta: int) -> Dfao:
    """Automaton of ``n -> a(alpha n + beta)``, in the reading of ``a``.

    Reads n least significant digit first while adding with carry: the
    state is (carry, state of a), the carry starts at beta, and the output
    flushes the remaining carry through the automaton.
    """
    if alpha < 1 or beta < 0:
        raise ValueError("need alpha >= 1 and beta >= 0")
    b = to_reading(a, LSD)
    k = b.k
    if alpha == 1 and beta == 0:
        return minimize(to_reading(b, a.reading))

    def step(st, d):
        c, q = st
        t = alpha * d + c
        return (t // k, b.delta[q][t % k])

    def out(st):
        c, q = st
        while c:
            c, e = divmod(c, k)
            q = b.delta[q][e]
        return b.outputs[q]

    p = minimize(build_dfao(k, None, (beta, b.initial), step, out, LSD, ROBUST))
    return to_reading(p, a.reading)


def scale_preimage(a: Dfao, c: int) -> Dfao:
    """Indicator of ``{n : c n ∈ E}`` (the beta = 0 affine preimage)."""
    return affine_preimage(a, c, 0)


# --------------------------------------------------------------------------
# uniform density


@dataclass
class ComponentDensity:
    states: frozenset
    period: int
    rho: dict  # output value -> Fraction
    converges: bool


@dataclass
class DensityReport:
    method: str  # "exact-uniform" or "window-estimate"
    exists: bool
    rho: dict = field(default_factory=dict)  # output -> Fraction
    components: list = field(default_factory=list)
    table: dict = field(default_factory=dict)  # L -> {y: Fraction}
    profile: list = field(default_factory=list)  # (N, max count, ratio, exact?)
    seed: int | None = None

    def csv(self) -> str:
        lines = [f"# method={self.method} seed={self.seed}", "N,max_window_count,ratio"]
        for N, c, ratio, *_ in self.profile:
            lines.append(f"{N},{c},{float(ratio):.9f}")
        return "\n".join(lines) + "\n"


def _stationary(states: list, delta, k: int) -> dict:
    """Stationary distribution of the uniform random walk on a closed class."""
    idx = {s: i for i, s in enumerate(states)}
    n = len(states)
    # pi P = pi with sum 1; solve (P^T - I) pi = 0 replacing one row
    A = [[Fraction(0)] * n for _ in range(n)]
    for s in states:
        j = idx[s]
        for d in range(k):
            A[idx[delta[s][d]]][j] += Fraction(1, k)
    for i in range(n):
        A[i][i] -= 1
    A[-1] = [Fraction(1)] * n
    rhs = [Fraction(0)] * (n - 1) + [Fraction(1)]
    # Gaussian elimination over the rationals
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        inv = 1 / A[col][col]
        A[col] = [x * inv for x in A[col]]
        rhs[col] *= inv
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
                rhs[r] -= f * rhs[col]
    return {s: rhs[idx[s]] for s in states}


def _period(states: frozenset, delta, start) -> tuple[int, dict]:
    level = {start: 0}
    queue = [start]
    g = 0
    while queue:
        nxt = []
        for s in queue:
            for t in delta[s]:
                if t not in states:
                    continue
                if t not in level:
                    level[t] = level[s] + 1
                    nxt.append(t)
                else:
                    g = gcd(g, level[s] + 1 - level[t])
        queue = nxt
    g = g or 1
    return g, {s: level[s] % g for s in states}


def word_fractions(a: Dfao, max_len: int = 64) -> dict:
    """{L: {y: |{u ∈ Σ^L : output(u) = y}| / k^L}} from the initial state."""
    k = a.k
    values = sorted(set(a.outputs))
    counts = [{y: int(o == y) for y in values} for o in a.outputs]
    table = {0: {y: Fraction(counts[a.initial][y]) for y in values}}
    for L in range(1, max_len + 1):
        counts = [{y: sum(counts[t][y] for t in row) for y in values} for row in a.delta]
        table[L] = {y: Fraction(counts[a.initial][y], k ** L) for y in values}
    return table


def uniform_density(a: Dfao, max_len: int = 64) -> DensityReport:
    """Exact uniform density via terminal components of a robust MSD automaton.

    Each terminal strongly connected component gives the output frequencies
    of its stationary distribution; within a periodic component the
    frequencies must agree on every cyclic class for the word fractions to
    converge.  The density exists when all terminal components agree.
    """
    a = minimize(to_reading(a, MSD))
    info = analyze(a, 1)
    values = sorted(set(a.outputs))
    comps = []
    for i, comp in enumerate(info.sccs):
        if info.dag[i]:
            continue  # not terminal
        states = sorted(comp)
        pi = _stationary(states, a.delta, a.k)
        period, cls = _period(comp, a.delta, states[0])
        rho = {y: sum((pi[s] for s in states if a.outputs[s] == y), Fraction(0)) for y in values}
        converges = True
        if period > 1:
            for c in range(period):
                share = {y: period * sum((pi[s] for s in states if cls[s] == c and a.outputs[s] == y),
                                         Fraction(0)) for y in values}
                if share != rho:
                    converges = False
        comps.append(ComponentDensity(frozenset(comp), period, rho, converges))
    exists = all(c.converges for c in comps) and all(c.rho == comps[0].rho for c in comps)
    table = word_fractions(a, max_len)
    return DensityReport("exact-uniform", exists, comps[0].rho if exists else {}, comps, table)


# --------------------------------------------------------------------------
# windowed (Banach) density


def banach_estimate(f, ladder, samples: int = 64, seed: int = 0, target: int = 1,
                    exact: bool = True) -> DensityReport:
    """Profile of max_M |E ∩ [M, M+N)| / N over a ladder of window lengths.

    Automaton-backed inputs get the exact maximum over all M; other
    sequences are sampled at M = 0 and ``samples`` random starts drawn from
    [0, max(ladder)) with the given seed.
    """
    from .growth import Counter, max_window
    from .seqkit import as_sequence

    automaton = f if isinstance(f, Dfao) else as_sequence(f).dfao
    profile = []
    if automaton is not None and exact:
        counter = Counter(automaton, target)
        for N in ladder:
            w = max_window(automaton, N, target, counter)
            profile.append((N, w.count, Fraction(w.count, N), "exact", w.M))
        return DensityReport("window-exact", True, profile=profile, seed=None)
    seq = as_sequence(f)
    rng = random.Random(seed)
    top = max(ladder)
    starts = [0] + [rng.randrange(top) for _ in range(samples)]
    vals = seq.values(max(starts) + top)
    prefix = [0]
    for v in vals:
        prefix.append(prefix[-1] + int(v == target))
    for N in ladder:
        best, arg = max((prefix[M + N] - prefix[M], -M) for M in starts)
        profile.append((N, best, Fraction(best, N), "sampled", -arg))
    return DensityReport("window-estimate", True, profile=profile, seed=seed)


# --------------------------------------------------------------------------
# reduction chain demo


@dataclass
class ChainStep:
    label: str
    automaton: Dfao


def automverysparse_chain(E: Dfao, c: int, m: int, r: int) -> list:
    """Scale preimage by c followed by a congruence filter, as labelled steps."""
    steps = [ChainStep("E", minimize(normalize(E)))]
    C = scale_preimage(E, c)
    steps.append(ChainStep(f"C = {{n : {c}n ∈ E}}", C))
    D = congruence_filter(C, m, r)
    steps.append(ChainStep(f"D = {{n ∈ C : n ≡ {r} mod {m}}}", D))
    return steps
