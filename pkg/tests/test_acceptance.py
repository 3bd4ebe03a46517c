"""Acceptance checks, one group per criterion.

Each sub-check is recorded through the ``criterion`` fixture, and the
terminal summary prints one PASS/FAIL line per criterion.
"""

import random
import time
from fractions import Fraction
from math import isqrt, log2, sqrt

import pytest

from aridlab import corpus
from aridlab.combinat import NotIps, ips_witness, translate_ip_failure, verify_fs
from aridlab.dfao import equivalent, minimize
from aridlab.dynamics import SkewSystem, binomial_lift, verify_bridge, verify_identity
from aridlab.genpoly import GenPolySequence, discrepancy, heisenberg_set
from aridlab.growth import classify, count_range, max_window
from aridlab.seqkit import (Exhaustion, WeakPeriodicityWitness, dfao_from_kernel,
                            kernel_empirical, kernel_exact, mismatch_set,
                            weak_periodicity_search)
from aridlab.setalg import congruence_filter, scale_preimage, uniform_density

LADDER = list(range(10, 25))  # N = 2^10 .. 2^24
LOG2_PHI = log2((1 + sqrt(5)) / 2)


class Timer:
    def __enter__(self):
        self.t = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t


def arid_ratios(a, rank):
    """Max-window counts against C (log2 N)^rank with C fitted at N = 2^10."""
    counts = {L: max_window(a, 2 ** L).count for L in LADDER}
    C = Fraction(counts[10], 10 ** rank)
    bad = [L for L in LADDER if counts[L] > C * L ** rank]
    return counts, C, bad


# 1


def test_c01_thue_morse_kernel(criterion):
    rec = criterion(1)
    with Timer() as t:
        table = kernel_exact(corpus.thue_morse())
        b = minimize(dfao_from_kernel(table))
        # run b on every n < 2^20 by extending the state of n // 2 by one digit
        m = minimize(corpus.thue_morse())
        state = [m.initial] * (1 << 20)
        for n in range(1, 1 << 20):
            state[n] = m.delta[state[n >> 1]][n & 1]
        agree = all(m.outputs[state[n]] == bin(n).count("1") % 2 for n in range(1 << 20))
        agree_b = all(b.run(n) == bin(n).count("1") % 2 for n in range(0, 1 << 20, 97))
    ok = len(table) == 2 and b.num_states == 2 and agree and agree_b
    rec.check("kernel", ok, f"elements={len(table)} states={b.num_states} agree<2^20={agree}")
    rec.check("runtime", t.elapsed < 5, f"{t.elapsed:.2f}s")
    assert ok


# 2


DICHOTOMY = {
    "powers(2)": lambda: corpus.powers(2),
    "powers(3)": lambda: corpus.powers(3),
    "bfree(00)": lambda: corpus.bfree(["00"]),
    "bfree(11)": lambda: corpus.bfree(["11"]),
    "baum_sweet_factor": corpus.baum_sweet_factor,
    "rank2": corpus.popcount_two,
    "alternating": corpus.alternating,
}


def test_c02_dichotomy(criterion):
    rec = criterion(2)
    with Timer() as t:
        for name, build in DICHOTOMY.items():
            a = build()
            arid = classify(a).arid
            try:
                w = ips_witness(a)
            except NotIps:
                w = None
            exactly_one = arid != (w is not None)
            detail = f"arid={arid} witness={w is not None}"
            if w is not None:
                rep = verify_fs(a, w.generators(10), w.shifts(10))
                exactly_one = exactly_one and rep.ok
                detail += f" sums={rep.checked} ok={rep.ok}"
            rec.check(name, exactly_one, detail)
            assert exactly_one
    rec.check("runtime", t.elapsed < 10, f"{t.elapsed:.2f}s")


# 3


@pytest.mark.parametrize("name,build,rank", [
    ("powers(2)", lambda: corpus.powers(2), 1),
    ("powers(3)", lambda: corpus.powers(3), 1),
    ("alternating", corpus.alternating, 1),
])
def test_c03_arid_growth_rank1(criterion, name, build, rank):
    counts, C, bad = arid_ratios(build(), rank)
    ok = not bad
    criterion(3).check(f"arid {name}", ok, f"C={float(C):.3f} counts@2^24={counts[24]} bad={bad}")
    assert ok


@pytest.mark.xfail(strict=True, reason="C(L,2)/L^2 rises toward 1/2, above C fitted at 2^10 (see notes)")
def test_c03_arid_growth_rank2(criterion):
    counts, C, bad = arid_ratios(corpus.popcount_two(), 2)
    ok = not bad
    criterion(3).check("arid rank2", ok,
                       f"C={float(C):.3f} count@2^24={counts[24]} bound={float(C * 24 ** 2):.1f} bad={bad}")
    assert ok


def test_c03_non_arid_growth(criterion):
    rec = criterion(3)
    with Timer() as t:
        for name, build in (("bfree(00)", lambda: corpus.bfree(["00"])),
                            ("bfree(11)", lambda: corpus.bfree(["11"])),
                            ("baum_sweet_factor", corpus.baum_sweet_factor)):
            a = build()
            # largest alpha with |E ∩ [1, N]| >= N^alpha on the whole ladder
            alpha = min(log2(count_range(a, 1, 2 ** L)) / L for L in LADDER)
            ok = alpha > 0.5 * LOG2_PHI
            rec.check(f"non-arid {name}", ok, f"alpha={alpha:.3f} > {0.5 * LOG2_PHI:.3f}")
            assert ok
    rec.check("runtime", t.elapsed < 30, f"{t.elapsed:.2f}s")


# 4


def test_c04_f11_ip(criterion):
    rec = criterion(4)
    with Timer() as t:
        gens = [4 ** i for i in range(1, 11)]
        rep = verify_fs(corpus.bfree(["11"]), gens)
        # independent check on the binary strings
        from itertools import combinations
        direct = all("11" not in bin(sum(c)) for r in range(1, 11) for c in combinations(gens, r))
    ok = rep.ok and rep.checked == 1023 and direct
    rec.check("finite sums", ok, f"{rep.checked} sums, all members={rep.ok}")
    rec.check("runtime", t.elapsed < 1, f"{t.elapsed:.2f}s")
    assert ok


# 5


def test_c05_f00_translates(criterion):
    rec = criterion(5)
    a = corpus.bfree(["00"])
    gens = [2 ** (2 * i) for i in range(1, 7)]
    with Timer() as t:
        failures = {m: translate_ip_failure(a, gens, m) for m in range(17)}
    ok = True
    for m, res in failures.items():
        good = res is not None and "00" in bin(res[1] + m)[2:]
        ok = ok and good
    rec.check("failing sums", ok, f"m=0..16 each has a failure, e.g. m=0: alpha={failures[0][0]}")
    rec.check("runtime", t.elapsed < 5, f"{t.elapsed:.2f}s")
    assert ok


# 6


def test_c06_skew_product(criterion):
    rec = criterion(6)
    rng = random.Random(2024)
    polys = {"n^2": [0, 0, 1], "n^3": [0, 0, 0, 1], "n^3+n": [0, 1, 0, 1]}
    for i in range(5):
        d = rng.randint(1, 4)
        coeffs = [rng.randint(-20, 20) for _ in range(d)] + [rng.choice([-3, -2, -1, 1, 2, 3])]
        polys[f"random{i}"] = coeffs
    N = 10 ** 4
    with Timer() as t:
        ok = True
        for name, coeffs in polys.items():
            for m in range(1, 11):
                s = SkewSystem.from_lift(binomial_lift(coeffs, m))
                ident = verify_identity(s, N)
                bridge = verify_bridge(coeffs, m, N)
                if not (ident.ok and bridge.ok):
                    ok = False
                    rec.check(f"{name} m={m}", False, f"identity={ident.ok} bridge={bridge.ok}")
    rec.check("identity and bridge", ok, f"{len(polys)} polynomials, m=1..10, n<={N}")
    rec.check("runtime", t.elapsed < 10, f"{t.elapsed:.2f}s")
    assert ok


# 7


def _sqrt2_profile():
    return kernel_empirical(GenPolySequence("floor(sqrt(2)*n)", mod=2), 12, 64).profile


def test_c07_sqrt2_kernel_exceeds_100(criterion):
    profile = _sqrt2_profile()
    ok = profile[12] > 100
    criterion(7).check("count at l=12 > 100", ok, f"profile={profile}")
    assert ok


@pytest.mark.xfail(strict=True, reason="per-level counts are capped by 2*prefix = 128 and plateau (see notes)")
def test_c07_sqrt2_kernel_strictly_monotone(criterion):
    profile = _sqrt2_profile()
    part = profile[6:13]
    ok = all(x < y for x, y in zip(part, part[1:]))
    criterion(7).check("strictly monotone l=6..12", ok, f"l=6..12: {part}")
    assert ok


def test_c07_three_halves_saturates(criterion):
    rec = criterion(7)
    with Timer() as t:
        profile = kernel_empirical(GenPolySequence("floor(3/2*n)", mod=2), 12, 64).profile
    ok = all(x <= 4 for x in profile[3:]) and len(set(profile[3:])) == 1
    rec.check("3/2 saturates <= 4 by l=3", ok, f"profile={profile}")
    rec.check("runtime", t.elapsed < 10, f"{t.elapsed:.2f}s")
    assert ok


# 8


def test_c08_weak_periodicity(criterion):
    rec = criterion(8)
    with Timer() as t:
        w = weak_periodicity_search(corpus.thue_morse())
        ex = weak_periodicity_search(GenPolySequence("floor(sqrt(2)*n)", mod=2), q_max=16, N=4096)
    ok1 = isinstance(w, WeakPeriodicityWitness) and (w.q, w.r, w.r2, w.verification) == (4, 0, 3, "exact")
    ok2 = isinstance(ex, Exhaustion)
    rec.check("thue-morse witness", ok1, f"{w}")
    rec.check("sqrt2 exhaustion", ok2, f"candidates={getattr(ex, 'candidates', None)}")
    rec.check("runtime", t.elapsed < 5, f"{t.elapsed:.2f}s")
    assert ok1 and ok2


# 9


def test_c09_fibonacci_triple(criterion):
    rec = criterion(9)
    N = 10 ** 5
    with Timer() as t:
        a = corpus.fib_word_sturmian(p0=128).values(N)
        b = corpus.fib_word_morphic().values(N)
        c = corpus.fib_word_zeckendorf().values(N)
    mism = sum(1 for x, y, z in zip(a, b, c) if not x == y == z)
    ok = mism == 0 and len(a) == len(b) == len(c) == N
    rec.check("agreement n<1e5", ok, f"mismatches={mism}")
    rec.check("runtime", t.elapsed < 10, f"{t.elapsed:.2f}s")
    assert ok


# 10


def test_c10_mismatch_pipeline(criterion):
    rec = criterion(10)
    with Timer() as t:
        f = corpus.powers(2)
        Z = mismatch_set(f, 1, [0])
        same = equivalent(Z, f)
        cl = classify(Z)
        worst = []
        Ns = sorted({1, 2, 3, 5, 7, 100, 1000} | {2 ** j + d for j in range(1, 25) for d in (-1, 0, 1)})
        Ns = [N for N in Ns if 1 <= N <= 2 ** 24]
        for N in Ns:
            c = max_window(Z, N).count
            if c > log2(N) + 1:
                worst.append((N, c))
    ok = same and cl.arid and cl.rank == 1 and not worst
    rec.check("recover Z", same, "Z equals {2^l}")
    rec.check("classify", cl.arid and cl.rank == 1, cl.describe())
    rec.check("window bound", not worst, f"{len(Ns)} window lengths, all M; violations={worst}")
    rec.check("runtime", t.elapsed < 5, f"{t.elapsed:.2f}s")
    assert ok


# 11


def test_c11_chain(criterion):
    rec = criterion(11)
    with Timer() as t:
        C = scale_preimage(corpus.three_times_powers_of_four(), 3)
        D = congruence_filter(C, 3, 1)
        ok = equivalent(D, corpus.even_powers_of_two())
    rec.check("3*4^l -> 4^l", ok, "scale by 3, filter n = 1 mod 3, equivalent to {2^(2l)}")
    rec.check("runtime", t.elapsed < 1, f"{t.elapsed:.2f}s")
    assert ok


# 12


def test_c12_densities(criterion):
    rec = criterion(12)
    with Timer() as t:
        rep = uniform_density(corpus.thue_morse(), max_len=20)
        exact = all(rep.table[L][1] == Fraction(1, 2) for L in range(1, 21))
        tm_ratio = max_window(corpus.thue_morse(), 2 ** 16).count / 2 ** 16
        f00 = corpus.bfree(["00"])
        prof = [max_window(f00, 2 ** L).count / 2 ** L for L in range(10, 21)]
    ok1 = exact and rep.rho[1] == Fraction(1, 2)
    ok2 = abs(tm_ratio - 0.5) < 0.01
    ok3 = all(x > y for x, y in zip(prof, prof[1:])) and prof[-1] < 0.2
    rec.check("thue-morse word fractions", ok1, "1/2 at every L=1..20")
    rec.check("thue-morse window 2^16", ok2, f"ratio={tm_ratio:.6f}")
    rec.check("f00 profile", ok3, f"decreasing, {prof[-1]:.4f} at 2^20")
    rec.check("runtime", t.elapsed < 10, f"{t.elapsed:.2f}s")
    assert ok1 and ok2 and ok3


# 13


def _oracle_star_discrepancy(xs):
    xs = sorted(xs)
    n = len(xs)
    return max(max(Fraction(i + 1, n) - x, x - Fraction(i, n)) for i, x in enumerate(xs))


def test_c13_discrepancy(criterion):
    rec = criterion(13)
    N = 10 ** 4
    with Timer() as t:
        d1 = discrepancy("sqrt(2)*n", N, p_max=512)
        d2 = discrepancy("sqrt(2)*n*floor(sqrt(3)*n)", N, p_max=512)
    # integer oracle: frac(sqrt(2) x) to 64 bits via isqrt
    S = 1 << 64
    o1 = _oracle_star_discrepancy([Fraction(isqrt(2 * (n * S) ** 2) % S, S) for n in range(N)])
    o2 = _oracle_star_discrepancy([Fraction(isqrt(2 * (n * isqrt(3 * n * n) * S) ** 2) % S, S)
                                   for n in range(N)])
    ok1 = float(d1) < 0.02 and abs(d1.value - o1) < Fraction(1, 2 ** 40)
    ok2 = float(d2) < 0.05 and abs(d2.value - o2) < Fraction(1, 2 ** 40)
    ok3 = max(d1.max_precision, d2.max_precision) <= 512
    rec.check("sqrt2 n", ok1, f"D*={float(d1):.6f}")
    rec.check("heisenberg expression", ok2, f"D*={float(d2):.6f}")
    rec.check("precision <= 512", ok3, f"max bits={max(d1.max_precision, d2.max_precision)}")
    rec.check("runtime", t.elapsed < 30, f"{t.elapsed:.2f}s")
    assert ok1 and ok2 and ok3


# 14


def _heisenberg_oracle(n):
    """dist(sqrt(2) M) < 1/n with M = n floor(sqrt(3) n), in integers."""
    M = n * isqrt(3 * n * n)
    S = 2 * M * M
    r = isqrt(S)
    if r * r == S:
        return True
    # frac < 1/n  or  frac > 1 - 1/n
    return S * n * n < (r * n + 1) ** 2 or S * n * n > ((r + 1) * n - 1) ** 2


def test_c14_heisenberg(criterion):
    rec = criterion(14)
    N = 10 ** 5
    with Timer() as t:
        seq = heisenberg_set(1, p_max=512)
        vals = seq.values(N + 1)
    got = sum(vals[1:])
    want = sum(1 for n in range(1, N + 1) if _heisenberg_oracle(n))
    same = all(vals[n] == int(_heisenberg_oracle(n)) for n in range(1, N + 1))
    ok = got == want and same
    rec.check("count on [1, 1e5]", ok, f"|E|={got} oracle={want}, resolved at p_max=512")
    rec.check("runtime", t.elapsed < 60, f"{t.elapsed:.2f}s")
    assert ok
