import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aridlab import corpus
from aridlab.dfao import (CANONICAL, LSD, MSD, ROBUST, Dfao, DfaoFormatError, ResourceError,
                          analyze, base_power, base_root, build_dfao, counterexample, digits,
                          equivalent, from_digits, from_text, minimize, normalize, product,
                          reverse_reading, to_reading, to_text)


def s2(n):
    return bin(n).count("1")


def no00(n):
    return n == 0 or "00" not in bin(n)[2:]


def no11(n):
    return "11" not in bin(n)[2:]


def tm():
    return corpus.thue_morse()


# digits


def test_digits_of_zero_is_empty_word():
    assert digits(0, 2) == ()
    assert from_digits((), 3) == 0


@given(st.integers(0, 10 ** 30), st.integers(2, 16))
def test_digits_round_trip(n, k):
    w = digits(n, k)
    assert from_digits(w, k) == n
    assert not w or w[0] != 0
    assert all(0 <= d < k for d in w)


# run


def test_run_thue_morse_examples():
    a = tm()
    assert a.run(0) == 0
    assert [a.run(n) for n in (3, 5, 7)] == [0, 0, 1]
    assert all(a.run(n) == s2(n) % 2 for n in range(4096))


def test_run_f00_examples():
    a = corpus.bfree(["00"])
    assert a.run(4) == 0 and a.run(5) == 1
    assert all(a.run(n) == int(no00(n)) for n in range(4096))


# minimize


def _duplicated_tm():
    # 4 states: two copies of each Thue-Morse state
    delta = ((1, 2), (0, 3), (3, 0), (2, 1))
    return Dfao(2, delta, (0, 0, 1, 1), 0, MSD, ROBUST)


def test_minimize_duplicated_thue_morse_to_two_states():
    a = _duplicated_tm()
    assert all(a.run(n) == s2(n) % 2 for n in range(512))
    m = minimize(a)
    assert m.num_states == 2
    assert m.outputs[m.initial] == 0


def test_minimize_constant_is_one_state():
    a = Dfao(3, ((1, 2, 0), (2, 0, 1), (0, 1, 2)), (7, 7, 7))
    assert minimize(a).num_states == 1


def test_minimize_f00_raw_machine_has_three_states():
    # ok-after-1, ok-after-0, dead (canonical words, before zero normalisation)
    raw = corpus.factor_free_dfao([(0, 0)])
    assert raw.num_states == 3
    assert not raw.robust
    # the zero-robust form needs a separate leading-zero state
    assert corpus.bfree(["00"]).num_states == 4


def test_minimize_is_idempotent_and_canonical():
    for a in (tm(), corpus.bfree(["00"]), corpus.baum_sweet_factor(), _duplicated_tm()):
        m = minimize(a)
        assert minimize(m) == m


def test_minimize_preserves_run_on_random_inputs():
    rng = random.Random(1)
    for a in (_duplicated_tm(), corpus.bfree(["010"]), corpus.popcount_two()):
        m = minimize(a)
        for _ in range(2000):
            n = rng.randrange(2 ** 32)
            assert m.run(n) == a.run(n)


# product


def test_product_examples():
    a = tm()
    eq = product(a, a, lambda x, y: int(x == y))
    assert minimize(eq).num_states == 1 and eq.run(12345) == 1
    par = corpus.parity()
    x = product(a, par, lambda x, y: x ^ y)
    assert all(x.run(n) == (s2(n) % 2) ^ (n % 2) for n in range(64))
    alt = product(corpus.bfree(["00"]), corpus.bfree(["11"]), lambda x, y: x & y)
    assert [n for n in range(64) if alt.run(n)] == [0, 1, 2, 5, 10, 21, 42]


def test_product_rejects_mismatches():
    with pytest.raises(ValueError):
        product(tm(), corpus.thue_morse(3), lambda x, y: x)
    with pytest.raises(ValueError):
        product(tm(), to_reading(tm(), LSD), lambda x, y: x)


def test_product_pointwise_random():
    rng = random.Random(2)
    a, b = corpus.bfree(["101"]), corpus.thue_morse()
    p = product(a, b, lambda x, y: 2 * x + y)
    for _ in range(2000):
        n = rng.randrange(2 ** 40)
        assert p.run(n) == 2 * a.run(n) + b.run(n)


# reading direction


def test_reverse_reading_agrees_on_corpus():
    names = ["thue_morse", "baum_sweet_factor", "baum_sweet_classic", "powers", "rank2",
             "alternating", "three_powers_four"]
    autos = [corpus.build_named(x) for x in names] + [corpus.bfree(["00"]), corpus.bfree(["11"])]
    for a in autos:
        r = reverse_reading(a)
        assert r.reading == LSD
        assert all(r.run(n) == a.run(n) for n in range(2 ** 14))
        back = reverse_reading(r)
        assert back.reading == MSD and equivalent(back, a)


def test_reverse_reading_constant_one_state():
    a = Dfao(2, ((0, 0),), (1,), 0, MSD, ROBUST)
    assert reverse_reading(a).num_states == 1


def test_reverse_reading_state_cap():
    a = corpus.bfree(["0110", "1001"])
    with pytest.raises(ResourceError):
        reverse_reading(a, cap=3)


def test_thue_morse_lsd_matches_direct_count():
    a = to_reading(tm(), LSD)
    assert all(a.run(n) == s2(n) % 2 for n in range(2 ** 14))


# zero robustness


@settings(max_examples=200)
@given(st.integers(0, 2 ** 40), st.integers(0, 8))
def test_zero_robust_padding(n, pad):
    for a in (tm(), corpus.bfree(["00"]), corpus.powers(2), corpus.baum_sweet_factor()):
        assert a.robust
        w = digits(n, 2)
        assert a.run_word((0,) * pad + w) == a.run(n)
        lsd = to_reading(a, LSD)
        assert lsd.run_word(tuple(reversed(w)) + (0,) * pad) == a.run(n)


def test_normalize_makes_raw_machine_robust():
    raw = corpus.factor_free_dfao([(0, 0)])
    # the raw machine sees a leading zero and then 0 again as a 00 factor
    assert raw.run_word((0, 0, 1)) == 0
    r = normalize(raw)
    assert r.robust and r.run_word((0, 0, 1)) == 1
    assert all(r.run(n) == raw.run(n) for n in range(4096))


# analysis


def test_analyze_f00_raw():
    raw = corpus.factor_free_dfao([(0, 0)])
    info = analyze(raw, 1)
    assert len(info.coaccessible) == 2
    assert len(info.trim) == 2
    dead = next(s for s in range(3) if s not in info.coaccessible)
    assert raw.delta[dead] == (dead, dead)


def test_analyze_constant_zero_has_no_coaccessible():
    a = Dfao(2, ((0, 0),), (0,), 0, MSD, ROBUST)
    assert analyze(a, 1).coaccessible == frozenset()


def test_analyze_powers_of_two():
    a = corpus.powers(2)
    info = analyze(a, 1)
    trim = sorted(info.trim)
    assert len(trim) == 2
    # both trim states carry a zero self-loop
    loops = [s for s in trim if a.delta[s][0] == s]
    assert len(loops) == 2  # leading-zero start state and the seen-one state
    comps = [c for c in info.sccs if c & info.trim]
    assert len(comps) == 2


def test_scc_dag_is_acyclic_and_topological():
    for a in (corpus.bfree(["00"]), corpus.popcount_two(), corpus.baum_sweet_factor()):
        info = analyze(a, 1)
        for i, succ in info.dag.items():
            assert all(j > i for j in succ)


# base change


def test_base_power_and_root():
    a = tm()
    b = base_power(a, 2)
    assert b.k == 4
    assert all(b.run(n) == a.run(n) for n in range(4096))
    p4 = corpus.powers(4)
    p4_in_2 = base_root(p4, 2)
    direct = corpus.even_powers_of_two()
    assert equivalent(p4_in_2, direct)


# equivalence


def test_counterexample():
    a, b = corpus.bfree(["00"]), corpus.bfree(["000"])
    n = counterexample(a, b)
    assert n is not None and a.run(n) != b.run(n)
    assert n == 4  # smallest: 100 has 00 but not 000
    assert counterexample(a, a) is None


# text format


def test_text_round_trip():
    for a in (tm(), corpus.bfree(["00"]), corpus.factor_free_dfao([(1, 1)]),
              to_reading(corpus.powers(3), LSD)):
        b = from_text(to_text(a))
        assert b == a and b.zero_policy == a.zero_policy


def test_text_is_reproducible():
    assert to_text(minimize(_duplicated_tm())) == to_text(minimize(_duplicated_tm()))


@pytest.mark.parametrize("text", [
    "dfao k=2 states=1 initial=0 reading=msd\nstate 0 output=0 0:0\n",
    "dfao k=2 states=1 initial=0 reading=msd\nstate 0 output=0 0:0 2:0\n",
    "dfao k=2 states=1 initial=0 reading=msd\nstate 0 output=0 0:0 1:0\nstate 0 output=0 0:0 1:0\n",
    "state 0 output=0 0:0 1:0\n",
    "dfao k=2 states=2 initial=0 reading=msd\nstate 0 output=0 0:0 1:0\n",
    "dfao k=2 states=1 initial=0 reading=msd\nstate 0 output=0 0:0 1:5\n",
])
def test_text_rejects_malformed(text):
    with pytest.raises(DfaoFormatError):
        from_text(text)


def test_text_comments_ignored():
    text = "# thue-morse\ndfao k=2 states=2 initial=0 reading=msd\n# s0\nstate 0 output=0 0:0 1:1\nstate 1 output=1 0:1 1:0  # s1\n"
    a = from_text(text)
    assert a.zero_policy == CANONICAL
    assert [a.run(n) for n in range(8)] == [0, 1, 1, 0, 1, 0, 0, 1]


def test_build_dfao_cap():
    with pytest.raises(ResourceError):
        build_dfao(2, None, 0, lambda s, d: s + 1, lambda s: 0, cap=100)
