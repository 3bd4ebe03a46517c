from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aridlab import corpus
from aridlab.growth import prefix_restrict, suffix_restrict


def s2(n):
    return bin(n).count("1")


def members(a, lo, hi):
    return [n for n in range(lo, hi) if a.run(n)]


def zero_blocks(n):
    s = bin(n)[2:]
    return [len(b) for b in s.split("1")]


# automata


def test_thue_morse_values():
    a = corpus.thue_morse()
    assert [a.run(n) for n in range(8)] == [0, 1, 1, 0, 1, 0, 0, 1]
    t3 = corpus.thue_morse(3)
    assert all(t3.run(n) == sum(int(c) for c in _base3(n)) % 2 for n in range(500))


def _base3(n):
    out = ""
    while n:
        n, r = divmod(n, 3)
        out = str(r) + out
    return out


def test_baum_sweet_factor_values():
    a = corpus.baum_sweet_factor()
    assert [a.run(n) for n in range(8)] == [1, 1, 1, 1, 1, 0, 1, 1]
    # inner zero blocks (between ones) must have even length
    for n in range(1, 4096):
        inner = zero_blocks(n)[1:-1]
        assert a.run(n) == int(all(b % 2 == 0 for b in inner))


def test_baum_sweet_classic_values():
    a = corpus.baum_sweet_classic()
    assert [a.run(n) for n in range(8)] == [1, 1, 0, 1, 1, 0, 0, 1]
    for n in range(1, 4096):
        assert a.run(n) == int(all(b % 2 == 0 for b in zero_blocks(n)[1:]))


def test_bfree_and_contains_are_complements():
    for w in ("00", "101", "0110"):
        a, b = corpus.bfree([w]), corpus.contains_factor(w)
        for n in range(1, 2048):
            assert a.run(n) == int(w not in bin(n)[2:])
            assert b.run(n) == 1 - a.run(n)


def test_bfree_several_words():
    a = corpus.bfree(["00", "111"])
    assert members(a, 1, 64) == [n for n in range(1, 64)
                                 if "00" not in bin(n) and "111" not in bin(n)]


def test_powers_and_rank2():
    assert members(corpus.powers(3), 0, 1000) == [1, 3, 9, 27, 81, 243, 729]
    assert members(corpus.popcount_two(), 0, 200) == [n for n in range(200) if s2(n) == 2]
    assert members(corpus.three_times_powers_of_four(), 0, 4000) == [3, 12, 48, 192, 768, 3072]
    assert members(corpus.even_powers_of_two(), 0, 4100) == [1, 4, 16, 64, 256, 1024, 4096]


def test_alternating_and_periodic():
    assert members(corpus.alternating(), 0, 50) == [0, 1, 2, 5, 10, 21, 42]
    p = corpus.periodic([1, 0, 0])
    assert all(p.run(n) == int(n % 3 == 0) for n in range(300))


def test_build_named_errors():
    with pytest.raises(ValueError):
        corpus.build_named("nope")
    with pytest.raises(ValueError):
        corpus.build_named("bfree")


def test_catalogue_names_build():
    for e in corpus.CATALOGUE:
        kw = {}
        if e.name == "bfree":
            kw["ban"] = ["00"]
        elif e.name == "contains":
            kw["word"] = "11"
        elif e.name == "periodic":
            kw["pattern"] = [0, 1]
        assert corpus.build_named(e.name, **kw) is not None


# Fibonacci word and Zeckendorf


def test_zeckendorf_examples():
    assert corpus.zeckendorf(0) == ()
    assert corpus.zeckendorf(6) == (1, 0, 0, 1)
    assert corpus.zeckendorf(11) == (1, 0, 1, 0, 0)


def test_zeckendorf_round_trip_below_a_million():
    for n in range(0, 10 ** 6, 37):
        z = corpus.zeckendorf(n)
        assert corpus.from_zeckendorf(z) == n
        assert all(not (z[i] and z[i + 1]) for i in range(len(z) - 1))
        assert not z or z[0] == 1


@settings(max_examples=200)
@given(st.integers(0, 10 ** 12))
def test_zeckendorf_round_trip_property(n):
    assert corpus.from_zeckendorf(corpus.zeckendorf(n)) == n


def test_from_zeckendorf_rejects_adjacent_ones():
    with pytest.raises(ValueError):
        corpus.from_zeckendorf((1, 1, 0))


def test_fibonacci_three_ways_agree():
    n = 5000
    ref = corpus.fib_word_prefix(n)
    assert ref[:10] == [0, 1, 0, 0, 1, 0, 1, 0, 0, 1]
    assert corpus.fib_word_sturmian().values(n) == ref
    assert corpus.fib_word_morphic().values(n) == ref
    assert corpus.fib_word_zeckendorf().values(n) == ref


# linear recurrences


def test_linrec_fibonacci_values():
    spec = corpus.LinRecSpec((1, 1), (1, 2))
    assert spec.terms(10) == [1, 2, 3, 5, 8, 13, 21, 34, 55, 89]
    vals = corpus.linrec_values(spec, 40)
    assert 13 in vals and 14 not in vals and len(vals) == 40


def test_linrec_mixed_recurrence():
    # a_n = 2 a_(n-1) + a_(n-2) (Pell numbers); c_1 multiplies the latest term
    spec = corpus.LinRecSpec((2, 1), (0, 1))
    assert spec.terms(8) == [0, 1, 2, 5, 12, 29, 70, 169]


def test_linrec_rejects_bad_spec():
    with pytest.raises(ValueError):
        corpus.LinRecSpec((1, 1), (1,))


# standard decomposition


def test_standard_powers_of_two():
    d = corpus.standard_decompose(corpus.powers(2))
    (p,) = d.exponential
    assert (p.a, p.b, p.t) == (1, 0, 1)


def test_standard_three_powers_of_four():
    (p,) = corpus.standard_decompose(corpus.three_times_powers_of_four()).exponential
    assert (p.a, p.b, p.k ** p.t) == (3, 0, 4)


def test_standard_prefix_restricted_rank2():
    # [1 0 1 0^l]_2 = 5 * 2^l
    r = prefix_restrict(corpus.popcount_two(), (1, 0, 1)).automaton
    (p,) = corpus.standard_decompose(r).exponential
    assert (p.a, p.b) == (5, 0)


def test_standard_one_zeros_one():
    # [1 0^l 1]_2 = 2 * 2^l + 1
    r = suffix_restrict(corpus.popcount_two(), (1,)).automaton
    (p,) = corpus.standard_decompose(r).exponential
    assert (p.a, p.b, p.t) == (2, 1, 1)


def test_standard_periodic_block():
    # [(10)^l]_2 = 2 (4^l - 1) / 3 and [(10)^l 1]_2 = (4^(l+1) - 1) / 3
    d = corpus.standard_decompose(corpus.alternating())
    forms = sorted((p.a, p.b) for p in d.exponential)
    assert forms == [(Fraction(2, 3), Fraction(-2, 3)), (Fraction(4, 3), Fraction(-1, 3))]
    assert d.values_below(50) == [0, 1, 2, 5, 10, 21, 42]


def test_standard_rejects_rank2_and_non_arid():
    with pytest.raises(ValueError):
        corpus.standard_decompose(corpus.popcount_two())
    with pytest.raises(ValueError):
        corpus.standard_decompose(corpus.thue_morse())
