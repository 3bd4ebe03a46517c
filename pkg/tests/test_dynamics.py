import random
from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aridlab.dynamics import (SkewSystem, binomial_lift, eval_poly, verify_bridge,
                              verify_identity)
from aridlab.genpoly import sqrt


def test_lift_examples():
    assert binomial_lift([0, 0, 1], 2).a == (0, Fraction(1, 2), 1)
    assert binomial_lift([0, 1], 1).a == (0, 1)
    assert binomial_lift([0, 0, 0, 1], 3).a == (0, Fraction(1, 3), 2, 2)


@settings(max_examples=100)
@given(st.lists(st.integers(-20, 20), min_size=2, max_size=6), st.integers(1, 12))
def test_lift_reconstructs_polynomial(coeffs, m):
    if all(c == 0 for c in coeffs[1:]):
        coeffs[1] = 1
    lift = binomial_lift(coeffs, m)
    for x in range(lift.d + 4):
        assert sum(a * comb(x, i) for i, a in enumerate(lift.a)) == eval_poly(coeffs, x) / m


def test_lift_rejects_constants():
    with pytest.raises(ValueError):
        binomial_lift([3], 2)
    with pytest.raises(ValueError):
        binomial_lift([0, 1], 0)


def test_orbit_examples():
    s = SkewSystem.from_lift(binomial_lift([0, 0, 1], 2))
    assert s.orbit(3)[-1] == Fraction(1, 2)
    assert s.orbit(0) == (0, 0)
    c = SkewSystem.from_lift(binomial_lift([0, 0, 0, 1], 3))
    assert c.orbit(5)[-1] == Fraction(2, 3)


def test_rotation():
    s = SkewSystem.from_lift(binomial_lift([0, 1], 3))
    assert [s.orbit(n)[0] for n in range(6)] == [Fraction(n % 3, 3) for n in range(6)]


def independent_orbit(a, n):
    """Iterate the map on Fractions, reducing mod 1 after every step."""
    d = len(a) - 1
    x = [Fraction(0)] * (d - 1) + [Fraction(a[0]) % 1]
    for _ in range(n):
        y = [(x[0] + a[d]) % 1]
        for j in range(1, d):
            y.append((x[j] + x[j - 1] + a[d - j]) % 1)
        x = y
    return x


def test_integer_orbit_matches_fraction_iteration():
    a = binomial_lift([1, -2, 0, 3], 7).a
    s = SkewSystem(a)
    for n in (0, 1, 2, 17, 123):
        assert list(s.orbit(n)) == independent_orbit(a, n)


@pytest.mark.parametrize("coeffs,m,N", [([0, 0, 1], 2, 10 ** 4), ([0, 1, 0, 1], 5, 10 ** 3)])
def test_identity_examples(coeffs, m, N):
    rep = verify_identity(SkewSystem.from_lift(binomial_lift(coeffs, m)), N)
    assert rep.ok and rep.checked == N + 1


def test_identity_detects_a_wrong_closed_form():
    s = SkewSystem.from_lift(binomial_lift([0, 0, 1], 3))
    s.closed_form_int = lambda n: [0] * s.d  # sabotage
    rep = verify_identity(s, 10)
    assert not rep.ok and rep.first_failure[0] >= 1


def test_last_coordinate_is_p_over_m():
    coeffs, m = [2, 0, -1, 1], 6
    s = SkewSystem.from_lift(binomial_lift(coeffs, m))
    for n, x in enumerate(s.iterate_int(300)):
        assert Fraction(x[-1], s.D) == (eval_poly(coeffs, n) / m) % 1


def test_bridge_rational_and_integer():
    assert verify_bridge([0, 0, 1], 4, 2000).ok
    assert verify_bridge([Fraction(1, 3), Fraction(1, 2), 0, 1], 5, 2000).ok


def test_period_divides_bound():
    for coeffs, m in (([0, 0, 1], 2), ([0, 0, 0, 1], 3), ([1, 1, 1], 5), ([0, Fraction(1, 2), 1], 3)):
        s = SkewSystem.from_lift(binomial_lift(coeffs, m))
        bound = s.D * factorial(s.d)
        P = s.state_period()
        assert bound % P == 0
        q = s.last_coordinate_period()
        assert P % q == 0
        seq = [x[-1] for x in s.iterate_int(3 * P)]
        assert all(seq[i] == seq[i + q] for i in range(2 * P))


def test_period_of_n_squared_over_two():
    s = SkewSystem.from_lift(binomial_lift([0, 0, 1], 2))
    # n^2/2 mod 1 is 0, 1/2, 0, 1/2, ...
    assert s.last_coordinate_period() == 2


def test_surd_coefficients_interval_mode():
    # p(x) = sqrt(2) x^2, m = 3: last coordinate is sqrt(2) n^2 / 3 mod 1
    lift = binomial_lift([0, 0, sqrt(2)], 3)
    assert not lift.exact
    s = SkewSystem.from_lift(lift)
    from math import isqrt
    for n in range(60):
        # floor(sqrt 2 n^2) mod 3 decides the third of the circle
        l = isqrt(2 * n ** 4) % 3
        assert s.last_coordinate_in(n, l, 3)
        assert not s.last_coordinate_in(n, (l + 1) % 3, 3)


def test_random_integer_polynomials_identity_and_bridge():
    rng = random.Random(7)
    for _ in range(3):
        d = rng.randint(1, 4)
        coeffs = [rng.randint(-9, 9) for _ in range(d)] + [rng.choice([1, 2, 3, -1])]
        m = rng.randint(2, 10)
        s = SkewSystem.from_lift(binomial_lift(coeffs, m))
        assert verify_identity(s, 1500).ok
        assert verify_bridge(coeffs, m, 1500).ok
