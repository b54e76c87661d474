import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clusterbound import numerics as nx
from clusterbound.numerics import Enclosure, Verdict, compare, decimal_str, enclose, separate

from oracles import mp

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=10**6)


def contains_mp(e: Enclosure, value) -> bool:
    return mp(e.lower) <= value <= mp(e.upper)


def test_rational_examples():
    assert Fraction(11, 13) * Fraction(5, 6) == Fraction(55, 78)
    assert Fraction(2, 3) ** 2 == Fraction(4, 9)
    assert compare(Fraction(45, 14), 3) is Verdict.GREATER
    assert compare(3, Fraction(6, 2)) is Verdict.EQUAL
    with pytest.raises(ZeroDivisionError):
        Fraction(1) / 0


@given(fractions, fractions, fractions)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


def test_sqrt_exact_squares():
    for digits in (5, 30, 200):
        assert enclose("sqrt", 4, digits) == Enclosure.point(2)
    assert enclose("sqrt", Fraction(9, 49)) == Enclosure.point(Fraction(3, 7))
    with pytest.raises(ValueError):
        enclose("sqrt", -1)


def test_sinh_and_exp_of_zero_are_exact():
    assert enclose("sinh", 0) == Enclosure.point(0)
    assert enclose("exp", 0) == Enclosure.point(1)


def test_pi_ten_digits():
    e = enclose("pi", digits=10)
    assert e.lower <= Fraction(3141592653, 10**9) + Fraction(6, 10**10)
    with mpmath.workdps(50):
        assert contains_mp(e, mpmath.pi)
    assert e.width < Fraction(1, 10**9)


@pytest.mark.parametrize("digits", [10, 64, 300, 1000])
def test_pi_two_formulas_agree(digits):
    machin = nx.enclose_pi(digits)
    euler = nx.enclose_pi_euler(digits)
    assert separate(machin, euler) is Verdict.INCONCLUSIVE  # they overlap
    with mpmath.workdps(digits + 20):
        assert contains_mp(machin, mpmath.pi)
        assert contains_mp(euler, mpmath.pi)


@pytest.mark.parametrize("f", ["exp", "sinh", "sqrt"])
@settings(max_examples=60, deadline=None)
@given(x=st.fractions(min_value=-20, max_value=20, max_denominator=10**4))
def test_kernels_contain_mpmath_value(f, x):
    if f == "sqrt":
        x = abs(x)
    e = enclose(f, x, 40)
    with mpmath.workdps(80):
        assert contains_mp(e, getattr(mpmath, f)(mp(x)))
    assert e.width <= abs(e.upper) * Fraction(1, 10**38) + Fraction(1, 10**38)


def test_containment_under_refinement():
    rng = random.Random(20261018)
    for _ in range(1000):
        x = Fraction(rng.randint(0, 20 * 10**6), 10**6)
        f = rng.choice(["exp", "sinh", "sqrt"])
        p = rng.choice([8, 20, 40])
        coarse = enclose(f, x, p)
        fine = enclose(f, x, p + 10)
        assert coarse.contains(fine.midpoint), (f, x, p)


@pytest.mark.parametrize("f", ["exp", "sinh", "sqrt"])
@pytest.mark.parametrize("x", [Fraction(1, 3), Fraction(7), Fraction(355, 113), Fraction(19, 1)])
@pytest.mark.parametrize("p", [10, 40, 100])
def test_width_shrinks_with_precision(f, x, p):
    assert enclose(f, x, 2 * p).width <= enclose(f, x, p).width


def test_enclosure_argument():
    x = Enclosure(Fraction(1), Fraction(2))
    e = enclose("exp", x, 30)
    with mpmath.workdps(60):
        assert contains_mp(e, mpmath.e)
        assert contains_mp(e, mpmath.e**2)


def test_separate_examples():
    assert separate(Enclosure(1, 2), Enclosure(3, 4)) is Verdict.LESS
    assert separate(Enclosure(1, 3), Enclosure(2, 4)) is Verdict.INCONCLUSIVE
    q = Enclosure.point(Fraction(45, 14)).rounded(10)
    assert separate(q, nx.pi(10)) is Verdict.GREATER


@given(fractions, fractions, fractions, fractions)
def test_separate_antisymmetric(a, b, c, d):
    x = Enclosure(min(a, b), max(a, b))
    y = Enclosure(min(c, d), max(c, d))
    assert separate(x, y) is separate(y, x).flip()


@given(fractions, fractions, fractions, fractions)
def test_interval_arithmetic_contains_results(a, b, c, d):
    x = Enclosure(min(a, b), max(a, b))
    y = Enclosure(min(c, d), max(c, d))
    for u in (x.lower, x.upper, x.midpoint):
        for v in (y.lower, y.upper, y.midpoint):
            assert (x + y).contains(u + v)
            assert (x - y).contains(u - v)
            assert (x * y).contains(u * v)
            if not y.contains(0):
                assert (x / y).contains(u / v)


def test_outward_rounding_keeps_containment():
    x = Fraction(1, 3)
    e = Enclosure.point(x).rounded(5)
    assert e.lower < x < e.upper
    assert e.width < Fraction(1, 10**5)


@pytest.mark.parametrize(
    "x, digits, mode, expected",
    [
        (Fraction(81081, 29200), 6, "nearest", "2.77675"),
        (Fraction(5), 6, "nearest", "5.00000"),
        (Fraction(-1, 3), 6, "down", "-0.333334"),
        (Fraction(-1, 3), 6, "up", "-0.333333"),
        (Fraction(999999999, 10**9), 3, "nearest", "1.00"),
        (Fraction(1, 1000), 3, "nearest", "0.00100"),
        (Fraction(123456), 3, "up", "124000"),
    ],
)
def test_decimal_str(x, digits, mode, expected):
    assert decimal_str(x, digits, mode) == expected


def test_refine_escalates_then_gives_up():
    calls = []

    def build(d):
        calls.append(d)
        return Verdict.INCONCLUSIVE

    assert nx.refine(build, 64, 512) == (Verdict.INCONCLUSIVE, 512)
    assert calls == [64, 128, 256, 512]
    assert nx.refine(lambda d: Verdict.GREATER if d >= 256 else Verdict.INCONCLUSIVE, 64, 4096) == (
        Verdict.GREATER,
        256,
    )


def test_precision_cap_env(monkeypatch):
    monkeypatch.setenv("CLUSTERBOUND_MAX_PRECISION", "128")
    assert nx._read_precision_cap() == 128
    monkeypatch.setenv("CLUSTERBOUND_MAX_PRECISION", "abc")
    with pytest.raises(ValueError):
        nx._read_precision_cap()
