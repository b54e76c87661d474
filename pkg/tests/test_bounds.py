import math
from fractions import Fraction

import mpmath
import pytest

from clusterbound.bounds import (
    compare_bounds,
    evain_applies,
    evain_threshold,
    improvement_scan,
    improvement_window,
    nagata_floor,
    sqrt_bound,
    theorem_bound,
    xu_bounds,
)
from clusterbound.numerics import Verdict
from clusterbound.specialization import simulate_theorem

from oracles import mp, product_bound_integers


def test_theorem_bound_small():
    assert theorem_bound(2, 5) == 5
    assert theorem_bound(3, 1) == Fraction(4, 3)
    assert theorem_bound(1, 7) == 0


def test_theorem_bound_r10():
    factors = [Fraction(11, 13), Fraction(5, 6), Fraction(21, 25), Fraction(29, 34),
               Fraction(13, 15), Fraction(51, 58), Fraction(65, 73), Fraction(9, 10)]
    expected = 9 * math.prod(factors)
    assert theorem_bound(10, 1) == expected == Fraction(81081, 29200)
    assert abs(float(expected) - 2.776747) < 1e-6


def test_theorem_bound_r13():
    assert round(float(theorem_bound(13, 1)), 4) == 3.2206


@pytest.mark.parametrize("r", list(range(1, 60)) + [100, 200])
def test_theorem_bound_against_integer_route(r):
    assert theorem_bound(r, 1) == product_bound_integers(r)


def test_theorem_bound_linear_in_m():
    for r in range(1, 201):
        one = theorem_bound(r, 1)
        for m in (0, 2, 7):
            assert theorem_bound(r, m) == m * one


def test_theorem_bound_is_reduced():
    b = theorem_bound(57, 3)
    assert math.gcd(b.numerator, b.denominator) == 1


def test_theorem_bound_matches_simulation_certificate():
    for r in range(3, 25):
        for m in (1, 3):
            assert simulate_theorem(r, m).certificate.bound == theorem_bound(r, m)


@pytest.mark.parametrize("r, m, expected", [(9, 4, 12), (13, 1, 3), (15, 2, 6), (10**12 + 1, 1, 10**6)])
def test_nagata_floor(r, m, expected):
    assert nagata_floor(r, m) == expected


def test_sqrt_and_xu_enclosures():
    with mpmath.workdps(80):
        for r in (2, 10, 13, 101):
            s = sqrt_bound(r, 3)
            assert mp(s.lower) <= (mpmath.sqrt(r - 1) - mpmath.pi / 8) * 3 <= mp(s.upper)
            a, b = xu_bounds(r, 2)
            assert mp(a.lower) <= mpmath.sqrt(r - 1) * 2 <= mp(a.upper)
            assert mp(b.lower) <= mpmath.sqrt(r) * 2 - 1 / (2 * mpmath.sqrt(r - 1)) <= mp(b.upper)


def test_compare_r13():
    rep = compare_bounds(13, 1)
    assert rep.nagata_floor == 3
    assert rep.verdicts["paper_vs_nagata"].verdict is Verdict.GREATER
    assert rep.improves_on_nagata


def test_compare_r16():
    rep = compare_bounds(16, 1)
    assert rep.nagata_floor == 4
    assert rep.verdicts["paper_vs_nagata"].verdict is Verdict.LESS


def test_compare_r10_sqrt():
    rep = compare_bounds(10, 1)
    assert rep.verdicts["paper_vs_sqrt"].verdict is Verdict.GREATER
    with mpmath.workdps(50):
        assert abs(mp(rep.sqrt_bound.lower) - (3 - mpmath.pi / 8)) < 1e-40
    assert round(float(rep.sqrt_bound.lower), 4) == 2.6073


def test_compare_tie_is_reported_exactly():
    rep = compare_bounds(2, 1)
    assert rep.verdicts["paper_vs_nagata"].verdict is Verdict.EQUAL
    assert not rep.improves_on_nagata


def test_compare_gives_up_when_budget_too_small(monkeypatch):
    import clusterbound.numerics as nx

    monkeypatch.setattr(nx, "separate", lambda a, b: Verdict.INCONCLUSIVE)
    rep = compare_bounds(10, 1, digits=8, cap=32)
    assert rep.verdicts["paper_vs_sqrt"].verdict is Verdict.INCONCLUSIVE
    assert rep.verdicts["paper_vs_sqrt"].digits == 32


def test_evain():
    # (8/3 * 2)^2 = 256/9 for m = 1
    assert evain_threshold(1) == Fraction(256, 9)
    assert not evain_applies(28, 1)
    assert evain_applies(29, 1)


def test_scan_examples():
    assert improvement_scan(13, 15).improving == (13, 14, 15)
    assert improvement_scan(16, 16).improving == ()
    assert improvement_scan(2, 2).improving == ()


def test_scan_windows():
    scan = improvement_scan(10, 40)
    assert [w.n for w in scan.windows] == [3, 4, 5]
    w3 = improvement_window(3)
    assert list(w3.members(1, 100)) == [13, 14, 15]
    assert w3.contains(13) is True and w3.contains(12) is False and w3.contains(16) is False


def test_window_members_improve():
    # the window is where the weaker sqrt(r-1) - pi/8 bound beats floor(sqrt(r)); the product does too
    scan = improvement_scan(10, 200)
    for w in scan.windows:
        for r in w.members(10, 200):
            assert r in scan.improving


def test_scan_precision_independent():
    assert improvement_scan(10, 120, digits=20).improving == improvement_scan(10, 120, digits=200).improving
