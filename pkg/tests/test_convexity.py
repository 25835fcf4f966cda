"""Midpoint-convexity densities on integer intervals."""

import random
from fractions import Fraction
from math import comb

import pytest

from vcreg import (IntegerInterval, ap_count, convexity_density,
                   reflection_involution_check)
from vcreg.oracles import brute_ap_count, brute_convexity_edges


def test_smallest_cases():
    assert convexity_density(3, IntegerInterval(1, 3)) == 1
    assert convexity_density(4, IntegerInterval(1, 4)) == Fraction(3, 4)
    assert brute_convexity_edges(range(1, 5)) == (3, 4)


@pytest.mark.parametrize("n", list(range(3, 61)))
def test_closed_form_matches_brute(n):
    edges, total = brute_convexity_edges(range(1, n + 1))
    want = Fraction(1, 2) + Fraction(ap_count(n), 2 * comb(n, 3))
    assert Fraction(edges, total) == want
    assert convexity_density(n, IntegerInterval(1, n)) == want


def test_ap_count_closed_form():
    for n in range(3, 61):
        assert ap_count(n) == (n - 1) ** 2 // 4
        assert brute_ap_count(range(1, n + 1)) == ap_count(n)


def test_density_approaches_one_half():
    d = convexity_density(100, IntegerInterval(1, 100))
    assert abs(d - Fraction(1, 2)) < Fraction(1, 50)


def test_involution_frozen_intervals():
    assert reflection_involution_check(IntegerInterval(1, 4))
    assert reflection_involution_check(IntegerInterval(5, 10))


def test_involution_random_intervals():
    rng = random.Random(0)
    for _ in range(60):
        lo = rng.randint(-50, 50)
        hi = lo + rng.randint(2, 30)
        assert reflection_involution_check(IntegerInterval(lo, hi))


def test_interval_validation():
    from vcreg import InputError
    with pytest.raises(InputError):
        IntegerInterval(5, 4)
