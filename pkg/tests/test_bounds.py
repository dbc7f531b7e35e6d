from fractions import Fraction

import pytest

from graphtsp.core import bounds
from graphtsp.core.pipeline import tsp_tour


def test_sqrt2_sandwich():
    lower, upper = bounds.sqrt2_lower(0, 1), bounds.sqrt2_upper(0, 1)
    assert lower * lower < 2 < upper * upper
    assert bounds.sqrt2_lower(3, -2) == 3 - 2 * bounds.SQRT2_UPPER
    assert bounds.sqrt2_upper(3, -2) == 3 - 2 * bounds.SQRT2_LOWER
    assert bounds.sqrt2_lower(5, 0) == bounds.sqrt2_upper(5, 0) == 5


def test_crossover_interval():
    lo, hi = bounds.crossover_interval()
    assert Fraction(1041, 1000) < lo < hi < Fraction(1042, 1000)


@pytest.mark.parametrize("n", [30, 60, 300, 3000])
def test_algorithm_bounds_meet_at_the_crossover(n):
    lo, hi = bounds.crossover_interval()
    for olp in (lo * n, hi * n):
        circulation, christofides = bounds.algorithm_bounds_at(n, olp)
        assert abs(circulation - christofides) <= christofides / 50
        assert min(circulation, christofides) <= bounds.tour_guarantee(olp)


def test_bounds_split_around_the_crossover():
    n = 100
    circulation, christofides = bounds.algorithm_bounds_at(n, Fraction(n))
    assert circulation < christofides
    circulation, christofides = bounds.algorithm_bounds_at(n, Fraction(3 * n, 2))
    assert christofides < circulation


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_certificate_carries_the_smaller_worst_case_bound(k, cycle):
    g = cycle(3 * k + 2)
    cert = tsp_tour(g).certificate
    assert cert.analytic_bound == min(bounds.algorithm_bounds_at(g.vertex_count, cert.olp))
    assert cert.analytic_bound <= bounds.tour_guarantee(cert.olp)


def test_diamond_certificate(diamond):
    cert = tsp_tour(diamond).certificate
    # christofides worst case 3 + 4/2 beats the circulation one
    assert cert.analytic_bound == 5
