import numpy as np
import pytest

from fareystat.congruence import ResidueSystem
from fareystat.farey import enumerate_farey
from fareystat.region import Box, Ball
from fareystat.spacing import (
    SortedLocator,
    GridLocator,
    locator,
    window_scale,
    count_in_window,
    window_counts,
    window_count_via_region,
    p_stat,
    p0_stat,
    equidistribution
)
from fareystat.util import (
    WindowTooLargeError,
    EmptyIntersectionError,
    ValidationError
)
from .util import allclose, approx, window_count_bruteforce


def test_count_in_window_small():
    fset = enumerate_farey(1, 1)
    window = Box([-0.4], [0.4])
    assert count_in_window(fset, [0.5], 1.0, window) == 0
    assert count_in_window(fset, [0.3], 1.0, window) == 1

    fset = enumerate_farey(1, 5)
    assert count_in_window(fset, [0], 0.1, Box([0], [1])) == 1


def test_locator_type():
    assert isinstance(locator(enumerate_farey(1, 5), 0.1), SortedLocator)
    assert isinstance(locator(enumerate_farey(2, 5), 0.1), GridLocator)


@pytest.mark.parametrize('n, Q, sys',
                         [(1, 60, None),
                          (1, 40, ResidueSystem(1, 3, [(1, 1), (2, 0)])),
                          (2, 12, None),
                          (2, 8, ResidueSystem(2, 2, [(0, 1, 1)]))])
def test_window_counts_against_bruteforce(n, Q, sys):
    fset = enumerate_farey(n, Q, sys)
    window = Box([-0.7] * n, [1.3] * n)
    s = 2 * window_scale(fset)
    xs = np.random.rand(100, n) * fset.m
    counts = window_counts(fset, xs, s, window)
    expected = [window_count_bruteforce(fset, x, s, window.lower,
                                        window.upper) for x in xs]
    allclose(counts, expected)


def test_window_counts_ball():
    fset = enumerate_farey(2, 10)
    ball = Ball([0.2, -0.1], 1.5)
    s = window_scale(fset)
    xs = np.random.rand(50, 2)
    counts = window_counts(fset, xs, s, ball)
    for x, count in zip(xs, counts):
        rel = np.mod(fset.positions - x + 0.5, 1) - 0.5
        assert count == np.sum(ball.contains(rel / s))


def test_window_counts_wrap():
    fset = enumerate_farey(1, 10)
    s = window_scale(fset)
    # A window around zero contains zero and the largest points.
    wide = Box([-3], [3])
    assert count_in_window(fset, [0], s, wide) == \
        window_count_bruteforce(fset, [0], s, wide.lower, wide.upper)
    assert count_in_window(fset, [0.999], s, wide) == \
        window_count_bruteforce(fset, [0.999], s, wide.lower, wide.upper)


@pytest.mark.parametrize('n, sys', [(1, ResidueSystem(1, 2, [(0, 1)])),
                                    (2, None)])
def test_translation_invariance(n, sys):
    fset = enumerate_farey(n, 10, sys)
    window = Box([-1] * n, [1] * n)
    s = window_scale(fset)
    for x in np.random.rand(20, n) * fset.m:
        count = count_in_window(fset, x, s, window)
        for i in range(n):
            shift = np.zeros(n)
            shift[i] = fset.m
            assert count_in_window(fset, x + shift, s, window) == count
            assert count_in_window(fset, x - shift, s, window) == count


def test_window_checks():
    fset = enumerate_farey(1, 2)
    with pytest.raises(WindowTooLargeError):
        count_in_window(fset, [0], 0.5, Box([0], [5]))
    with pytest.raises(ValidationError):
        count_in_window(fset, [0, 0], 0.1, Box([0, 0], [1, 1]))
    with pytest.raises(WindowTooLargeError):
        p_stat(fset, Box([0], [1]), Box([0], [5]), samples=10)


def test_window_scale():
    fset = enumerate_farey(2, 10)
    approx(window_scale(fset), fset.count ** (-1 / 2))
    # The asymptotic scaling is close to the exact one.
    assert abs(window_scale(fset, 'sigma') / window_scale(fset) - 1) < 0.2
    with pytest.raises(ValidationError):
        window_scale(fset, 'unknown')

    # No point has an even denominator at level one.
    empty = enumerate_farey(1, 1, ResidueSystem(1, 2, [(1, 0)]))
    assert empty.count == 0
    with pytest.raises(EmptyIntersectionError):
        window_scale(empty)


def test_p0_stat_examples():
    fset = enumerate_farey(1, 2)
    report = p0_stat(fset, Box([0], [1]), Box([-0.1], [0.1]))
    assert report.kind == 'P0'
    assert report.pmf == {1: 1.0}
    assert report.samples == 2
    assert report.seed is None
    assert report.generator is None
    approx(report.scale, 0.5)

    # Windows beyond the point but shorter than the smallest gap are empty.
    fset = enumerate_farey(1, 300)
    report = p0_stat(fset, Box([0], [1]), Box([0.01], [0.2]))
    assert report.pmf == {0: 1.0}


def test_p0_stat_restricted():
    fset = enumerate_farey(1, 100, ResidueSystem(1, 2, [(0, 1)]))
    report = p0_stat(fset, Box([0], [2]), Box([-1], [1]))
    assert report.samples == fset.count
    approx(sum(report.pmf.values()), 1, decimal=12)
    assert report.m == 2
    assert report.classes == [[0, 1]]
    # Every window contains its own point.
    assert 0 not in report.pmf


def test_p0_stat_empty_domain():
    fset = enumerate_farey(1, 2)
    with pytest.raises(EmptyIntersectionError):
        p0_stat(fset, Box([0.9], [0.95]), Box([-0.1], [0.1]))


def test_p_stat_mean():
    fset = enumerate_farey(1, 500)
    report = p_stat(fset, Box([0], [1]), Box([0], [0.5]), samples=20000,
                    seed=1)
    assert report.kind == 'P'
    assert abs(report.mean - 0.5) < 0.02

    report = p_stat(fset, Box([0], [1]), Box([0], [1]), samples=20000,
                    seed=2)
    assert abs(report.mean - 1) < 0.02


def test_p_stat_report():
    fset = enumerate_farey(2, 15)
    report = p_stat(fset, Box([0, 0], [1, 1]), Ball([0, 0], 1),
                    kmax=2, samples=3000, seed=5, batch_size=1000)
    approx(sum(report.pmf.values()), 1, decimal=12)
    approx(report.mean, sum(k * p for k, p in report.pmf.items()))
    approx(report.tail, sum(p for k, p in report.pmf.items() if k > 2))
    assert report.samples == 3000
    assert report.seed == 5
    assert 'PCG64' in report.generator
    assert 'P' in str(report)


def test_p_stat_deterministic():
    fset = enumerate_farey(1, 100)
    domain, window = Box([0], [1]), Box([0], [2])
    first = p_stat(fset, domain, window, samples=5000, seed=9,
                   batch_size=1000)
    second = p_stat(fset, domain, window, samples=5000, seed=9,
                    batch_size=1000, workers=2)
    assert first.pmf == second.pmf
    other = p_stat(fset, domain, window, samples=5000, seed=10,
                   batch_size=1000)
    assert first.pmf != other.pmf


def test_p_stat_domain_independence():
    fset = enumerate_farey(1, 400)
    window = Box([0], [1])
    left = p_stat(fset, Box([0], [0.5]), window, samples=20000, seed=3)
    right = p_stat(fset, Box([0.5], [1]), window, samples=20000, seed=4)
    assert abs(left.mean - right.mean) < 0.05


@pytest.mark.parametrize('n, sys, Q',
                         [(1, ResidueSystem(1), 40),
                          (1, ResidueSystem(1, 2, [(0, 1)]), 40),
                          (2, ResidueSystem(2), 8)])
def test_window_count_via_region(n, sys, Q):
    fset = enumerate_farey(n, Q, sys)
    window = Box([-1] * n, [1.5] * n)
    s = window_scale(fset, 'sigma')
    for x in np.random.rand(10, n) * sys.m:
        assert window_count_via_region(sys, x, Q, window) == \
               count_in_window(fset, x, s, window)


def test_equidistribution():
    fset = enumerate_farey(1, 200)
    observed, expected = equidistribution(fset, Box([0], [0.25]))
    approx(expected, 0.25)
    assert abs(observed - expected) < 0.01

    fset = enumerate_farey(1, 200, ResidueSystem(1, 2, [(0, 1)]))
    observed, expected = equidistribution(fset, Box([0], [0.5]))
    approx(expected, 0.25)
    assert abs(observed - expected) < 0.01


def test_p_stat_converges_in_level():
    domain, window = Box([0], [1]), Box([0], [2])
    coarse = p_stat(enumerate_farey(1, 1000), domain, window, samples=50000,
                    seed=6)
    fine = p_stat(enumerate_farey(1, 2000), domain, window, samples=50000,
                  seed=7)
    ks = set(coarse.pmf) | set(fine.pmf)
    distance = 0.5 * sum(abs(coarse.pmf.get(k, 0) - fine.pmf.get(k, 0))
                         for k in ks)
    assert distance < 0.05
