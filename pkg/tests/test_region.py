from math import log, pi

import numpy as np
import pytest
from fareystat.region import (
    Box,
    Ball,
    ScaledSetRegion,
    ESTRegion,
    KestenRegion,
    region_contains
)
from fareystat.util import ValidationError

from .util import allclose, approx


def test_box():
    box = Box([0, -1], [1, 1])
    assert box.n == 2
    approx(box.volume, 2)
    approx(box.diameter, 5 ** 0.5)
    allclose(box.center, [0.5, 0])
    allclose(box.contains([[0.5, 0], [1, 1], [1.1, 0]]), [True, True, False])

    with pytest.raises(ValidationError):
        Box([0], [0])
    with pytest.raises(ValidationError):
        Box([0, 0], [1])


def test_ball():
    ball = Ball([0, 0], 2)
    assert ball.n == 2
    approx(ball.volume, 4 * pi)
    approx(ball.diameter, 4)
    lower, upper = ball.bounding_box()
    allclose(lower, [-2, -2])
    allclose(upper, [2, 2])
    allclose(ball.contains([[2, 0], [1.5, 1.5]]), [True, False])

    with pytest.raises(ValidationError):
        Ball([0], 0)


def test_est_region():
    region = ESTRegion(0.5, 2, 1)
    assert region.kind == 'E'
    approx(region.volume, log(2))
    assert region_contains(region, [0.1, 1.5])[0]
    assert not region_contains(region, [0.1, 0.99])[0]
    assert not region_contains(region, [0.3, 2])[0]
    assert region_contains(region, [0.3, 2], 0.2)[0]

    with pytest.raises(ValidationError):
        ESTRegion(0.5, 1, 1)
    with pytest.raises(ValidationError):
        ESTRegion(0, 2, 1)


def test_kesten_region():
    region = KestenRegion(0.5, 1)
    assert region.kind == 'K'
    approx(region.volume, 1)
    assert not region_contains(region, [0.6, 0.5])[0]
    allclose(region_contains(region, [[0.4, 0.5], [0, 0], [0, 1.01]]),
             [True, True, False])


def test_scaled_set_region():
    region = ScaledSetRegion(Box([0], [1]), 4)
    assert region.kind == 'C'
    # The cone over [0, 1 / 4].
    allclose(region_contains(region, [[0.1, 0.5], [0.2, 0.5], [0.1, 0],
                                      [0.1, 1.2]]),
             [True, False, False, False])

    with pytest.raises(ValueError):
        region_contains(region, [0.1, 0.5, 0.5])
