from math import pi

import pytest
from scipy.special import zeta as scipy_zeta
from fareystat.special import zeta, ball_volume

from .util import approx


def test_zeta():
    approx(zeta(2), pi ** 2 / 6, decimal=12)
    approx(zeta(4), pi ** 4 / 90, decimal=12)
    for s in [1.5, 3, 5, 7.5]:
        approx(zeta(s), scipy_zeta(s), decimal=12)

    with pytest.raises(ValueError):
        zeta(1)


def test_ball_volume():
    approx(ball_volume(1), 2)
    approx(ball_volume(2), pi)
    approx(ball_volume(3), 4 * pi / 3)
