import logging
from math import log as ln

import lab as B
import numpy as np
from plum import Dispatcher

from .special import ball_volume
from .util import uprank, ValidationError

__all__ = ['TestSet',
           'Box',
           'Ball',
           'Region',
           'ScaledSetRegion',
           'ESTRegion',
           'KestenRegion',
           'region_contains']

log = logging.getLogger(__name__)

_dispatch = Dispatcher()


class TestSet:
    """A bounded subset of :math:`\\mathbb{R}^n` with boundary of measure zero
    and nonempty interior."""

    # Not a pytest class.
    __test__ = False

    @property
    def n(self):  # pragma: no cover
        """Dimension."""
        raise NotImplementedError()

    @property
    def volume(self):  # pragma: no cover
        """Exact Lebesgue measure."""
        raise NotImplementedError()

    @property
    def diameter(self):  # pragma: no cover
        """Euclidean diameter."""
        raise NotImplementedError()

    def bounding_box(self):  # pragma: no cover
        """Smallest axis-aligned box containing the set.

        Returns:
            tuple[vector, vector]: Lower and upper corners.
        """
        raise NotImplementedError()

    @property
    def center(self):
        """Center of the bounding box."""
        lower, upper = self.bounding_box()
        return (lower + upper) / 2

    def contains(self, x):  # pragma: no cover
        """Membership for a batch of points.

        Args:
            x (matrix): Points, one per row.

        Returns:
            vector: Boolean per point.
        """
        raise NotImplementedError()


class Box(TestSet):
    """Closed box :math:`\\prod_i [l_i, u_i]`.

    Args:
        lower (vector): Lower corner.
        upper (vector): Upper corner.
    """

    def __init__(self, lower, upper):
        self.lower = np.atleast_1d(np.asarray(lower, dtype=np.float64))
        self.upper = np.atleast_1d(np.asarray(upper, dtype=np.float64))
        if self.lower.shape != self.upper.shape:
            raise ValidationError('box', 'corners differ in dimension')
        if np.any(self.upper <= self.lower):
            raise ValidationError('box', 'empty interior')

    @property
    def n(self):
        return B.shape(self.lower)[0]

    @property
    def volume(self):
        return float(np.prod(self.upper - self.lower))

    @property
    def diameter(self):
        return float(np.linalg.norm(self.upper - self.lower))

    def bounding_box(self):
        return self.lower, self.upper

    def contains(self, x):
        x = uprank(x)
        return B.all((x >= self.lower) & (x <= self.upper), axis=1)

    def __repr__(self):
        return 'Box({}, {})'.format(self.lower.tolist(), self.upper.tolist())


class Ball(TestSet):
    """Closed Euclidean ball.

    Args:
        center (vector): Center.
        radius (float): Radius.
    """

    def __init__(self, center, radius):
        self._center = np.atleast_1d(np.asarray(center, dtype=np.float64))
        self.radius = float(radius)
        if self.radius <= 0:
            raise ValidationError('ball', 'radius must be positive')

    @property
    def n(self):
        return B.shape(self._center)[0]

    @property
    def center(self):
        return self._center

    @property
    def volume(self):
        return ball_volume(self.n) * self.radius ** self.n

    @property
    def diameter(self):
        return 2 * self.radius

    def bounding_box(self):
        return self._center - self.radius, self._center + self.radius

    def contains(self, x):
        x = uprank(x)
        return B.sum((x - self._center) ** 2, axis=1) <= self.radius ** 2

    def __repr__(self):
        return 'Ball({}, {})'.format(self._center.tolist(), self.radius)


class Region:
    """A region of :math:`\\mathbb{R}^{n+1}` which counts lattice points
    pushed along the horosphere.

    Args:
        n (int): Dimension of the torus.
    """

    #: One of `C`, `E` and `K`.
    kind = None

    def __init__(self, n):
        self.n = n


class ScaledSetRegion(Region):
    """The region :math:`\\{(x, y) : 0 < y \\le 1,
    x \\in \\sigma^{-1/n} y A\\}`.

    Args:
        test_set (:class:`.region.TestSet`): The test set `A`.
        sigma1 (float): Growth constant :math:`\\sigma_{\\mathbf{A},1}`.
    """

    kind = 'C'

    def __init__(self, test_set, sigma1):
        Region.__init__(self, test_set.n)
        if sigma1 <= 0:
            raise ValidationError('sigma', 'must be positive')
        self.test_set = test_set
        self.sigma1 = sigma1


class ESTRegion(Region):
    """The region :math:`\\{(x, y) : |y|^{1/n} \\|x\\| \\le \\alpha,
    1 \\le y \\le c\\}`.

    Args:
        alpha (float): Amplitude.
        c (float): Ratio. Must exceed one.
        n (int): Dimension.
    """

    kind = 'E'

    def __init__(self, alpha, c, n):
        Region.__init__(self, n)
        if alpha <= 0:
            raise ValidationError('--alpha', 'must be positive')
        if c <= 1:
            raise ValidationError('--c', 'must exceed one')
        self.alpha = alpha
        self.c = c

    @property
    def volume(self):
        """Lebesgue measure :math:`V_n \\alpha^n \\log c`."""
        return ball_volume(self.n) * self.alpha ** self.n * ln(self.c)


class KestenRegion(Region):
    """The region :math:`\\{(x, y) : \\|x\\| \\le \\alpha, 0 \\le y \\le 1\\}`.

    Args:
        alpha (float): Amplitude.
        n (int): Dimension.
    """

    kind = 'K'

    def __init__(self, alpha, n):
        Region.__init__(self, n)
        if alpha <= 0:
            raise ValidationError('--alpha', 'must be positive')
        self.alpha = alpha

    @property
    def volume(self):
        """Lebesgue measure :math:`V_n \\alpha^n`."""
        return ball_volume(self.n) * self.alpha ** self.n


def _split(region, point):
    point = uprank(point)
    if B.shape(point)[1] != region.n + 1:
        raise ValueError('Expected points of dimension {}.'
                         ''.format(region.n + 1))
    return point[:, :-1], point[:, -1]


@_dispatch
def region_contains(region: ScaledSetRegion, point, tol: float = 0.0):
    """Indicator of a region.

    Args:
        region (:class:`.region.Region`): Region.
        point (matrix): Points of :math:`\\mathbb{R}^{n+1}`, one per row.
        tol (float, optional): Slack added to the defining inequalities.

    Returns:
        vector: Boolean per point.
    """
    x, y = _split(region, point)
    inside = (y > 0) & (y <= 1 + tol)
    scale = region.sigma1 ** (-1 / region.n) * np.where(inside, y, 1)
    return inside & region.test_set.contains(x / scale[:, None])


@_dispatch
def region_contains(region: ESTRegion, point, tol: float = 0.0):
    x, y = _split(region, point)
    norms = np.sqrt(B.sum(x ** 2, axis=1))
    return ((np.abs(y) ** (1 / region.n) * norms <= region.alpha + tol) &
            (y >= 1 - tol) & (y <= region.c + tol))


@_dispatch
def region_contains(region: KestenRegion, point, tol: float = 0.0):
    x, y = _split(region, point)
    norms = np.sqrt(B.sum(x ** 2, axis=1))
    return (norms <= region.alpha + tol) & (y >= -tol) & (y <= 1 + tol)
