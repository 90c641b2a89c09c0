import logging
from itertools import product

import numpy as np

from .farey import sigma_growth
from .lattice import horosphere_image
from .random import GENERATOR, RandomStream, batch_sizes, sample_uniform
from .region import ScaledSetRegion, region_contains
from .util import (
    uprank,
    parallel_map,
    WindowTooLargeError,
    EmptyIntersectionError,
    ValidationError,
    SCHEMA_VERSION
)

__all__ = ['SpacingReport',
           'SortedLocator',
           'GridLocator',
           'locator',
           'window_scale',
           'count_in_window',
           'window_counts',
           'window_count_via_region',
           'p_stat',
           'p0_stat',
           'equidistribution']

log = logging.getLogger(__name__)


class SortedLocator:
    """Window counts on the circle of length `m` by binary search.

    Args:
        positions (vector): Points in :math:`[0, m)`.
        m (int): Length of the circle.
    """

    def __init__(self, positions, m):
        self.x = np.sort(np.asarray(positions, dtype=np.float64).ravel())
        self.m = m

    def counts(self, xs, s, test_set):
        """Count points in the windows `x + s A`.

        Args:
            xs (matrix): Window offsets, one per row.
            s (float): Scale.
            test_set (:class:`.region.TestSet`): The test set `A`.

        Returns:
            vector: Count per window.
        """
        xs = uprank(xs)[:, 0]
        a_lower, a_upper = test_set.bounding_box()
        lower = np.mod(xs + s * a_lower[0], self.m)
        upper = lower + s * (a_upper[0] - a_lower[0])
        counts = (np.searchsorted(self.x, np.minimum(upper, self.m), 'right') -
                  np.searchsorted(self.x, lower, 'left'))
        wrapped = upper >= self.m
        counts[wrapped] += np.searchsorted(self.x, upper[wrapped] - self.m,
                                           'right')
        return counts


class GridLocator:
    """Window counts on the torus :math:`[0, m)^n` with a uniform grid of
    cells at least as wide as the windows.

    Args:
        positions (matrix): Points in :math:`[0, m)^n`, one per row.
        m (int): Side of the torus.
        width (float): Window diameter.
    """

    def __init__(self, positions, m, width):
        self.positions = uprank(positions)
        self.m = m
        self.n = self.positions.shape[1]
        self.k = max(1, int(m // width))
        self.cell = m / self.k
        cells = np.clip((self.positions // self.cell).astype(np.int64),
                        0, self.k - 1)
        flat = np.ravel_multi_index(tuple(cells.T), (self.k,) * self.n)
        self.order = np.argsort(flat, kind='stable')
        flat = flat[self.order]
        ids = np.arange(self.k ** self.n)
        self.starts = np.searchsorted(flat, ids, 'left')
        self.stops = np.searchsorted(flat, ids, 'right')
        self.offsets = list(product((-1, 0, 1), repeat=self.n))

    def _candidates(self, center):
        cell = np.clip((np.mod(center, self.m) // self.cell).astype(np.int64),
                       0, self.k - 1)
        cells = {tuple(np.mod(cell + np.array(offset), self.k))
                 for offset in self.offsets}
        flats = [np.ravel_multi_index(c, (self.k,) * self.n) for c in cells]
        return np.concatenate([self.order[self.starts[f]:self.stops[f]]
                               for f in flats])

    def counts(self, xs, s, test_set):
        xs = uprank(xs)
        a_center = test_set.center
        counts = np.zeros(len(xs), dtype=np.int64)
        for i, x in enumerate(xs):
            center = x + s * a_center
            pts = self.positions[self._candidates(center)]
            # Displacements from the window center in (-m/2, m/2].
            rel = np.mod(pts - center + self.m / 2, self.m) - self.m / 2
            counts[i] = np.sum(test_set.contains((rel + s * a_center) / s))
        return counts


def locator(fset, width):
    """Construct the point locator suited to the dimension of a set.

    Args:
        fset (:class:`.farey.FareySet`): Points.
        width (float): Window diameter.

    Returns:
        object: A :class:`.spacing.SortedLocator` for `n = 1` and a
            :class:`.spacing.GridLocator` otherwise.
    """
    if fset.n == 1:
        return SortedLocator(fset.positions, fset.m)
    return GridLocator(fset.positions, fset.m, width)


def _check_window(fset, s, test_set):
    if test_set.n != fset.n:
        raise ValidationError('--window', 'test set has dimension {}, '
                                          'expected {}'.format(test_set.n,
                                                               fset.n))
    if s * test_set.diameter >= fset.m:
        raise WindowTooLargeError('Window of diameter {} does not fit in the '
                                  'torus of side {}.'
                                  ''.format(s * test_set.diameter, fset.m))


def window_scale(fset, scaling='count'):
    """Scale of the windows.

    Args:
        fset (:class:`.farey.FareySet`): Points.
        scaling (str, optional): `count` for :math:`(\\#F)^{-1/n}` or
            `sigma` for the asymptotic :math:`\\sigma_{\\mathbf{A},Q}^{-1/n}`.

    Returns:
        float: Scale.
    """
    if scaling == 'count':
        if fset.count == 0:
            raise EmptyIntersectionError('The Farey set is empty.')
        return fset.count ** (-1 / fset.n)
    elif scaling == 'sigma':
        return sigma_growth(fset.n, fset.Q, fset.sys) ** (-1 / fset.n)
    else:
        raise ValidationError('--scaling', 'unknown scaling "{}"'
                                           ''.format(scaling))


def window_counts(fset, xs, s, test_set):
    """Number of points of `fset` in the windows `x + s A` for a batch of
    offsets `x`.

    Args:
        fset (:class:`.farey.FareySet`): Points.
        xs (matrix): Offsets on the torus, one per row.
        s (float): Scale.
        test_set (:class:`.region.TestSet`): The test set `A`.

    Returns:
        vector: Counts.
    """
    _check_window(fset, s, test_set)
    return locator(fset, s * test_set.diameter).counts(xs, s, test_set)


def count_in_window(fset, x, s, test_set):
    """Number of points of `fset` in the window `x + s A` on the torus.

    Args:
        fset (:class:`.farey.FareySet`): Points.
        x (vector): Offset.
        s (float): Scale.
        test_set (:class:`.region.TestSet`): The test set `A`.

    Returns:
        int: Count.
    """
    return int(window_counts(fset, uprank(x), s, test_set)[0])


def window_count_via_region(sys, x, Q, test_set):
    """Count the points `(p, q)` of a residue system with
    `(p, q) h(x) a(Q)` in the region `C(A)`.

    With the asymptotic scaling this equals the window count at `x`.

    Args:
        sys (:class:`.congruence.ResidueSystem`): Residue system.
        x (vector): Offset on the torus.
        Q (int): Level.
        test_set (:class:`.region.TestSet`): The test set `A`.

    Returns:
        int: Count.
    """
    n = sys.n
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    region = ScaledSetRegion(test_set, sigma_growth(n, 1, sys))
    s = sigma_growth(n, Q, sys) ** (-1 / n)
    if s * test_set.diameter >= sys.m:
        raise WindowTooLargeError('Window does not fit in the torus.')
    lower, upper = test_set.bounding_box()
    count = 0
    for q in range(1, Q + 1):
        ranges = [np.arange(np.ceil(q * (x[i] + s * lower[i])),
                            np.floor(q * (x[i] + s * upper[i])) + 1,
                            dtype=np.int64) for i in range(n)]
        if any(len(r) == 0 for r in ranges):
            continue
        p = np.stack(np.meshgrid(*ranges, indexing='ij'), -1).reshape(-1, n)
        g = np.full(len(p), q, dtype=np.int64)
        for i in range(n):
            g = np.gcd(g, p[:, i])
        p = p[(g == 1) & sys.contains_rows(p, q)]
        if len(p) == 0:
            continue
        rows = np.concatenate([p, np.full((len(p), 1), q)], axis=1)
        images = horosphere_image(rows, x, Q)
        count += int(np.sum(region_contains(region, images)))
    return count


class SpacingReport:
    """Empirical distribution of window counts.

    Args:
        kind (str): `P` for random offsets or `P0` for offsets at the points.
        fset (:class:`.farey.FareySet`): Points the statistic was taken over.
        scale (float): Window scale.
        histogram (vector): Number of windows with each count.
        kmax (int): Counts above `kmax` form the reported tail mass.
        seed (int, optional): Seed of a sampled statistic.
    """

    def __init__(self, kind, fset, scale, histogram, kmax, seed=None):
        self.kind = kind
        self.n = fset.n
        self.Q = fset.Q
        self.m = fset.m
        self.classes = [list(c) for c in fset.sys.classes]
        self.scale = scale
        self.samples = int(np.sum(histogram))
        self.pmf = {k: int(c) / self.samples
                    for k, c in enumerate(histogram) if c > 0}
        self.mean = float(np.dot(np.arange(len(histogram)), histogram) /
                          self.samples)
        self.kmax = kmax
        self.tail = float(np.sum(histogram[kmax + 1:]) / self.samples)
        self.seed = seed
        self.generator = GENERATOR if seed is not None else None
        self.schema_version = SCHEMA_VERSION

    def __repr__(self):
        return 'SpacingReport(kind={!r}, Q={}, mean={}, samples={})' \
               ''.format(self.kind, self.Q, self.mean, self.samples)


def _add_histograms(histograms):
    size = max(len(h) for h in histograms)
    total = np.zeros(size, dtype=np.int64)
    for h in histograms:
        total[:len(h)] += h
    return total


def _p_batch(args):
    fset, domain, test_set, s, size, seed_seq = args
    generator = np.random.Generator(np.random.PCG64(seed_seq))
    xs = sample_uniform(domain, size, generator)
    counts = locator(fset, s * test_set.diameter).counts(xs, s, test_set)
    return np.bincount(counts)


def p_stat(fset, domain, test_set, kmax=16, samples=10 ** 5, seed=0,
           scaling='count', batch_size=10 ** 4, workers=1):
    """Distribution of the number of points in a randomly placed window.

    Args:
        fset (:class:`.farey.FareySet`): Points.
        domain (:class:`.region.TestSet`): Where to place the windows.
        test_set (:class:`.region.TestSet`): Window shape `A`.
        kmax (int, optional): Counts above `kmax` form the tail mass.
        samples (int, optional): Number of windows.
        seed (int, optional): Seed.
        scaling (str, optional): See :func:`.spacing.window_scale`.
        batch_size (int, optional): Windows per batch.
        workers (int, optional): Number of processes.

    Returns:
        :class:`.spacing.SpacingReport`: Report of kind `P`.
    """
    s = window_scale(fset, scaling)
    _check_window(fset, s, test_set)
    sizes = batch_sizes(samples, batch_size)
    seeds = RandomStream(seed).seeds(len(sizes))
    log.info('Sampling %d windows in %d batches (scale %.3g).',
             samples, len(sizes), s)
    histograms = parallel_map(_p_batch,
                              [(fset, domain, test_set, s, size, seed_seq)
                               for size, seed_seq in zip(sizes, seeds)],
                              workers=workers)
    return SpacingReport('P', fset, s, _add_histograms(histograms), kmax,
                         seed=seed)


def p0_stat(fset, domain, test_set, kmax=16, scaling='count'):
    """Exact distribution of the number of points in windows placed at the
    points themselves. A point counts itself whenever `0` lies in `A`.

    Args:
        fset (:class:`.farey.FareySet`): Points.
        domain (:class:`.region.TestSet`): Points in this subset of
            :math:`[0, m)^n` carry windows.
        test_set (:class:`.region.TestSet`): Window shape `A`.
        kmax (int, optional): Counts above `kmax` form the tail mass.
        scaling (str, optional): See :func:`.spacing.window_scale`.

    Returns:
        :class:`.spacing.SpacingReport`: Report of kind `P0`.
    """
    s = window_scale(fset, scaling)
    _check_window(fset, s, test_set)
    xs = fset.positions[domain.contains(fset.positions)]
    if len(xs) == 0:
        raise EmptyIntersectionError('No Farey points lie in {!r}.'
                                     ''.format(domain))
    counts = locator(fset, s * test_set.diameter).counts(xs, s, test_set)
    return SpacingReport('P0', fset, s, np.bincount(counts), kmax)


def equidistribution(fset, domain):
    """Fraction of the points in a subset of the torus.

    Args:
        fset (:class:`.farey.FareySet`): Points.
        domain (:class:`.region.TestSet`): Subset of :math:`[0, m)^n`.

    Returns:
        tuple[float, float]: Observed fraction and its limit
            :math:`\\lambda_\\Delta(D) = \\lambda(D) / m^n`.
    """
    observed = float(np.mean(domain.contains(fset.positions)))
    return observed, domain.volume / fset.m ** fset.n
