import logging
from itertools import combinations_with_replacement, permutations, product
from math import gcd, inf, prod
from typing import Union

import lab as B
import numpy as np
from plum import Dispatcher
from scipy.stats import ks_2samp
from tqdm import tqdm

from .congruence import astar_count
from .lattice import complete_to_unimodular
from .region import Box
from .util import (
    gcd_all,
    check_int64,
    check_int128,
    parallel_map,
    ValidationError,
    SCHEMA_VERSION
)

__all__ = ['LatticeBasis',
           'PsiEstimate',
           'CensusReport',
           'apery_set',
           'frobenius_number',
           'representable',
           'frobenius_bruteforce',
           'associated_lattice',
           'reduce_basis',
           'covering_radius',
           'covering_radius_bounds',
           'identity_check',
           'ks_distance',
           'frobenius_census']

log = logging.getLogger(__name__)

_dispatch = Dispatcher()

# Largest number of grid point and lattice point pairs held in memory.
_CHUNK = 2 * 10 ** 6


def _check_generators(a):
    a = [int(x) for x in a]
    if len(a) < 2:
        raise ValidationError('--a', 'needs at least two entries')
    if min(a) < 2:
        raise ValidationError('--a', 'entries must be at least two')
    if gcd_all(a) != 1:
        raise ValidationError('--a', '{} is not primitive'.format(tuple(a)))
    for x in a:
        check_int64(x, 'entry')
    return a


def apery_set(a):
    """Smallest representable number in every residue class modulo the
    smallest entry, by the round-robin algorithm.

    Args:
        a (sequence[int]): Primitive row with entries at least two.

    Returns:
        list[int]: Entry `r` is the smallest nonnegative combination of `a`
            which is congruent to `r` modulo `min(a)`.
    """
    a = sorted(_check_generators(a))
    base = a[0]
    table = [0] + [inf] * (base - 1)
    for b in a[1:]:
        d = gcd(base, b)
        for r in range(d):
            best = min(table[r::d])
            if best == inf:
                continue
            for _ in range(base // d):
                best += b
                i = best % base
                best = min(best, table[i])
                table[i] = best
    return table


def frobenius_number(a):
    """Largest integer which is not a nonnegative integer combination of the
    entries of `a`.

    Args:
        a (sequence[int]): Primitive row with entries at least two.

    Returns:
        int: Frobenius number.
    """
    table = apery_set(a)
    return max(table) - min(int(x) for x in a)


def representable(a, limit):
    """Bitmap of the nonnegative combinations of `a` up to `limit`.

    Args:
        a (sequence[int]): Positive entries.
        limit (int): Largest number to decide.

    Returns:
        vector: Boolean bitmap of length `limit + 1`.
    """
    bitmap = np.zeros(limit + 1, dtype=bool)
    bitmap[0] = True
    for g in sorted(set(int(x) for x in a)):
        # Block `k` only depends on block `k - 1`, which is final already.
        for start in range(g, limit + 1, g):
            stop = min(start + g, limit + 1)
            bitmap[start:stop] |= bitmap[start - g:stop - g]
    return bitmap


def frobenius_bruteforce(a):
    """Frobenius number by scanning a representability bitmap.

    Args:
        a (sequence[int]): Primitive row with entries at least two.

    Returns:
        int: Frobenius number.
    """
    a = _check_generators(a)
    bitmap = representable(a, min(a) * max(a))
    return int(np.flatnonzero(~bitmap)[-1])


class LatticeBasis:
    """Basis of a lattice :math:`\\mathbb{Z}^n B` of covolume one.

    Args:
        rows (matrix): Basis vectors, one per row.
        a (tuple[int], optional): Primitive row the lattice came from.
    """

    def __init__(self, rows, a=None):
        self.rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
        if self.rows.shape[0] != self.rows.shape[1]:
            raise ValueError('Basis must be square.')
        self.a = None if a is None else tuple(a)

    @property
    def n(self):
        """Dimension."""
        return self.rows.shape[0]

    @property
    def det(self):
        """Determinant of the basis."""
        return float(B.det(self.rows))

    def __repr__(self):
        return 'LatticeBasis({}, a={})'.format(self.rows.tolist(), self.a)


def associated_lattice(a):
    """Lattice whose simplex covering radius is the normalised Frobenius
    number of `a` plus the normalised sum of its entries.

    Args:
        a (sequence[int]): Primitive row with entries at least two.

    Returns:
        :class:`.frobenius.LatticeBasis`: Basis
            :math:`(a_1 \\cdots a_{n+1})^{-1/n} G \\mathrm{diag}(a_1, \\ldots,
            a_n)` with `G` the top-left block of a unimodular completion.
    """
    a = _check_generators(a)
    n = len(a) - 1
    product_a = check_int128(prod(a), 'product of the entries')
    gamma = np.array(complete_to_unimodular(a), dtype=np.float64)
    g = gamma[:n, :n]
    rows = product_a ** (-1 / n) * B.matmul(g, B.diag(np.array(a[:n],
                                                                dtype=float)))
    return LatticeBasis(rows, a)


def reduce_basis(basis):
    """Lagrange-Gauss reduction of a two-dimensional basis. Bases of
    dimension one are returned as they are.

    Args:
        basis (:class:`.frobenius.LatticeBasis`): Basis.

    Returns:
        :class:`.frobenius.LatticeBasis`: Reduced basis of the same lattice.
    """
    if basis.n == 1:
        return basis
    if basis.n != 2:
        raise ValueError('Can only reduce bases of dimension two.')
    b1, b2 = basis.rows[0].copy(), basis.rows[1].copy()
    while True:
        if np.dot(b1, b1) > np.dot(b2, b2):
            b1, b2 = b2, b1
        mu = np.round(np.dot(b1, b2) / np.dot(b1, b1))
        if mu == 0:
            break
        b2 = b2 - mu * b1
    return LatticeBasis(np.stack([b1, b2]), basis.a)


def _fundamental_grid(rows, h):
    # Axis-aligned grid points whose cells meet the fundamental
    # parallelepiped, in strips along the first axis.
    n = rows.shape[0]
    inv = B.inv(rows)
    corners = B.matmul(np.array(list(product((0, 1), repeat=n)),
                                dtype=np.float64), rows)
    lower = np.min(corners, axis=0) - h
    upper = np.max(corners, axis=0) + h
    margin = h * np.sum(np.abs(inv), axis=0)
    axes = [np.arange(lower[i], upper[i] + h, h) for i in range(n)]
    rest = np.stack(np.meshgrid(*axes[1:], indexing='ij'),
                    -1).reshape(-1, n - 1)
    step = max(1, _CHUNK // (8 * max(len(rest), 1)))
    for start in range(0, len(axes[0]), step):
        first = axes[0][start:start + step]
        pts = np.concatenate([np.repeat(first, len(rest))[:, None],
                              np.tile(rest, (len(first), 1))], axis=1)
        t = B.matmul(pts, inv)
        keep = np.all((t >= -margin) & (t <= 1 + margin), axis=1)
        yield pts[keep]


def _lattice_window(rows, lower, upper):
    # All lattice points `z B` in the box `[lower, upper]`.
    n = rows.shape[0]
    inv = B.inv(rows)
    corners = np.array([[upper[i] if bit else lower[i]
                         for i, bit in enumerate(bits)]
                        for bits in product((0, 1), repeat=n)])
    z = B.matmul(corners, inv)
    ranges = [np.arange(np.floor(np.min(z[:, i])),
                        np.ceil(np.max(z[:, i])) + 1) for i in range(n)]
    z = np.stack(np.meshgrid(*ranges, indexing='ij'), -1).reshape(-1, n)
    points = B.matmul(z, rows)
    inside = np.all((points >= lower - 1e-9) & (points <= upper + 1e-9),
                    axis=1)
    return points[inside]


def _simplex_gauge_max(grid, rows, h, radius):
    # Largest gauge distance from a grid point to the lattice points below
    # it, only using lattice points within gauge distance `radius`.
    estimate = 0.0
    for pts in grid:
        if len(pts) == 0:
            continue
        lower = np.min(pts, axis=0) - radius
        upper = np.max(pts, axis=0)
        window = _lattice_window(rows, lower, upper)
        step = max(1, _CHUNK // max(len(window), 1))
        for start in range(0, len(pts), step):
            diff = pts[start:start + step, None, :] - window[None, :, :]
            below = np.all(diff >= -1e-12, axis=-1)
            gauge = np.where(below, np.sum(diff, axis=-1), inf)
            estimate = max(estimate, float(np.max(np.min(gauge, axis=1))))
    return estimate


@_dispatch
def covering_radius_bounds(basis: LatticeBasis, h: float = 1e-3):
    """Bounds on the covering radius of a lattice with respect to the
    standard simplex :math:`\\{x \\ge 0 : \\sum_i x_i \\le 1\\}`.

    The gauge distance to the lattice is evaluated on a grid of spacing `h`
    covering a fundamental domain. Moving a point up by at most `h` in every
    coordinate increases its gauge distance by at most `n h`.

    Args:
        basis (:class:`.frobenius.LatticeBasis`): Basis. Alternatively, give
            the rows of the basis directly.
        h (float, optional): Grid spacing.

    Returns:
        tuple[float, float]: Lower and upper bound.
    """
    if h <= 0:
        raise ValueError('Grid spacing must be positive.')
    n = basis.n
    if abs(basis.det) < 1e-12:
        raise ValueError('Basis is degenerate.')
    if n == 1:
        radius = abs(float(basis.rows[0, 0]))
        return radius, radius
    if n > 2:
        raise ValueError('Covering radii are only computed for n <= 2.')

    rows = reduce_basis(basis).rows
    radius = max(1.0, float(np.sum(np.abs(rows))))
    while True:
        estimate = _simplex_gauge_max(_fundamental_grid(rows, h),
                                      rows, h, radius)
        if estimate <= radius:
            break
        log.debug('Gauge search radius %.3g too small; doubling.', radius)
        radius *= 2
    return estimate, estimate + n * h


@_dispatch
def covering_radius_bounds(rows: B.Numeric, h: float = 1e-3):
    return covering_radius_bounds(LatticeBasis(rows), h)


@_dispatch
def covering_radius(basis: Union[LatticeBasis, B.Numeric], h: float = 1e-3):
    """Grid estimate of the simplex covering radius, which is a lower bound
    within `n h` of the true value.

    Args:
        basis (:class:`.frobenius.LatticeBasis`): Basis or its rows.
        h (float, optional): Grid spacing.

    Returns:
        float: Estimate.
    """
    return covering_radius_bounds(basis, h)[0]


def identity_check(a, h=1e-3):
    """Compare the Frobenius number with the covering radius of the
    associated lattice.

    Args:
        a (sequence[int]): Primitive row with entries at least two.
        h (float, optional): Grid spacing of the covering radius.

    Returns:
        float: Absolute residual
            :math:`|F(a) + \\sum_i a_i - (a_1 \\cdots a_{n+1})^{1/n} \\rho|`.
    """
    a = _check_generators(a)
    n = len(a) - 1
    scale = check_int128(prod(a), 'product of the entries') ** (1 / n)
    radius = covering_radius(associated_lattice(a), float(h))
    return abs(frobenius_number(a) + sum(a) - scale * radius)


def ks_distance(sample_a, sample_b):
    """Two-sample Kolmogorov-Smirnov statistic.

    Args:
        sample_a (vector): First sample.
        sample_b (vector): Second sample.

    Returns:
        float: Supremum distance between the empirical CDFs.
    """
    if len(sample_a) == 0 or len(sample_b) == 0:
        raise ValueError('Both samples must be nonempty.')
    return float(ks_2samp(sample_a, sample_b, method='asymp').statistic)


class PsiEstimate:
    """Tail counts of normalised Frobenius numbers over an ensemble.

    Args:
        r_grid (vector): Thresholds `R`.
        values (vector): Normalised Frobenius numbers of the ensemble.
        T (int): Dilation of the domain.
        n (int): Dimension.
    """

    def __init__(self, r_grid, values, T, n):
        self.r_grid = np.asarray(r_grid, dtype=np.float64)
        values = np.sort(np.asarray(values, dtype=np.float64))
        self.count = len(values)
        self.tails = len(values) - np.searchsorted(values, self.r_grid,
                                                   'right')
        self.norm = self.tails / float(T) ** (n + 1)
        self.T = T

    @property
    def grid(self):
        """Pairs of `R` and normalised tail counts."""
        return list(zip(self.r_grid.tolist(), self.norm.tolist()))

    def __repr__(self):
        return 'PsiEstimate(T={}, count={})'.format(self.T, self.count)


class CensusReport:
    """Restricted and full censuses of normalised Frobenius numbers.

    Args:
        sys (:class:`.congruence.ResidueSystem`): Residue system.
        domain (:class:`.region.Box`): Domain `D`.
        T (int): Dilation of the domain.
        r_grid (vector): Thresholds `R`.
        restricted (vector): Normalised Frobenius numbers of the restricted
            ensemble.
        full (vector): Normalised Frobenius numbers of the full ensemble.
    """

    def __init__(self, sys, domain, T, r_grid, restricted, full):
        self.n = sys.n
        self.m = sys.m
        self.classes = [list(c) for c in sys.classes]
        self.domain = [domain.lower.tolist(), domain.upper.tolist()]
        self.T = T
        self.restricted = PsiEstimate(r_grid, restricted, T, sys.n)
        self.full = PsiEstimate(r_grid, full, T, sys.n)
        orbits = astar_count(sys)
        self.astar = orbits.astar
        self.index = orbits.index
        self.density = float(orbits.density)
        if self.full.count == 0:
            raise ValidationError('--domain', 'contains no primitive rows')
        self.count_ratio = self.restricted.count / self.full.count
        self.i_a_estimate = self.count_ratio * orbits.index
        self.ks = (ks_distance(restricted, full)
                   if self.restricted.count > 0 else 1.0)
        self.schema_version = SCHEMA_VERSION

    def rows(self):
        """Rows `R, restricted_tail, full_tail, restricted_norm, full_norm`.

        Returns:
            list[tuple]: Rows.
        """
        return list(zip(self.restricted.r_grid.tolist(),
                        self.restricted.tails.tolist(),
                        self.full.tails.tolist(),
                        self.restricted.norm.tolist(),
                        self.full.norm.tolist()))

    def __repr__(self):
        return 'CensusReport(T={}, m={}, count_ratio={}, ks={})' \
               ''.format(self.T, self.m, self.count_ratio, self.ks)


def _census_shard(args):
    sys, lower, upper, smallest = args
    n = sys.n
    full, restricted = [], []
    top = int(np.max(upper))
    for tail in combinations_with_replacement(range(smallest, top + 1), n):
        a = (smallest,) + tail
        if gcd_all(a) != 1:
            continue
        arrangements = [row for row in set(permutations(a))
                        if all(lo <= x <= hi
                               for x, lo, hi in zip(row, lower, upper))]
        if not arrangements:
            continue
        value = frobenius_number(a) / check_int128(prod(a)) ** (1 / n)
        rows = np.array(arrangements, dtype=np.int64)
        hits = int(np.sum(sys.contains_rows(rows[:, :-1], rows[:, -1])))
        full.extend([value] * len(rows))
        restricted.extend([value] * hits)
    return full, restricted


def frobenius_census(sys, domain, T, r_grid, workers=1, progress=False):
    """Normalised Frobenius numbers over the primitive rows with entries at
    least two in the dilated domain `T D`, restricted to a residue system
    and unrestricted.

    Args:
        sys (:class:`.congruence.ResidueSystem`): Residue system with
            `n >= 2`.
        domain (:class:`.region.Box`): Box in the nonnegative orthant of
            dimension `n + 1`.
        T (int): Dilation.
        r_grid (vector): Thresholds `R`.
        workers (int, optional): Number of processes.
        progress (bool, optional): Show a progress bar.

    Returns:
        :class:`.frobenius.CensusReport`: Report.
    """
    n = sys.n
    if n < 2:
        raise ValidationError('--n', 'the census requires n >= 2')
    if not isinstance(domain, Box) or domain.n != n + 1:
        raise ValidationError('--domain', 'must be a box of dimension {}'
                                          ''.format(n + 1))
    if np.any(domain.lower < 0):
        raise ValidationError('--domain', 'must lie in the nonnegative '
                                          'orthant')
    if T < 1:
        raise ValidationError('--t', 'must be at least one')
    lower = np.maximum(2, np.ceil(T * domain.lower)).astype(np.int64)
    upper = np.floor(T * domain.upper).astype(np.int64)
    check_int128(int(np.max(upper)) ** (n + 1), 'product of the entries')
    log.info('Frobenius census over %s with T=%d.', domain, T)

    # Every sorted row is handled by the shard of its smallest entry.
    shards = [(sys, lower.tolist(), upper.tolist(), s)
              for s in range(int(np.min(lower)), int(np.max(upper)) + 1)]
    full, restricted = [], []
    size = max(1, 4 * workers)
    with tqdm(total=len(shards), desc='Census', disable=not progress) as bar:
        for start in range(0, len(shards), size):
            for f, r in parallel_map(_census_shard,
                                     shards[start:start + size],
                                     workers=workers):
                full.extend(f)
                restricted.extend(r)
            bar.update(len(shards[start:start + size]))
    log.info('Census found %d rows, %d restricted.',
             len(full), len(restricted))
    return CensusReport(sys, domain, T, r_grid, restricted, full)
