import logging
from itertools import product
from math import floor, log as ln

import numpy as np

from .congruence import astar_count
from .random import GENERATOR, RandomStream, batch_sizes, sample_uniform
from .region import ESTRegion, KestenRegion
from .special import zeta, ball_volume
from .util import (
    uprank,
    parallel_map,
    check_int64,
    ValidationError,
    SCHEMA_VERSION
)

__all__ = ['KINDS',
           'DioParams',
           'DioReport',
           'dio_region',
           'satisfies',
           'dio_counts',
           'est_count',
           'kesten_count',
           'predicted_mean',
           'dio_distribution']

log = logging.getLogger(__name__)

#: Supported counting functions.
KINDS = ('est', 'kesten')

# Largest number of candidate numerators held in memory at once.
_CHUNK = 2 * 10 ** 6


class DioParams:
    """Parameters of the Erdős-Szüsz-Turán and Kesten counting functions.

    Args:
        alpha (float): Amplitude.
        Q (int): Level.
        sys (:class:`.congruence.ResidueSystem`): Residue system.
        c (float, optional): Ratio of the denominator range. Required for
            the EST count.
    """

    def __init__(self, alpha, Q, sys, c=None):
        if alpha <= 0:
            raise ValidationError('--alpha', 'must be positive')
        if Q < 1:
            raise ValidationError('--q', 'must be at least one')
        if c is not None and c <= 1:
            raise ValidationError('--c', 'must exceed one')
        self.alpha = float(alpha)
        self.Q = int(Q)
        self.sys = sys
        self.c = None if c is None else float(c)

    @property
    def n(self):
        """Dimension."""
        return self.sys.n

    def denominators(self, kind):
        """Denominators `q` and search radii for one of the counts.

        Args:
            kind (str): `est` or `kesten`.

        Returns:
            tuple[vector, vector]: Denominators and radii
                :math:`\\alpha q^{-1/n}` or :math:`\\alpha Q^{-1/n}`.
        """
        _check_kind(kind)
        if kind == 'est':
            if self.c is None:
                raise ValidationError('--c', 'is required for the EST count')
            q = np.arange(self.Q, floor(self.c * self.Q) + 1, dtype=np.int64)
            radii = self.alpha * q.astype(np.float64) ** (-1 / self.n)
        else:
            q = np.arange(1, self.Q + 1, dtype=np.int64)
            radii = np.full(len(q), self.alpha * self.Q ** (-1 / self.n))
        check_int64(int(q[-1]) * self.sys.m, 'denominator')
        return q, radii

    def __repr__(self):
        return 'DioParams(alpha={}, Q={}, sys={!r}, c={})' \
               ''.format(self.alpha, self.Q, self.sys, self.c)


def _check_kind(kind):
    if kind not in KINDS:
        raise ValidationError('kind', 'must be one of {}'.format(KINDS))


def dio_region(kind, params):
    """The region of :math:`\\mathbb{R}^{n+1}` matching a counting function.

    Args:
        kind (str): `est` or `kesten`.
        params (:class:`.diophantine.DioParams`): Parameters.

    Returns:
        :class:`.region.Region`: `E` or `K` region.
    """
    _check_kind(kind)
    if kind == 'est':
        return ESTRegion(params.alpha, params.c, params.n)
    return KestenRegion(params.alpha, params.n)


def satisfies(kind, params, x, p, q):
    """Test the Diophantine inequality directly, ignoring the residue
    system.

    Args:
        kind (str): `est` or `kesten`.
        params (:class:`.diophantine.DioParams`): Parameters.
        x (matrix): Points, one per row.
        p (matrix): Numerators, one per row.
        q (vector): Denominators.

    Returns:
        vector: Boolean per row.
    """
    _check_kind(kind)
    x, p = uprank(x), uprank(p)
    q = np.atleast_1d(np.asarray(q, dtype=np.float64))
    n = params.n
    dist = np.sqrt(np.sum((q[:, None] * x - p) ** 2, axis=1))
    if kind == 'est':
        return ((dist <= params.alpha * q ** (-1 / n)) &
                (q >= params.Q) & (q <= params.c * params.Q))
    return ((dist <= params.alpha * params.Q ** (-1 / n)) &
            (q >= 1) & (q <= params.Q))


def _candidates(width, n):
    # Offsets covering every integer point of an interval of length `width`.
    return np.array(list(product(range(int(floor(width)) + 1), repeat=n)),
                    dtype=np.int64)


def dio_counts(kind, xs, params):
    """Exact counting function for a batch of points.

    For every denominator only the integer points in the box around `q x`
    of half-width equal to the search radius are tested.

    Args:
        kind (str): `est` or `kesten`.
        xs (matrix): Points, one per row.
        params (:class:`.diophantine.DioParams`): Parameters.

    Returns:
        vector: Number of solutions `(p, q)` in the residue system per point.
    """
    xs = uprank(xs)
    q, radii = params.denominators(kind)
    offsets = _candidates(2 * np.max(radii), params.n)
    counts = np.zeros(len(xs), dtype=np.int64)

    step = max(1, _CHUNK // (len(xs) * len(offsets)))
    for start in range(0, len(q), step):
        q_chunk = q[start:start + step]
        r = radii[start:start + step]
        center = q_chunk[None, :, None] * xs[:, None, :]
        lower = np.ceil(center - r[None, :, None]).astype(np.int64)
        p = lower[:, :, None, :] + offsets[None, None, :, :]
        dist2 = np.sum((p - center[:, :, None, :]) ** 2, axis=-1)
        hit = dist2 <= (r ** 2)[None, :, None] * (1 + 1e-12)
        if not np.any(hit):
            continue

        # The gcd and residue tests only run on the few survivors.
        i_sample, i_q, _ = np.nonzero(hit)
        p_hit = p[hit]
        q_hit = q_chunk[i_q]
        g = q_hit
        for i in range(params.n):
            g = np.gcd(g, p_hit[:, i])
        ok = (g == 1) & params.sys.contains_rows(p_hit, q_hit)
        counts += np.bincount(i_sample[ok], minlength=len(xs))
    return counts


def est_count(x, params):
    """Number of `(p, q)` in the residue system with
    :math:`\\|qx - p\\| \\le \\alpha q^{-1/n}` and :math:`Q \\le q \\le cQ`.

    Args:
        x (vector): Point.
        params (:class:`.diophantine.DioParams`): Parameters.

    Returns:
        int: Count.
    """
    return int(dio_counts('est', uprank(x), params)[0])


def kesten_count(x, params):
    """Number of `(p, q)` in the residue system with
    :math:`\\|qx - p\\| \\le \\alpha Q^{-1/n}` and :math:`1 \\le q \\le Q`.

    Args:
        x (vector): Point.
        params (:class:`.diophantine.DioParams`): Parameters.

    Returns:
        int: Count.
    """
    return int(dio_counts('kesten', uprank(x), params)[0])


def predicted_mean(kind, params):
    """Limiting expectation
    :math:`\\#\\mathbf{A}^* \\lambda(R) / ([\\Gamma : \\Delta] \\zeta(n+1))`
    of a counting function, where `R` is the matching region.

    Args:
        kind (str): `est` or `kesten`.
        params (:class:`.diophantine.DioParams`): Parameters.

    Returns:
        float: Expectation.
    """
    _check_kind(kind)
    n = params.n
    volume = ball_volume(n) * params.alpha ** n
    if kind == 'est':
        volume *= ln(params.c)
    return float(astar_count(params.sys).density) * volume / zeta(n + 1)


class DioReport:
    """Empirical distribution of a counting function.

    Args:
        kind (str): `est` or `kesten`.
        params (:class:`.diophantine.DioParams`): Parameters.
        histogram (vector): Number of samples with each count.
        kmax (int): Counts above `kmax` form the reported tail mass.
        seed (int): Seed.
    """

    def __init__(self, kind, params, histogram, kmax, seed):
        self.kind = kind
        self.n = params.n
        self.Q = params.Q
        self.m = params.sys.m
        self.classes = [list(c) for c in params.sys.classes]
        self.alpha = params.alpha
        self.c = params.c
        self.samples = int(np.sum(histogram))
        self.pmf = {k: int(h) / self.samples
                    for k, h in enumerate(histogram) if h > 0}
        self.mean = float(np.dot(np.arange(len(histogram)), histogram) /
                          self.samples)
        self.positive_fraction = float(1 - histogram[0] / self.samples)
        self.kmax = kmax
        self.tail = float(np.sum(histogram[kmax + 1:]) / self.samples)
        self.predicted_mean = predicted_mean(kind, params)
        self.seed = seed
        self.generator = GENERATOR
        self.schema_version = SCHEMA_VERSION

    def __repr__(self):
        return 'DioReport(kind={!r}, Q={}, mean={}, predicted_mean={})' \
               ''.format(self.kind, self.Q, self.mean, self.predicted_mean)


def _batch(args):
    kind, domain, params, size, seed_seq = args
    generator = np.random.Generator(np.random.PCG64(seed_seq))
    xs = sample_uniform(domain, size, generator)
    return np.bincount(dio_counts(kind, xs, params))


def dio_distribution(kind, domain, params, samples=10 ** 5, seed=0, kmax=16,
                     batch_size=10 ** 4, workers=1):
    """Monte Carlo distribution of a counting function over uniform points.

    Args:
        kind (str): `est` or `kesten`.
        domain (:class:`.region.TestSet`): Where to sample points.
        params (:class:`.diophantine.DioParams`): Parameters.
        samples (int, optional): Number of points.
        seed (int, optional): Seed.
        kmax (int, optional): Counts above `kmax` form the tail mass.
        batch_size (int, optional): Points per batch.
        workers (int, optional): Number of processes.

    Returns:
        :class:`.diophantine.DioReport`: Report.
    """
    _check_kind(kind)
    if domain.n != params.n:
        raise ValidationError('--domain', 'has dimension {}, expected {}'
                                          ''.format(domain.n, params.n))
    sizes = batch_sizes(samples, batch_size)
    seeds = RandomStream(seed).seeds(len(sizes))
    log.info('Sampling the %s count at %d points (Q=%d).',
             kind, samples, params.Q)
    histograms = parallel_map(_batch,
                              [(kind, domain, params, size, seed_seq)
                               for size, seed_seq in zip(sizes, seeds)],
                              workers=workers)
    total = np.zeros(max(len(h) for h in histograms), dtype=np.int64)
    for h in histograms:
        total[:len(h)] += h
    return DioReport(kind, params, total, kmax, seed)
