import logging

import numpy as np
from plum import Dispatcher

from .congruence import ResidueSystem, astar_count
from .lattice import PrimitivePoint
from .special import zeta
from .util import EmptyIntersectionError, check_int64, parallel_map

__all__ = ['FareySet',
           'GrowthReport',
           'stream',
           'enumerate_farey',
           'count_farey',
           'canonical',
           'sigma',
           'sigma_growth',
           'growth_check',
           'gaps_1d',
           'neighbor_determinants',
           'farey_neighbors']

log = logging.getLogger(__name__)

_dispatch = Dispatcher()


def _grid(q, n):
    # All vectors of [0, q)^n in lexicographic order.
    return np.indices((q,) * n, dtype=np.int64).reshape(n, -1).T


def _block(n, q, sys):
    m = sys.m
    prefixes = sys.prefixes(q)
    if not prefixes:
        return np.zeros((0, n), dtype=np.int64)
    base = _grid(q, n)
    blocks = []
    for prefix in prefixes:
        p = np.array(prefix, dtype=np.int64) + m * base
        g = np.full(len(p), q, dtype=np.int64)
        for i in range(n):
            g = np.gcd(g, p[:, i])
        blocks.append(p[g == 1])
    p = np.concatenate(blocks, axis=0)
    if len(prefixes) > 1:
        p = p[np.lexsort(p.T[::-1])]
    return p


def stream(n, Q, sys=None, q_range=None):
    """Stream a restricted Farey sequence in blocks of equal denominator.

    Numerators are the canonical representatives in :math:`[0, mq)^n`.
    Blocks come ordered by denominator and, within a block, numerators come
    in lexicographic order.

    Args:
        n (int): Dimension.
        Q (int): Level.
        sys (:class:`.congruence.ResidueSystem`, optional): Residue system.
            Defaults to the full set.
        q_range (tuple[int, int], optional): Half-open range of denominators
            to restrict to. Defaults to `[1, Q + 1)`.

    Yields:
        tuple[int, matrix]: Denominator and numerators, one per row.
    """
    sys = ResidueSystem(n) if sys is None else sys
    if Q < 1:
        raise ValueError('Level must be at least one.')
    if sys.n != n:
        raise ValueError('Residue system has dimension {}, expected {}.'
                         ''.format(sys.n, n))
    check_int64(sys.m * Q, 'numerator range')
    start, stop = (1, Q + 1) if q_range is None else q_range
    for q in range(max(start, 1), min(stop, Q + 1)):
        yield q, _block(n, q, sys)


def _count_range(args):
    n, Q, sys, q_range = args
    return sum(len(p) for _, p in stream(n, Q, sys, q_range))


def count_farey(n, Q, sys=None, workers=1, shards=16):
    """Count a restricted Farey sequence without storing it.

    Args:
        n (int): Dimension.
        Q (int): Level.
        sys (:class:`.congruence.ResidueSystem`, optional): Residue system.
        workers (int, optional): Number of processes.
        shards (int, optional): Number of denominator ranges.

    Returns:
        int: Number of points.
    """
    sys = ResidueSystem(n) if sys is None else sys
    edges = np.unique(np.linspace(1, Q + 1, shards + 1).astype(int))
    ranges = [(n, Q, sys, (int(a), int(b)))
              for a, b in zip(edges[:-1], edges[1:])]
    count = sum(parallel_map(_count_range, ranges, workers=workers))
    log.info('Counted %d Farey points (n=%d, Q=%d, m=%d).',
             count, n, Q, sys.m)
    return check_int64(count, 'count')


class FareySet:
    """A materialised restricted Farey sequence of level `Q`.

    Args:
        n (int): Dimension.
        Q (int): Level.
        sys (:class:`.congruence.ResidueSystem`): Residue system.
        q (vector): Denominators.
        p (matrix): Canonical numerators, one per row.
    """

    def __init__(self, n, Q, sys, q, p):
        self.n = n
        self.Q = Q
        self.sys = sys
        self.q = q
        self.p = p
        self._positions = None

    @property
    def m(self):
        """Side of the torus."""
        return self.sys.m

    @property
    def count(self):
        """Number of points."""
        return len(self.q)

    def __len__(self):
        return self.count

    def __iter__(self):
        for p, q in zip(self.p, self.q):
            yield PrimitivePoint(p, q)

    @property
    def positions(self):
        """Farey points `p / q` on the torus :math:`[0, m)^n`."""
        if self._positions is None:
            self._positions = self.p / self.q[:, None]
        return self._positions

    def order(self):
        """Permutation which sorts the points along the circle (`n = 1`).

        Returns:
            vector: Indices.
        """
        if self.n != 1:
            raise ValueError('Points can only be sorted for n = 1.')
        # Distinct fractions with denominators at most `mQ` are much further
        # apart than the float resolution.
        return np.argsort(self.positions[:, 0], kind='stable')

    def __repr__(self):
        return 'FareySet(n={}, Q={}, sys={!r}, count={})' \
               ''.format(self.n, self.Q, self.sys, self.count)


def enumerate_farey(n, Q, sys=None):
    """Materialise a restricted Farey sequence.

    For `n = 1` the points are merged into increasing order of `p / q`. For
    `n > 1` they come in the order of :func:`.farey.stream`.

    Args:
        n (int): Dimension.
        Q (int): Level.
        sys (:class:`.congruence.ResidueSystem`, optional): Residue system.

    Returns:
        :class:`.farey.FareySet`: The points.
    """
    sys = ResidueSystem(n) if sys is None else sys
    qs, ps = [], []
    for q, p in stream(n, Q, sys):
        qs.append(np.full(len(p), q, dtype=np.int64))
        ps.append(p)
    fset = FareySet(n, Q, sys,
                    np.concatenate(qs),
                    np.concatenate(ps, axis=0).reshape(-1, n))
    if n == 1:
        order = fset.order()
        fset = FareySet(n, Q, sys, fset.q[order], fset.p[order])
    log.info('Enumerated %r.', fset)
    return fset


def canonical(p, q, m):
    """Canonical representative of a Farey point on the torus of side `m`.

    Args:
        p (vector): Numerator.
        q (int): Denominator.
        m (int): Modulus.

    Returns:
        vector: Numerator reduced into :math:`[0, mq)^n`.
    """
    return np.mod(np.asarray(p, dtype=np.int64), m * q)


def sigma(n, Q):
    """Growth rate :math:`Q^{n+1} / ((n + 1) \\zeta(n + 1))` of the full
    Farey sequence.

    Args:
        n (int): Dimension.
        Q (float): Level.

    Returns:
        float: Growth rate.
    """
    return Q ** (n + 1) / ((n + 1) * zeta(n + 1))


def sigma_growth(n, Q, sys):
    """Growth rate of a restricted Farey sequence on the torus of side `m`.

    The lattice index is read as :math:`[\\mathbb{Z}^n : \\Lambda_\\Delta]
    = m^n`.

    Args:
        n (int): Dimension.
        Q (float): Level.
        sys (:class:`.congruence.ResidueSystem`): Residue system.

    Returns:
        float: Growth rate.
    """
    return float(astar_count(sys).density) * sys.lattice_index * sigma(n, Q)


class GrowthReport:
    """Observed count against the asymptotic growth rate.

    Args:
        count (int): Number of points.
        sigma (float): Growth rate.
    """

    def __init__(self, count, sigma):
        if sigma <= 0:
            raise ValueError('Growth rate must be positive.')
        self.count = count
        self.sigma = sigma
        self.ratio = count / sigma

    def __repr__(self):
        return 'GrowthReport(count={}, sigma={}, ratio={})' \
               ''.format(self.count, self.sigma, self.ratio)


@_dispatch
def growth_check(fset: FareySet):
    """Compare the size of a Farey sequence with its growth rate.

    Args:
        fset (:class:`.farey.FareySet`): Enumerated points. Alternatively,
            give `n`, `Q` and a residue system to count without storing.

    Returns:
        :class:`.farey.GrowthReport`: Report.
    """
    return GrowthReport(fset.count, sigma_growth(fset.n, fset.Q, fset.sys))


@_dispatch
def growth_check(n: int, Q: int, sys: ResidueSystem):
    return growth_check(n, Q, sys, 1)


@_dispatch
def growth_check(n: int, Q: int, sys: ResidueSystem, workers: int):
    return GrowthReport(count_farey(n, Q, sys, workers=workers),
                        sigma_growth(n, Q, sys))


def gaps_1d(fset):
    """Normalised gaps between consecutive points on the circle of length `m`.

    Args:
        fset (:class:`.farey.FareySet`): Points with `n = 1`.

    Returns:
        vector: Sorted gaps, including the wrap-around gap, scaled by
            `count / m` to have mean one.
    """
    if fset.n != 1:
        raise ValueError('Gaps are only defined for n = 1.')
    if fset.count == 0:
        raise EmptyIntersectionError('The Farey set is empty.')
    x = fset.positions[fset.order(), 0]
    gaps = np.diff(np.concatenate([x, [x[0] + fset.m]]))
    return np.sort(gaps * fset.count / fset.m)


def neighbor_determinants(fset):
    """Determinants `p' q - p q'` of consecutive points on the circle,
    including the wrap-around pair, in exact integer arithmetic.

    Args:
        fset (:class:`.farey.FareySet`): Points with `n = 1`.

    Returns:
        vector: Determinants.
    """
    if fset.count == 0:
        raise EmptyIntersectionError('The Farey set is empty.')
    order = fset.order()
    p, q = fset.p[order, 0], fset.q[order]
    p_next = np.concatenate([p[1:], [p[0] + fset.m * q[0]]])
    q_next = np.concatenate([q[1:], [q[0]]])
    return p_next * q - p * q_next


def farey_neighbors(Q):
    """The classical Farey sequence in :math:`[0, 1)` in increasing order,
    by the next-term recurrence.

    Args:
        Q (int): Level.

    Yields:
        tuple[int, int]: Pairs `(p, q)`.
    """
    a, b, c, d = 0, 1, 1, Q
    yield a, b
    while c < d:
        k = (Q + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
        yield a, b
