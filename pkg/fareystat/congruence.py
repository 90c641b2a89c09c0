import logging
from fractions import Fraction
from itertools import product
from math import gcd

import numpy as np

from .util import (
    gcd_all,
    check_int64,
    ValidationError,
    EnumerationTooLargeError
)

__all__ = ['ResidueSystem',
           'OrbitCount',
           'contains',
           'factorize',
           'sl_order',
           'unimodular_row_count',
           'astar_count',
           'astar_bruteforce']

log = logging.getLogger(__name__)


def factorize(m):
    """Prime factorisation by trial division.

    Args:
        m (int): Positive integer.

    Returns:
        dict[int, int]: Map from primes to exponents.
    """
    if m < 1:
        raise ValueError('Can only factorise positive integers.')
    factors = {}
    p = 2
    while p * p <= m:
        while m % p == 0:
            factors[p] = factors.get(p, 0) + 1
            m //= p
        p += 1
    if m > 1:
        factors[m] = factors.get(m, 0) + 1
    return factors


class ResidueSystem:
    """The set :math:`\\mathbf{A} = \\bigcup_j a_j \\Gamma(m)`, given by the
    residues of the :math:`a_j` modulo `m`.

    Args:
        n (int): Dimension of the torus; rows have length `n + 1`.
        m (int): Modulus. `m = 1` is the full set of primitive points.
        classes (iterable[sequence[int]], optional): Residue rows. Duplicates
            modulo `m` collapse. Ignored for `m = 1`.
    """

    def __init__(self, n, m=1, classes=()):
        if n < 1:
            raise ValidationError('--n', 'must be at least one')
        if m < 1:
            raise ValidationError('--modulus', 'must be at least one')
        check_int64(m ** (n + 1), 'modulus power')
        self.n = n
        self.m = m

        rows = set()
        for row in classes:
            row = tuple(int(x) % m for x in row)
            if len(row) != n + 1:
                raise ValidationError('--class',
                                      'row {} does not have {} entries'
                                      ''.format(row, n + 1))
            if gcd(gcd_all(row), m) != 1:
                raise ValidationError('--class',
                                      'row {} is not the reduction of a '
                                      'primitive vector mod {}'.format(row, m))
            rows.add(row)
        if m == 1:
            rows = {(0,) * (n + 1)}
        elif not rows:
            raise ValidationError('--class',
                                  'at least one class is required when '
                                  '--modulus > 1')
        self.classes = tuple(sorted(rows))

        # Integer codes of the rows for vectorised membership.
        self._weights = m ** np.arange(n + 1, dtype=np.int64)
        self.codes = np.array(sorted(np.dot(row, self._weights)
                                     for row in self.classes), dtype=np.int64)

    @classmethod
    def full(cls, n, m=1):
        """All primitive residue rows modulo `m`, i.e. every Farey point
        viewed on the torus of side `m`.

        Args:
            n (int): Dimension.
            m (int, optional): Modulus.

        Returns:
            :class:`.congruence.ResidueSystem`: Residue system.
        """
        rows = [row for row in product(range(m), repeat=n + 1)
                if gcd(gcd_all(row), m) == 1]
        return cls(n, m, rows)

    def complement(self):
        """The residue system of the remaining primitive rows.

        Returns:
            :class:`.congruence.ResidueSystem`: Complement.
        """
        if self.m == 1:
            raise ValueError('The full set has an empty complement.')
        mine = set(self.classes)
        return ResidueSystem(self.n, self.m,
                             [row for row in ResidueSystem.full(self.n,
                                                                self.m).classes
                              if row not in mine])

    @property
    def lattice_index(self):
        """Index :math:`[\\mathbb{Z}^n : \\Lambda_\\Delta] = m^n`."""
        return self.m ** self.n

    def prefixes(self, q):
        """Residues of `p` admissible for a given denominator.

        Args:
            q (int): Denominator.

        Returns:
            list[tuple[int]]: Rows `r'` such that `(r', q mod m)` is a class.
        """
        tail = q % self.m
        return [row[:-1] for row in self.classes if row[-1] == tail]

    def contains_rows(self, p, q):
        """Vectorised membership.

        Args:
            p (matrix): Numerators, shape `(..., n)`.
            q (tensor): Denominators, broadcastable to `p[..., 0]`.

        Returns:
            tensor: Boolean membership of `(p, q)`.
        """
        if self.m == 1:
            return np.ones(np.broadcast(p[..., 0], q).shape, dtype=bool)
        p = np.mod(p, self.m)
        q = np.mod(q, self.m)
        code = np.dot(p, self._weights[:-1]) + q * self._weights[-1]
        return np.isin(code, self.codes)

    def __eq__(self, other):
        return (isinstance(other, ResidueSystem) and
                (self.n, self.m, self.classes) ==
                (other.n, other.m, other.classes))

    def __hash__(self):
        return hash((self.n, self.m, self.classes))

    def __repr__(self):
        return 'ResidueSystem(n={}, m={}, classes={!r})' \
               ''.format(self.n, self.m, list(self.classes))


class OrbitCount:
    """Exact orbit data of a residue system.

    Args:
        astar (int): :math:`\\#\\mathbf{A}^*`.
        index (int): :math:`[\\Gamma : \\Gamma(m)]`.
    """

    def __init__(self, astar, index):
        self.astar = astar
        self.index = index
        self.density = Fraction(astar, index)

    def __eq__(self, other):
        return (isinstance(other, OrbitCount) and
                (self.astar, self.index, self.density) ==
                (other.astar, other.index, other.density))

    def __repr__(self):
        return 'OrbitCount(astar={}, index={}, density={})' \
               ''.format(self.astar, self.index, self.density)


def contains(sys, pt):
    """Check whether a primitive point lies in a residue system.

    Args:
        sys (:class:`.congruence.ResidueSystem`): Residue system.
        pt (:class:`.lattice.PrimitivePoint`): Point.

    Returns:
        bool: Membership.
    """
    return tuple(x % sys.m for x in pt.row) in set(sys.classes)


def sl_order(k, m):
    """Order of :math:`\\mathrm{SL}(k, \\mathbb{Z}/m\\mathbb{Z})`.

    Args:
        k (int): Matrix size, at least two.
        m (int): Modulus.

    Returns:
        int: Group order.
    """
    if k < 2:
        raise ValueError('Matrix size must be at least two.')
    order = 1
    for p, e in factorize(m).items():
        field = p ** (k * (k - 1) // 2)
        for i in range(2, k + 1):
            field *= p ** i - 1
        order *= p ** ((e - 1) * (k * k - 1)) * field
    return check_int64(order, 'group order')


def unimodular_row_count(n, m):
    """Number of rows modulo `m` of length `n + 1` which are coprime to `m`.

    Args:
        n (int): Dimension.
        m (int): Modulus.

    Returns:
        int: Count.
    """
    count = 1
    for p, e in factorize(m).items():
        count *= p ** (e * (n + 1)) - p ** ((e - 1) * (n + 1))
    return count


def astar_count(sys):
    """Exact :math:`\\#\\mathbf{A}^*` and density of a residue system.

    Every class row is one orbit point of the transitive action on
    primitive rows, whose stabilisers all have `sl_order / U(m)` elements.

    Args:
        sys (:class:`.congruence.ResidueSystem`): Residue system.

    Returns:
        :class:`.congruence.OrbitCount`: Orbit data.
    """
    index = sl_order(sys.n + 1, sys.m)
    stabiliser = index // unimodular_row_count(sys.n, sys.m)
    return OrbitCount(len(sys.classes) * stabiliser, index)


def _batch_det(mats):
    # Exact cofactor expansion over the last two axes.
    k = mats.shape[-1]
    if k == 1:
        return mats[..., 0, 0]
    det = np.zeros(mats.shape[:-2], dtype=np.int64)
    for j in range(k):
        minor = np.delete(mats[..., 1:, :], j, axis=-1)
        det += (-1) ** j * mats[..., 0, j] * _batch_det(minor)
    return det


def astar_bruteforce(sys, max_elements=10 ** 5):
    """Count :math:`\\#\\mathbf{A}^*` by enumerating
    :math:`\\mathrm{SL}(n + 1, \\mathbb{Z}/m\\mathbb{Z})`.

    Args:
        sys (:class:`.congruence.ResidueSystem`): Residue system.
        max_elements (int, optional): Largest number of matrices to
            enumerate.

    Returns:
        :class:`.congruence.OrbitCount`: Orbit data.
    """
    k, m = sys.n + 1, sys.m
    total = m ** (k * k)
    if total > max_elements:
        raise EnumerationTooLargeError('Enumerating {} matrices exceeds the '
                                       'bound of {}.'.format(total,
                                                             max_elements))
    log.debug('Enumerating %d matrices modulo %d.', total, m)
    mats = np.array(list(product(range(m), repeat=k * k)),
                    dtype=np.int64).reshape(-1, k, k)
    group = mats[np.mod(_batch_det(mats), m) == 1 % m]

    # Right action of the group on the class rows.
    classes = np.array(sys.classes, dtype=np.int64)
    images = np.mod(np.einsum('jk,gkl->gjl', classes, group), m)
    target = np.zeros(k, dtype=np.int64)
    target[-1] = 1 % m
    hits = np.any(np.all(images == target, axis=-1), axis=-1)
    return OrbitCount(int(np.sum(hits)), len(group))
