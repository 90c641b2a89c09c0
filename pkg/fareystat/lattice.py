import logging

import lab as B
import numpy as np

from .util import gcd_all, check_int64

__all__ = ['PrimitivePoint',
           'h_matrix',
           'a_matrix',
           'm_matrix',
           'h_dagger',
           'exgcd',
           'complete_to_unimodular',
           'integer_det',
           'horosphere_image']

log = logging.getLogger(__name__)


class PrimitivePoint:
    """A primitive lattice point `(p, q)` with `q >= 1`, representing the
    Farey point `p / q`.

    Args:
        p (sequence[int]): Numerator vector of length `n`.
        q (int): Denominator.
    """

    def __init__(self, p, q):
        self.p = tuple(int(x) for x in np.atleast_1d(p))
        self.q = int(q)
        if self.q < 1:
            raise ValueError('Denominator must be at least one.')
        if gcd_all(self.p + (self.q,)) != 1:
            raise ValueError('Point {} is not primitive.'.format(self))
        for x in self.p:
            check_int64(x, 'numerator')
        check_int64(self.q, 'denominator')

    @property
    def n(self):
        """Dimension of the torus the Farey point lives on."""
        return len(self.p)

    @property
    def row(self):
        """The integer row `(p, q)`."""
        return self.p + (self.q,)

    def position(self):
        """The Farey point `p / q` as a float vector."""
        return np.array(self.p, dtype=np.float64) / self.q

    def __eq__(self, other):
        return isinstance(other, PrimitivePoint) and self.row == other.row

    def __hash__(self):
        return hash(self.row)

    def __repr__(self):
        return 'PrimitivePoint(p={!r}, q={!r})'.format(self.p, self.q)


def _vector(x):
    return np.atleast_1d(np.asarray(x, dtype=np.float64))


def h_matrix(x):
    """Horospherical element :math:`h(x)`.

    Args:
        x (vector): Point of :math:`\\mathbb{R}^n`.

    Returns:
        matrix: Identity with bottom-left row `-x`, of order `n + 1`.
    """
    x = _vector(x)
    n = B.shape(x)[0]
    top = B.concat(B.eye(np.float64, n), B.zeros(np.float64, n, 1), axis=1)
    bottom = B.concat(-x[None, :], B.ones(np.float64, 1, 1), axis=1)
    return B.concat(top, bottom, axis=0)


def a_matrix(y, n):
    """Diagonal flow :math:`a(y) = \\mathrm{diag}(y^{1/n} I_n, y^{-1})`.

    Args:
        y (float): Positive time.
        n (int): Dimension.

    Returns:
        matrix: Element of order `n + 1` with determinant one.
    """
    if y <= 0:
        raise ValueError('Flow parameter must be positive.')
    return B.diag(np.array([y ** (1 / n)] * n + [1 / y], dtype=np.float64))


def m_matrix(y):
    """The element :math:`m(y)`, which is
    :math:`(y_1 \\cdots y_n)^{-1/n} \\mathrm{diag}(y_1, \\ldots, y_n)` in the
    top-left block and one in the corner.

    Args:
        y (vector): Vector with positive entries.

    Returns:
        matrix: Element of order `n + 1` with determinant one.
    """
    y = _vector(y)
    if np.any(y <= 0):
        raise ValueError('All components must be positive.')
    n = B.shape(y)[0]
    scale = np.exp(-np.sum(np.log(y)) / n)
    return B.diag(np.concatenate([scale * y, [1.0]]))


def h_dagger(y):
    """Inverse transpose of :math:`h(y)`.

    Args:
        y (vector): Point of :math:`\\mathbb{R}^n`.

    Returns:
        matrix: Identity with last column `(y, 1)`.
    """
    return B.transpose(B.inv(h_matrix(y)))


def horosphere_image(rows, x, y):
    """Map integer rows `(p, q)` to `(p, q) h(x) a(y)`.

    Args:
        rows (matrix): Rows `(p, q)`, one per row.
        x (vector): Point of the torus.
        y (float): Flow parameter.

    Returns:
        matrix: Images, one per row.
    """
    rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
    n = B.shape(rows)[1] - 1
    return B.matmul(B.matmul(rows, h_matrix(x)), a_matrix(y, n))


def exgcd(a, b):
    """Extended Euclid as a matrix.

    Args:
        a (int): First integer.
        b (int): Second integer.

    Returns:
        list[list[int]]: An integer matrix `M` of determinant one such that
            `M [a, b]^T = [gcd(a, b), 0]^T` with `gcd(a, b) >= 0`.
    """
    a, b = int(a), int(b)
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        k = old_r // r
        old_r, r = r, old_r - k * r
        old_s, s = s, old_s - k * s
        old_t, t = t, old_t - k * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    g = old_r
    if g == 0:
        return [[1, 0], [0, 1]]
    return [[old_s, old_t], [-b // g, a // g]]


def complete_to_unimodular(a):
    """Find :math:`\\gamma \\in \\mathrm{SL}(n + 1, \\mathbb{Z})` with
    :math:`\\gamma a^t = e_{n+1}^t`.

    Every entry is cleared against the last one by a determinant-one
    extended-gcd step, so the product is unimodular by construction.

    Args:
        a (sequence[int]): Primitive integer row of length `n + 1`.

    Returns:
        list[list[int]]: Integer matrix `gamma`. Any valid completion may be
            returned.
    """
    a = [int(x) for x in a]
    if gcd_all(a) != 1:
        raise ValueError('Row {} is not primitive.'.format(tuple(a)))
    k = len(a)
    last = k - 1
    gamma = [[int(i == j) for j in range(k)] for i in range(k)]
    v = list(a)
    for i in range(last):
        if v[i] == 0:
            continue
        (m00, m01), (m10, m11) = exgcd(v[last], v[i])
        v[last], v[i] = m00 * v[last] + m01 * v[i], m10 * v[last] + m11 * v[i]
        row_last, row_i = gamma[last], gamma[i]
        gamma[last] = [m00 * x + m01 * y for x, y in zip(row_last, row_i)]
        gamma[i] = [m10 * x + m11 * y for x, y in zip(row_last, row_i)]
    if v[last] == -1:
        # Flip two rows to fix the sign and keep the determinant.
        gamma[last] = [-x for x in gamma[last]]
        gamma[0] = [-x for x in gamma[0]]
    return gamma


def integer_det(matrix):
    """Exact determinant of a small integer matrix by cofactor expansion.

    Args:
        matrix (list[list[int]]): Square integer matrix.

    Returns:
        int: Determinant.
    """
    k = len(matrix)
    if k == 1:
        return int(matrix[0][0])
    det = 0
    for j in range(k):
        if matrix[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        det += (-1) ** j * int(matrix[0][j]) * integer_det(minor)
    return det
