from itertools import product
from math import gcd
from typing import Union

import numpy as np
from lab import B
from numpy.testing import assert_array_almost_equal
from plum import dispatch

from fareystat.util import gcd_all

__all__ = ['to_np',
           'allclose',
           'approx',
           'totient',
           'farey_bruteforce',
           'window_count_bruteforce',
           'dio_count_bruteforce']


@dispatch
def to_np(a: B.Numeric):
    return a


@dispatch
def to_np(a: tuple):
    return tuple(to_np(x) for x in a)


@dispatch
def to_np(a: list):
    return np.array(a)


@dispatch
def allclose(a: Union[B.Numeric, list], b: Union[B.Numeric, list],
             desc=None, atol=1e-8, rtol=1e-8):
    np.testing.assert_allclose(to_np(a), to_np(b),
                               atol=atol, rtol=rtol, err_msg=desc)


@dispatch
def allclose(a: tuple, b: tuple, desc=None, atol=1e-8, rtol=1e-8):
    assert len(a) == len(b)
    for x, y in zip(a, b):
        allclose(x, y, desc, atol=atol, rtol=rtol)


approx = assert_array_almost_equal


def totient(q):
    """Euler's totient by counting."""
    return sum(1 for p in range(q) if gcd(p, q) == 1)


def farey_bruteforce(n, Q, sys):
    """All canonical rows `(p, q)` of a restricted Farey sequence, by a
    plain loop over every candidate."""
    rows = []
    for q in range(1, Q + 1):
        for p in product(range(sys.m * q), repeat=n):
            row = p + (q,)
            if gcd_all(row) != 1:
                continue
            if tuple(x % sys.m for x in row) in sys.classes:
                rows.append(row)
    return rows


def window_count_bruteforce(fset, x, s, lower, upper):
    """Count points in the box window `x + s [lower, upper]` on the torus by
    a linear scan over all points and all shifts by `m`."""
    x = np.atleast_1d(x)
    count = 0
    for point in fset.positions:
        found = False
        for shift in product((-1, 0, 1), repeat=fset.n):
            a = (point + fset.m * np.array(shift) - x) / s
            if np.all(a >= lower) and np.all(a <= upper):
                found = True
        count += found
    return count


def dio_count_bruteforce(x, q_range, radius, sys):
    """Count `(p, q)` in a residue system with `|qx - p| <= radius(q)` for
    `n = 1`, by scanning a wide range of numerators."""
    count = 0
    for q in q_range:
        r = radius(q)
        centre = int(round(q * x))
        for p in range(centre - 3, centre + 4):
            if abs(q * x - p) <= r and gcd(p, q) == 1 and \
                    (p % sys.m, q % sys.m) in sys.classes:
                count += 1
    return count
