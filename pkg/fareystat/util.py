import logging
from concurrent.futures import ProcessPoolExecutor
from functools import reduce, wraps
from math import gcd
from types import FunctionType
from typing import Union

import lab as B
import numpy as np
from plum import Dispatcher

__all__ = ['FareystatError',
           'ValidationError',
           'NumericOverflowError',
           'WindowTooLargeError',
           'EnumerationTooLargeError',
           'EmptyIntersectionError',
           'uprank',
           'gcd_all',
           'check_int64',
           'check_int128',
           'parallel_map',
           'SCHEMA_VERSION']

log = logging.getLogger(__name__)

_dispatch = Dispatcher()

#: Version of every emitted report.
SCHEMA_VERSION = 1

INT64_MAX = 2 ** 63 - 1
INT128_MAX = 2 ** 127 - 1


class FareystatError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(FareystatError, ValueError):
    """Invalid parameter.

    Args:
        field (str): Name of the offending parameter, e.g. `--c`.
        message (str): Description of the problem.
    """

    def __init__(self, field, message):
        self.field = field
        self.message = message
        FareystatError.__init__(self, '{}: {}'.format(field, message))


class NumericOverflowError(FareystatError, OverflowError):
    """An integer left the fixed-width range it must be stored in."""


class WindowTooLargeError(FareystatError, ValueError):
    """A scaled test set does not fit inside one fundamental domain."""


class EnumerationTooLargeError(FareystatError, RuntimeError):
    """A brute-force enumeration exceeds its size bound."""


class EmptyIntersectionError(FareystatError, ValueError):
    """A statistic was requested over an empty set of points."""


@_dispatch
def uprank(x: B.Numeric):
    """Ensure that `x` is a rank-2 batch of points, one point per row.

    Args:
        x (tensor): Point, batch of points, or scalar.

    Returns:
        tensor: `x` as a matrix with one point per row.
    """
    x = np.asarray(x, dtype=np.float64)
    rank = B.rank(x)
    if rank > 2:
        raise ValueError('Input must be at most rank 2.')
    elif rank == 2:
        return x
    elif rank == 1:
        # A single point.
        return B.expand_dims(x, axis=0)
    else:
        # Rank must be 0.
        return B.expand_dims(B.expand_dims(x, axis=0), axis=1)


@_dispatch
def uprank(x: Union[list, tuple]):
    return uprank(np.asarray(x, dtype=np.float64))


@_dispatch
def uprank(f: FunctionType):
    """A decorator to ensure that the rank of the arguments is two."""

    @wraps(f)
    def wrapped_f(*args):
        return f(*[uprank(x) for x in args])

    return wrapped_f


@_dispatch
def gcd_all(v: Union[list, tuple]):
    """Greatest common divisor of the entries of an integer row.

    Args:
        v (sequence): Integer entries.

    Returns:
        int: Nonnegative gcd. The gcd of an empty or all-zero row is zero.
    """
    return reduce(gcd, (abs(int(x)) for x in v), 0)


@_dispatch
def gcd_all(v: B.NPNumeric):
    v = np.asarray(v)
    if v.ndim == 1:
        return gcd_all(v.tolist())
    # Row-wise for batches.
    return np.gcd.reduce(np.abs(v.astype(np.int64)), axis=-1)


def check_int64(value, what='value'):
    """Check that an integer fits the signed 64-bit range.

    Args:
        value (int): Integer to check.
        what (str, optional): Description used in the error message.

    Returns:
        int: `value`.
    """
    if abs(int(value)) > INT64_MAX:
        raise NumericOverflowError('{} = {} overflows 64-bit integers.'
                                   ''.format(what, value))
    return value


def check_int128(value, what='value'):
    """Check that an integer fits the signed 128-bit range.

    Args:
        value (int): Integer to check.
        what (str, optional): Description used in the error message.

    Returns:
        int: `value`.
    """
    if abs(int(value)) > INT128_MAX:
        raise NumericOverflowError('{} = {} overflows 128-bit integers.'
                                   ''.format(what, value))
    return value


def parallel_map(f, args, workers=1):
    """Map a picklable function over arguments, preserving order.

    The result never depends on `workers`.

    Args:
        f (function): Module-level function of one argument.
        args (iterable): Arguments.
        workers (int, optional): Number of processes. Defaults to one, which
            runs in the current process.

    Returns:
        list: `[f(arg) for arg in args]`.
    """
    args = list(args)
    if workers <= 1 or len(args) <= 1:
        return [f(arg) for arg in args]
    log.debug('Mapping %s over %d tasks with %d workers.',
              f.__name__, len(args), workers)
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(f, args))
