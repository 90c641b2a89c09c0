import logging
from fractions import Fraction
from functools import lru_cache
from math import factorial, gamma, pi

__all__ = ['zeta', 'ball_volume']

log = logging.getLogger(__name__)

# Bernoulli numbers B_2, B_4, ..., B_14.
_bernoulli = [Fraction(1, 6),
              Fraction(-1, 30),
              Fraction(1, 42),
              Fraction(-1, 30),
              Fraction(5, 66),
              Fraction(-691, 2730),
              Fraction(7, 6)]


@lru_cache(maxsize=None)
def zeta(s, terms=20):
    """Riemann zeta function for real `s > 1`.

    Sums the first terms of the series directly and adds the
    Euler-Maclaurin tail, which is accurate to well below `1e-12` for the
    arguments used here.

    Args:
        s (float): Argument. Must be larger than one.
        terms (int, optional): Number of terms summed directly.

    Returns:
        float: :math:`\\zeta(s)`.
    """
    if s <= 1:
        raise ValueError('Zeta is only evaluated for s > 1.')
    s = float(s)
    n = terms
    head = sum(k ** -s for k in range(1, n))
    tail = n ** (1 - s) / (s - 1) + n ** -s / 2
    rising = s  # s (s + 1) ... (s + 2j - 2)
    for j, b in enumerate(_bernoulli, 1):
        tail += float(b) / factorial(2 * j) * rising * n ** (-s - 2 * j + 1)
        rising *= (s + 2 * j - 1) * (s + 2 * j)
    return head + tail


def ball_volume(n):
    """Volume of the Euclidean unit ball in `n` dimensions.

    Args:
        n (int): Dimension.

    Returns:
        float: Volume.
    """
    return pi ** (n / 2) / gamma(n / 2 + 1)
