import logging

import numpy as np
from plum import Dispatcher

from .region import Box, Ball

__all__ = ['GENERATOR', 'RandomStream', 'sample_uniform', 'batch_sizes']

log = logging.getLogger(__name__)

_dispatch = Dispatcher()

#: Recorded in every stochastic report.
GENERATOR = 'numpy.PCG64/SeedSequence.spawn'


class RandomStream:
    """A seeded source of independent per-batch generators.

    Batch `i` always draws from the `i`-th child of the seed sequence, so
    results do not depend on how batches are distributed over workers.

    Args:
        seed (int): 64-bit master seed.
    """

    def __init__(self, seed):
        seed = int(seed)
        if not 0 <= seed < 2 ** 64:
            raise ValueError('Seed must be a 64-bit unsigned integer.')
        self.seed = seed

    def generators(self, num):
        """Generators for the first `num` batches.

        Args:
            num (int): Number of batches.

        Returns:
            list[:class:`numpy.random.Generator`]: Generators.
        """
        children = np.random.SeedSequence(self.seed).spawn(num)
        return [np.random.Generator(np.random.PCG64(child))
                for child in children]

    def seeds(self, num):
        """Child seed sequences for the first `num` batches, to ship to
        worker processes.

        Args:
            num (int): Number of batches.

        Returns:
            list[:class:`numpy.random.SeedSequence`]: Seed sequences.
        """
        return np.random.SeedSequence(self.seed).spawn(num)

    def __repr__(self):
        return 'RandomStream(seed={})'.format(self.seed)


def batch_sizes(samples, batch_size):
    """Split a number of samples into batches.

    Args:
        samples (int): Total number of samples.
        batch_size (int): Maximum batch size.

    Returns:
        list[int]: Batch sizes.
    """
    if samples < 1:
        raise ValueError('Number of samples must be at least one.')
    full, rest = divmod(samples, batch_size)
    return [batch_size] * full + ([rest] if rest else [])


@_dispatch
def sample_uniform(test_set: Box, num: int, generator):
    """Sample uniformly from a test set.

    Args:
        test_set (:class:`.region.TestSet`): Set to sample from.
        num (int): Number of samples.
        generator (:class:`numpy.random.Generator`): Source of randomness.

    Returns:
        matrix: Samples, one per row.
    """
    return generator.uniform(test_set.lower, test_set.upper,
                             size=(num, test_set.n))


@_dispatch
def sample_uniform(test_set: Ball, num: int, generator):
    # Rejection sampling in the bounding box.
    lower, upper = test_set.bounding_box()
    accepted, total = [], 0
    while total < num:
        x = generator.uniform(lower, upper, size=(2 * num, test_set.n))
        x = x[test_set.contains(x)]
        accepted.append(x)
        total += len(x)
    return np.concatenate(accepted, axis=0)[:num]
