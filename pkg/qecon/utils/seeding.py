"""Counter-based seed derivation shared by the randomized algorithms.

Every random stream in qecon is derived from one master seed and a tuple of
non-negative integer counters (block index, restart index, ...). Because the
derivation never depends on execution order, work split over any number of
processes reproduces the sequential result bit for bit.
"""
import zlib

import numpy as np

__all__ = ['DEFAULT_SEED', 'derive_seed', 'name_key', 'rng_for']

DEFAULT_SEED = 12345


def derive_seed(seed, *counters):
    """Return the `np.random.SeedSequence` for `seed` and `counters`."""
    if seed is None:
        seed = DEFAULT_SEED
    entropy = [int(seed)] + [int(c) for c in counters]
    if any(value < 0 for value in entropy):
        raise ValueError('Seeds and counters must be non-negative, got '
                         '{}'.format(entropy))
    return np.random.SeedSequence(entropy)


def name_key(name):
    """Stable integer key for a name, independent of PYTHONHASHSEED."""
    return zlib.crc32(name.encode('utf-8'))


def rng_for(seed, *counters):
    """Return a `np.random.Generator` seeded from `derive_seed`."""
    return np.random.default_rng(derive_seed(seed, *counters))
