'''
Reproducible random streams.

Every stochastic piece of the package draws from an `RngStream`, a numpy
`Generator` that is fully determined by a (seed, stream id) pair. Child seeds
for sub-experiments are derived with `derive_seed`, such that the results are
deterministic functions of a single master seed, independent of the order in
which (or the process in which) the streams are used.

Example:
    >>> a = RngStream(42, stream=3)
    >>> b = RngStream(42, stream=3)
    >>> bool(np.all(a.geometric(0.3, size=10) == b.geometric(0.3, size=10)))
    True
    >>> c = RngStream(42, stream=4)
    >>> bool(np.all(RngStream(42, 3).random(5) == c.random(5)))
    False
    >>> derive_seed(42, 1, 2) == derive_seed(42, 1, 2)
    True
    >>> derive_seed(42, 1, 2) == derive_seed(42, 2, 1)
    False
    >>> 0 <= derive_seed(7) < 2**64
    True
'''
__all__ = ['RngStream', 'derive_seed']

import numpy as np


def derive_seed(seed, *keys):
    '''
    Derive a 64-bit child seed from a master seed and a sequence of keys.

    Args:
        seed (int):     The master seed (non-negative).
        keys (int):     Arbitrary many non-negative integers that identify the
                        child (e.g. config index, set index, episode index).

    Returns:
        child (int):    A seed in [0, 2**64).
    '''
    if seed < 0 or any(k < 0 for k in keys):
        raise ValueError('Seeds and keys have to be non-negative!')
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


class RngStream(object):
    '''
    A deterministic random stream identified by a seed and a stream id.

    The stream wraps a `numpy.random.Generator` and forwards all attribute
    access to it, hence all its sampling methods (`random`, `integers`,
    `geometric`, ...) can be used directly.

    Args:
        seed (int):     A (64-bit) non-negative seed.
        stream (int):   The id of the stream for the given seed.
    '''

    def __init__(self, seed, stream=0):
        if seed < 0 or stream < 0:
            raise ValueError('Seed and stream id have to be non-negative!')
        self._seed = int(seed)
        self._stream = int(stream)
        self._gen = np.random.default_rng(
                np.random.SeedSequence(self._seed, spawn_key=(self._stream,)))

    @property
    def seed(self):
        return self._seed

    @property
    def stream(self):
        return self._stream

    def child_seed(self, *keys):
        '''A seed derived from this stream's seed, its id and `keys`.'''
        return derive_seed(self._seed, self._stream, *keys)

    def __getattr__(self, name):
        if name.startswith('__') or name == '_gen':
            raise AttributeError(name)
        return getattr(self._gen, name)

    def __repr__(self):
        return 'RngStream(seed=%d, stream=%d)' % (self._seed, self._stream)
