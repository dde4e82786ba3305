"""Counter-based random streams addressed by (seed, run, slot).

Each run owns a Philox stream keyed by ``(seed, run, stream)``.  The uniform
used at slot ``t`` is the ``t``-th double of that stream, so any slot can be
regenerated on its own and runs never depend on scheduling order.
"""

import numpy as np
from numpy.random import Generator, Philox

_MASK64 = (1 << 64) - 1
_STREAM_BITS = 8
_DOUBLES_PER_COUNTER = 4


def stream_key(seed, run, stream=0):
    """Return the 128-bit Philox key for one run's stream."""
    if run < 0 or stream < 0 or stream >= (1 << _STREAM_BITS):
        raise ValueError(f"invalid run/stream: run={run} stream={stream}")
    word1 = ((int(run) << _STREAM_BITS) | int(stream)) & _MASK64
    return np.array([int(seed) & _MASK64, word1], dtype=np.uint64)


class SlotStream:
    """Uniform draws for one (seed, run, stream), addressable by slot."""

    def __init__(self, seed, run, stream=0):
        self.seed = int(seed)
        self.run = int(run)
        self.stream = int(stream)
        self._key = stream_key(seed, run, stream)

    def uniforms(self, n, start=0):
        """Uniforms for slots ``start .. start+n-1`` as a float64 array."""
        bg = Philox(key=self._key)
        skip, lane = divmod(int(start), _DOUBLES_PER_COUNTER)
        if skip:
            bg.advance(skip)
        return Generator(bg).random(lane + int(n))[lane:]

    def uniform(self, slot):
        return float(self.uniforms(1, start=slot)[0])

    def __repr__(self):
        return f"SlotStream(seed={self.seed}, run={self.run}, stream={self.stream})"
