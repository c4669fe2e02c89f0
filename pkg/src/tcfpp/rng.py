"""Reproducible random-number streams for Monte Carlo replication.

Streams are counter-based (Philox) and keyed by a ``(master_seed, stream_key)``
pair: identical pairs reproduce bit-identical draw sequences, distinct pairs
give statistically independent streams.  The convention throughout the toolkit
is ``stream_key = replication index``, so replications can be dispatched in any
order (or in parallel) without changing results.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RngStream:
    """A named, reproducible random stream.

    A single RngStream must not be shared across threads; derive one stream
    per replication with :meth:`substream` instead.
    """

    master_seed: int
    stream_key: int = 0

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        key = np.array(
            [self.master_seed & _MASK64, self.stream_key & _MASK64],
            dtype=np.uint64,
        )
        return np.random.Generator(np.random.Philox(key=key))

    def substream(self, stream_key: int) -> "RngStream":
        """Stream with the same master seed and a different key."""
        return RngStream(self.master_seed, stream_key)


def as_generator(rng: "RngStream | np.random.Generator") -> np.random.Generator:
    """Accept either an RngStream or an already-active numpy Generator.

    Composite operations call this once at their entry point and pass the
    resulting generator down, so a single stream advances statefully through
    all draws of one replication.
    """
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected RngStream or numpy Generator, got {type(rng)!r}")
