"""Seeded, splittable random number streams.

Every sampler in the package draws from a ``numpy.random.Generator``. An
``RngStream`` pins the generator to a (seed, stream) pair so that a chain is
bit-reproducible and concurrent chains get statistically independent streams
without coordination.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class RngStream:
    """A deterministic random stream identified by (seed, stream).

    Identical (seed, stream) pairs yield identical variate sequences;
    distinct stream ids yield independent streams (SeedSequence spawn keys).
    """

    seed: int
    stream: int = 0
    _gen: np.random.Generator | None = field(default=None, repr=False, compare=False)

    @property
    def generator(self) -> np.random.Generator:
        if self._gen is None:
            ss = np.random.SeedSequence(entropy=int(self.seed), spawn_key=(int(self.stream),))
            self._gen = np.random.default_rng(ss)
        return self._gen

    def fresh(self) -> "RngStream":
        """Same (seed, stream) but with generator state rewound to the start."""
        return RngStream(self.seed, self.stream)

    def substream(self, stream: int) -> "RngStream":
        """Independent stream under the same seed."""
        return RngStream(self.seed, stream)


def as_generator(rng) -> np.random.Generator:
    """Accept an RngStream or a bare numpy Generator."""
    if isinstance(rng, RngStream):
        return rng.generator
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected RngStream or numpy Generator, got {type(rng)!r}")
