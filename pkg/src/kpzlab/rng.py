"""Counter-based random streams for reproducible replica parallelism.

Every random quantity in the package is drawn from a Philox generator keyed
by a (seed, stream) pair.  Replicas get consecutive stream ids within a lane,
so a Monte-Carlo run produces bit-identical output for any number of workers
and any scheduling order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MASK64 = (1 << 64) - 1

# Lane offsets keep streams of different purposes disjoint.  A lane hosts up
# to 2**40 replica streams, far beyond any desk-scale run.
LANE_WIDTH = 1 << 40


@dataclass(frozen=True)
class Rng:
    """Address of one random stream: a 64-bit seed plus a 64-bit stream id.

    Identical (seed, stream) pairs reproduce identical draws; distinct
    stream ids give statistically independent streams.
    """

    seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        key = [self.seed & _MASK64, self.stream & _MASK64]
        return np.random.Generator(np.random.Philox(key=key))

    def lane(self, lane_index: int) -> "Rng":
        """Sub-lane for one experiment component (field, boundary, bootstrap...)."""
        return Rng(self.seed, (self.stream + lane_index * LANE_WIDTH) & _MASK64)

    def replica(self, index: int) -> "Rng":
        """Stream for one Monte-Carlo replica inside this lane."""
        if index < 0:
            raise ValueError("replica index must be nonnegative")
        return Rng(self.seed, (self.stream + index) & _MASK64)
