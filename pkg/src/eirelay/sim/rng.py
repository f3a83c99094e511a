"""Counter-based random streams.

A stream is a Philox key ``(seed, stream_id)``. Work is split into fixed-size
blocks and block ``b`` starts at counter ``b << 192``, so the draws for a
block never depend on which worker produced the blocks before it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_U64 = (1 << 64) - 1


@dataclass(frozen=True)
class RngStream:
    seed: int
    stream_id: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.seed <= _U64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if not 0 <= self.stream_id <= _U64:
            raise ValueError(f"stream_id must be an unsigned 64-bit integer, got {self.stream_id}")

    def generator(self, block: int = 0) -> np.random.Generator:
        key = np.array([self.seed, self.stream_id], dtype=np.uint64)
        counter = np.array([0, 0, 0, block], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key, counter=counter))

    def substream(self, stream_id: int) -> "RngStream":
        return RngStream(self.seed, stream_id)


def as_generator(rng: "RngStream | np.random.Generator") -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    return rng
