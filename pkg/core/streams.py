"""
Random Streams
Counter-based, domain-separated random streams for reproducible parallel replicates
"""

import hashlib
from typing import Tuple

import numpy as np

from .errors import DomainError

# A RandomStream is a numpy Generator; every consumer owns its own.
RandomStream = np.random.Generator

# Domain-separation tags
CLAIMS = 1
COUNTING = 2
LIMIT = 3


class StreamFactory:
    """
    Derives independent Philox streams from (master seed, tag, horizon, replicate).

    The derivation is a pure function of its key, so the stream for one
    replicate never depends on which other replicates ran, in what order,
    or on how many worker threads were used.
    """

    def __init__(self, master_seed: int):
        """
        Args:
            master_seed: Unsigned 64-bit master seed
        """
        seed = int(master_seed)
        if seed < 0 or seed >= 2 ** 64:
            raise DomainError(f"master seed must fit in 64 unsigned bits, got {master_seed}")
        self.master_seed = seed

    def key(self, tag: int, horizon_index: int = 0, replicate_index: int = 0) -> Tuple[int, int, int]:
        """Spawn key for the given coordinates"""
        return (int(tag), int(horizon_index), int(replicate_index))

    def stream(self, tag: int, horizon_index: int = 0, replicate_index: int = 0) -> RandomStream:
        """
        Fresh stream for the given coordinates.

        Calling this twice with the same arguments yields two generators in
        identical states.
        """
        seq = np.random.SeedSequence(
            self.master_seed,
            spawn_key=self.key(tag, horizon_index, replicate_index),
        )
        return np.random.Generator(np.random.Philox(seq))

    def replicate_streams(self, horizon_index: int,
                          replicate_index: int) -> Tuple[RandomStream, RandomStream]:
        """(claims stream, counting stream) for one replicate"""
        return (
            self.stream(CLAIMS, horizon_index, replicate_index),
            self.stream(COUNTING, horizon_index, replicate_index),
        )

    def fingerprint(self) -> str:
        """Short digest of the master seed, for run manifests"""
        return hashlib.sha256(str(self.master_seed).encode()).hexdigest()[:16]
