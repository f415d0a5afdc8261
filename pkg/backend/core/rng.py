"""
Seeded, counter-based random streams

Every randomized operation draws from numpy's Philox generator keyed by
``seed XOR stream``, so replication k of a run is reproducible on its own and
serial and parallel execution produce the same numbers.
"""

import secrets

import numpy as np

MASK64 = (1 << 64) - 1


def stream_key(seed: int, stream: int) -> int:
    return (int(seed) ^ int(stream)) & MASK64


def stream_generator(seed: int, stream: int = 0) -> np.random.Generator:
    """Generator for one replication / bootstrap iteration"""
    return np.random.Generator(np.random.Philox(key=stream_key(seed, stream)))


def resolve_seed(seed=None) -> int:
    """Return the given seed, or a fresh 64-bit one to record in the manifest"""
    if seed is None:
        return secrets.randbits(64)
    return int(seed) & MASK64
