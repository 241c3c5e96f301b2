"""
Seeded random streams.

All randomness comes from numpy Generators over the counter-based Philox
bit generator. A stream is named by the run seed plus a key path
(purpose, index, ...), so e.g. dropout masks never shift when weight
initialization draws more numbers.
"""

from typing import List

import numpy as np

STREAM_INIT = 1
STREAM_DROPOUT = 2
STREAM_SHUFFLE = 3
STREAM_SPLIT = 4
STREAM_SYNTH = 5


def generator(seed: int, *key: int) -> np.random.Generator:
    """Generator for the stream identified by (seed, *key)."""
    seq = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(seq))


def spawn(seed: int, count: int, *key: int) -> List[np.random.Generator]:
    """count independent generators below (seed, *key), one per work item."""
    parent = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return [np.random.Generator(np.random.Philox(child)) for child in parent.spawn(count)]
