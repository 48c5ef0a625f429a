"""Counter-based random substreams.

Every random draw in a simulation is keyed by ``(master_seed, *key)`` and
served by an independent Philox generator, so a result never depends on the
order in which trials are executed.
"""
from enum import IntEnum

import numpy as np


class Purpose(IntEnum):
    AZIMUTH = 0
    CHANNEL = 1
    CODEBOOK = 2
    NOISE = 3
    GAIN_LAW = 4
    SYMBOLS = 5


def substream(master_seed: int, *key: int) -> np.random.Generator:
    """Return the generator for substream ``key`` of ``master_seed``."""
    seq = np.random.SeedSequence(int(master_seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(seq))
