"""
Deterministic seed derivation

Every random stream in the package is derived from one master seed, so a run is
reproducible regardless of how work is scheduled across threads.
"""

from enum import IntEnum

import numpy as np


class SeedStream(IntEnum):
    """Independent sub-streams of a master seed"""

    GRAPH = 0
    SAMPLING_TREES = 1
    CENSUS_TREES = 2
    MONTE_CARLO = 3
    REJECTION = 4
    HARVEST = 5
    LINIAL_MESHULAM = 6


def derive_seed(master_seed: int, *path: int) -> int:
    """Child seed for the given spawn path, e.g. (SeedStream.SAMPLING_TREES, tree_index)"""
    sequence = np.random.SeedSequence(int(master_seed), spawn_key=tuple(int(p) for p in path))
    low, high = sequence.generate_state(2, dtype=np.uint32)
    return (int(high) << 32) | int(low)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed)))
