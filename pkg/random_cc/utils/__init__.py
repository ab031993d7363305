"""
Utility modules for random-cc
"""

from random_cc.utils.config import Config
from random_cc.utils.exact_linalg import bareiss_determinant, bareiss_rank, sparse_column_rank
from random_cc.utils.parallel import ordered_map
from random_cc.utils.seeding import SeedStream, derive_seed, make_rng

__all__ = [
    "Config",
    "SeedStream",
    "bareiss_determinant",
    "bareiss_rank",
    "derive_seed",
    "make_rng",
    "ordered_map",
    "sparse_column_rank",
]
