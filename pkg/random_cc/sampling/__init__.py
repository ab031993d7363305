"""
Cycle census and lifting of skeletons to two-dimensional cell complexes
"""

from random_cc.sampling.cycle_census import (
    CycleCensus,
    apriori_count_er,
    count_complete,
    enumerate_simple_cycles,
    estimate_counts,
    exact_counts,
)
from random_cc.sampling.induced_cycles import Approximation, CycleEvaluator, InducedCycle
from random_cc.sampling.lifting_sampler import (
    LiftingReport,
    SamplingConfig,
    SamplingMode,
    linial_meshulam,
    parse_length_probabilities,
    plan_expected_cells,
    sample_lifting,
    sample_random_cell_complex,
    selection_probability,
)

__all__ = [
    "Approximation",
    "CycleCensus",
    "CycleEvaluator",
    "InducedCycle",
    "LiftingReport",
    "SamplingConfig",
    "SamplingMode",
    "apriori_count_er",
    "count_complete",
    "enumerate_simple_cycles",
    "estimate_counts",
    "exact_counts",
    "linial_meshulam",
    "parse_length_probabilities",
    "plan_expected_cells",
    "sample_lifting",
    "sample_random_cell_complex",
    "selection_probability",
]
