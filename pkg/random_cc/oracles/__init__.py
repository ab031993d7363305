"""
Exact and brute-force oracles for occurrence probabilities and cycle counts
"""

from random_cc.oracles.oracles import (
    MonteCarloEstimate,
    RejectionSample,
    TransferCurrentOracle,
    TreeCountReport,
    contracted_tree_count,
    enumerate_spanning_trees,
    exhaustive_cycle_census,
    induced_cycle_frequencies,
    induces,
    rejection_sample_cells,
    rho_exact_matrix_tree,
    rho_monte_carlo,
    spanning_tree_count,
    tree_count_report,
    tree_frequency_rho,
)

__all__ = [
    "MonteCarloEstimate",
    "RejectionSample",
    "TransferCurrentOracle",
    "TreeCountReport",
    "contracted_tree_count",
    "enumerate_spanning_trees",
    "exhaustive_cycle_census",
    "induced_cycle_frequencies",
    "induces",
    "rejection_sample_cells",
    "rho_exact_matrix_tree",
    "rho_monte_carlo",
    "spanning_tree_count",
    "tree_count_report",
    "tree_frequency_rho",
]
