"""
Uniform spanning trees, rooted accumulators and induced cycles
"""

from random_cc.trees.spanning_forest import (
    NO_PARENT,
    Cycle,
    PathComponents,
    RootedSpanningTree,
    build_rooted_tree,
    induced_cycle,
    non_tree_edges,
    offline_lca,
    path_components,
    tree_from_edges,
    wilson_ust,
)

__all__ = [
    "NO_PARENT",
    "Cycle",
    "PathComponents",
    "RootedSpanningTree",
    "build_rooted_tree",
    "induced_cycle",
    "non_tree_edges",
    "offline_lca",
    "path_components",
    "tree_from_edges",
    "wilson_ust",
]
