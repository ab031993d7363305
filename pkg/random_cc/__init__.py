"""
random-cc: random two-dimensional cell complexes

Lifts a graph to a 2-dim cell complex by attaching 2-cells along cycles induced
by uniform spanning trees, with per-length control over the cells drawn.
"""

__version__ = "0.1.0"

from . import evaluation, graphs, monitoring, oracles, probability, sampling, topology, trees, utils

__all__ = [
    "graphs",
    "trees",
    "probability",
    "oracles",
    "sampling",
    "topology",
    "evaluation",
    "monitoring",
    "utils",
]
