"""
1-skeleton graphs: representation, random models and edge-list I/O
"""

from random_cc.graphs.graph import (
    Edge,
    Graph,
    GraphModel,
    GraphModelSpec,
    generate,
    load_edge_list,
    mle_edge_probability,
    normalize_edge,
    read_edge_list,
    save_edge_list,
    write_edge_list,
)

__all__ = [
    "Edge",
    "Graph",
    "GraphModel",
    "GraphModelSpec",
    "generate",
    "load_edge_list",
    "mle_edge_probability",
    "normalize_edge",
    "read_edge_list",
    "save_edge_list",
    "write_edge_list",
]
