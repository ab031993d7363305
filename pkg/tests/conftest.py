"""
Pytest configuration and shared fixtures for random-cc tests
"""

import os
import sys

import pytest

# Add the project root to the path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from random_cc.graphs.graph import Graph, GraphModelSpec, generate  # noqa: E402
from random_cc.monitoring.logging_config import metrics  # noqa: E402
from random_cc.trees.spanning_forest import NO_PARENT, build_rooted_tree  # noqa: E402

GOLDEN_TREE_EDGES = [(2, 1), (1, 3), (1, 4), (4, 0), (2, 5), (2, 6), (2, 7)]
GOLDEN_NON_TREE_EDGES = [(0, 3), (0, 5), (3, 5), (3, 6), (2, 4), (4, 6), (1, 5), (1, 7)]


@pytest.fixture(autouse=True)
def reset_metrics():
    """Isolate the global metrics between tests"""
    metrics.reset()
    yield
    metrics.reset()


@pytest.fixture
def triangle():
    return generate(GraphModelSpec.complete(3))


@pytest.fixture
def k4():
    return generate(GraphModelSpec.complete(4))


@pytest.fixture
def k5():
    return generate(GraphModelSpec.complete(5))


@pytest.fixture
def square():
    """The 4-cycle C_4"""
    return Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])


@pytest.fixture
def golden_graph():
    """Eight nodes, seven tree edges and eight non-tree edges"""
    return Graph.from_edges(8, GOLDEN_TREE_EDGES + GOLDEN_NON_TREE_EDGES)


@pytest.fixture
def golden_tree(golden_graph):
    """The fixed spanning tree of golden_graph rooted at node 2"""
    parent = [NO_PARENT] * 8
    for p, child in GOLDEN_TREE_EDGES:
        parent[child] = p
    return build_rooted_tree(golden_graph, parent, root=2)


@pytest.fixture
def connected_er():
    """Factory for the first connected ER(n, p) draw at or after a seed"""

    def draw(n, p, seed=0):
        for offset in range(100):
            g = generate(GraphModelSpec.erdos_renyi(n, p, seed=seed + offset))
            if g.is_connected():
                return g
        raise AssertionError(f"no connected ER({n}, {p}) draw near seed {seed}")

    return draw
