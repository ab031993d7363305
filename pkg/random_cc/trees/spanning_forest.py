"""
Uniform spanning trees and the rooted-tree accumulators

Wilson's algorithm draws a uniform spanning tree; every node then carries
sigma(r, u), the sum of (d(a)-1)(d(b)-1) over the tree edges on its root path, and
pi(r, u), the product of (d(w)-1) over the root path nodes (kept as a logarithm).
Together with a lowest common ancestor these answer the sum and product over any
induced cycle in constant time.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from networkx.utils import UnionFind

from random_cc.errors import ContractViolation, DisconnectedGraphError, ValidationError
from random_cc.graphs.graph import Edge, Graph, normalize_edge
from random_cc.utils.seeding import make_rng

logger = logging.getLogger(__name__)

NO_PARENT = -1
_DRAW_BATCH = 4096


@dataclass(frozen=True)
class Cycle:
    """
    Simple cycle in canonical boundary order.

    nodes[0] is the smallest node id and nodes[1] < nodes[-1], so two traversals
    of the same cycle compare (and hash) equal.
    """

    nodes: Tuple[int, ...]

    def __post_init__(self):
        nodes = self.nodes
        if len(nodes) < 3:
            raise ValidationError(f"a cycle needs at least 3 nodes, got {nodes}")
        if len(set(nodes)) != len(nodes):
            raise ValidationError(f"cycle nodes must be distinct, got {nodes}")
        if nodes[0] != min(nodes) or nodes[1] > nodes[-1]:
            raise ValidationError(f"cycle {nodes} is not in canonical form")

    @classmethod
    def canonical(cls, nodes: Sequence[int]) -> "Cycle":
        """Rotate and orient an arbitrary traversal into canonical form"""
        nodes = [int(v) for v in nodes]
        if len(nodes) < 3:
            raise ValidationError(f"a cycle needs at least 3 nodes, got {tuple(nodes)}")
        start = nodes.index(min(nodes))
        rotated = nodes[start:] + nodes[:start]
        if rotated[1] > rotated[-1]:
            rotated = [rotated[0]] + rotated[:0:-1]
        return cls(tuple(rotated))

    @property
    def length(self) -> int:
        return len(self.nodes)

    def __len__(self) -> int:
        return len(self.nodes)

    def directed_edges(self) -> List[Edge]:
        """Edges (v_i, v_{i+1}) along the canonical traversal, closing edge last"""
        nodes = self.nodes
        return [(nodes[i], nodes[(i + 1) % len(nodes)]) for i in range(len(nodes))]

    def edges(self) -> List[Edge]:
        return [normalize_edge(u, v) for u, v in self.directed_edges()]

    def validate(self, g: Graph):
        """Raise ValidationError unless every boundary edge is an edge of g"""
        for u, v in self.directed_edges():
            if not g.has_edge(u, v):
                raise ValidationError(f"cycle {self.nodes} uses non-edge ({u}, {v})")

    def to_list(self) -> List[int]:
        return list(self.nodes)


def _log_factor(degree: int) -> float:
    # degree-one nodes never lie on a cycle; they contribute a neutral factor
    return math.log(degree - 1) if degree > 1 else 0.0


@dataclass(frozen=True)
class RootedSpanningTree:
    """Spanning tree as a parent array, with depth and sigma/pi accumulators"""

    graph: Graph
    root: int
    parent: Tuple[int, ...]
    depth: Tuple[int, ...]
    order: Tuple[int, ...]  # breadth-first from the root
    sigma_to_root: Tuple[float, ...]
    log_pi_to_root: Tuple[float, ...]

    @property
    def node_count(self) -> int:
        return self.graph.node_count

    def pi_to_root(self, u: int) -> float:
        return math.exp(self.log_pi_to_root[u])

    @cached_property
    def children(self) -> Tuple[Tuple[int, ...], ...]:
        children: List[List[int]] = [[] for _ in range(self.node_count)]
        for u in self.order:
            p = self.parent[u]
            if p != NO_PARENT:
                children[p].append(u)
        return tuple(tuple(c) for c in children)

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(
            normalize_edge(u, p) for u, p in enumerate(self.parent) if p != NO_PARENT
        )

    def edges(self) -> List[Edge]:
        return sorted(self.edge_set)

    def is_tree_edge(self, u: int, v: int) -> bool:
        return self.parent[u] == v or self.parent[v] == u

    def lca(self, u: int, v: int) -> int:
        """Lowest common ancestor of a single pair by climbing; O(path length)"""
        depth, parent = self.depth, self.parent
        while depth[u] > depth[v]:
            u = parent[u]
        while depth[v] > depth[u]:
            v = parent[v]
        while u != v:
            u, v = parent[u], parent[v]
        return u

    def path(self, u: int, v: int) -> List[int]:
        """Tree path u -> ... -> v"""
        depth, parent = self.depth, self.parent
        up, down = [u], [v]
        while depth[up[-1]] > depth[down[-1]]:
            up.append(parent[up[-1]])
        while depth[down[-1]] > depth[up[-1]]:
            down.append(parent[down[-1]])
        while up[-1] != down[-1]:
            up.append(parent[up[-1]])
            down.append(parent[down[-1]])
        down.pop()
        return up + down[::-1]


def build_rooted_tree(g: Graph, parent: Sequence[int], root: int) -> RootedSpanningTree:
    """
    Orient a parent array at root and fill depth and accumulators.

    Raises:
        ValidationError: parent links are not a spanning tree of g
    """
    n = g.node_count
    if len(parent) != n:
        raise ValidationError(f"parent array has {len(parent)} entries for {n} nodes")
    if parent[root] != NO_PARENT:
        raise ValidationError(f"root {root} must have no parent")

    children: List[List[int]] = [[] for _ in range(n)]
    for u, p in enumerate(parent):
        if u == root:
            continue
        if not g.has_edge(u, p):
            raise ValidationError(f"tree edge ({u}, {p}) is not an edge of the graph")
        children[p].append(u)

    degrees = g.degrees
    depth = [0] * n
    sigma = [0.0] * n
    log_pi = [0.0] * n
    log_pi[root] = _log_factor(degrees[root])
    order = [root]
    for v in order:  # grows while iterating: breadth-first
        dv = degrees[v] - 1
        for u in children[v]:
            depth[u] = depth[v] + 1
            sigma[u] = sigma[v] + dv * (degrees[u] - 1)
            log_pi[u] = log_pi[v] + _log_factor(degrees[u])
            order.append(u)

    if len(order) != n:
        raise ValidationError(f"parent links reach {len(order)} of {n} nodes from the root")

    return RootedSpanningTree(
        graph=g,
        root=root,
        parent=tuple(int(p) for p in parent),
        depth=tuple(depth),
        order=tuple(order),
        sigma_to_root=tuple(sigma),
        log_pi_to_root=tuple(log_pi),
    )


def tree_from_edges(g: Graph, edges: Iterable[Edge], root: int = 0) -> RootedSpanningTree:
    """Root an undirected edge set (e.g. an enumerated spanning tree)"""
    n = g.node_count
    adjacency: List[List[int]] = [[] for _ in range(n)]
    count = 0
    for u, v in edges:
        adjacency[u].append(v)
        adjacency[v].append(u)
        count += 1
    if count != n - 1:
        raise ValidationError(f"a spanning tree on {n} nodes has {n - 1} edges, got {count}")

    parent = [NO_PARENT] * n
    seen = [False] * n
    seen[root] = True
    stack = [root]
    while stack:
        v = stack.pop()
        for u in adjacency[v]:
            if not seen[u]:
                seen[u] = True
                parent[u] = v
                stack.append(u)
    return build_rooted_tree(g, parent, root)


class _UniformStream:
    """Batched uniform draws from a generator, consumed one at a time"""

    def __init__(self, rng: np.random.Generator, batch: int = _DRAW_BATCH):
        self._rng = rng
        self._batch = batch
        self._buffer: List[float] = []
        self._index = 0

    def next(self) -> float:
        if self._index == len(self._buffer):
            self._buffer = self._rng.random(self._batch).tolist()
            self._index = 0
        value = self._buffer[self._index]
        self._index += 1
        return value


def wilson_ust(
    g: Graph,
    root: int = 0,
    seed: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> RootedSpanningTree:
    """
    Uniform spanning tree by loop-erased random walks (Wilson's algorithm).

    Walks start from nodes 0..n-1 in order; the distribution does not depend on
    the root.

    Raises:
        DisconnectedGraphError: g is empty or not connected
    """
    if not g.is_connected():
        raise DisconnectedGraphError(
            f"spanning trees need a connected graph ({g.component_count} components)"
        )
    if rng is None:
        rng = make_rng(seed if seed is not None else 0)

    n = g.node_count
    adjacency = g.adjacency
    draws = _UniformStream(rng)
    in_tree = [False] * n
    successor = [NO_PARENT] * n
    in_tree[root] = True

    for start in range(n):
        u = start
        while not in_tree[u]:
            neighbors = adjacency[u]
            # overwriting successor[u] erases any loop closed at u
            successor[u] = neighbors[int(draws.next() * len(neighbors))]
            u = successor[u]
        u = start
        while not in_tree[u]:
            in_tree[u] = True
            u = successor[u]

    successor[root] = NO_PARENT
    return build_rooted_tree(g, successor, root)


def offline_lca(tree: RootedSpanningTree, queries: Sequence[Tuple[int, int]]) -> List[int]:
    """Tarjan's offline lowest common ancestors for a batch of node pairs"""
    n = tree.node_count
    pending: List[List[Tuple[int, int]]] = [[] for _ in range(n)]
    for index, (u, v) in enumerate(queries):
        if not (0 <= u < n and 0 <= v < n):
            raise ContractViolation(f"query ({u}, {v}) out of range for {n} nodes")
        pending[u].append((v, index))
        pending[v].append((u, index))

    answers = [NO_PARENT] * len(queries)
    sets = UnionFind()
    ancestor = list(range(n))
    finished = [False] * n
    children = tree.children

    stack: List[Tuple[int, int]] = [(tree.root, 0)]
    while stack:
        node, next_child = stack[-1]
        if next_child == 0:
            sets[node]
        if next_child < len(children[node]):
            stack[-1] = (node, next_child + 1)
            stack.append((children[node][next_child], 0))
            continue

        stack.pop()
        finished[node] = True
        for other, index in pending[node]:
            if finished[other]:
                answers[index] = ancestor[sets[other]]
        if stack:
            up = stack[-1][0]
            sets.union(up, node)
            ancestor[sets[up]] = up

    return answers


class PathComponents(NamedTuple):
    """Accumulator sums for the cycle closed by a non-tree edge (u, v)"""

    sigma_path: float  # over the tree path u..v
    sigma_cycle: float  # path plus the closing edge
    log_pi: float  # product over every cycle node
    length: int

    @property
    def pi(self) -> float:
        return math.exp(self.log_pi)


def path_components(tree: RootedSpanningTree, u: int, v: int, lca: int) -> PathComponents:
    """Constant-time cycle sums from the root accumulators"""
    if u == v:
        raise ContractViolation(f"path components need distinct endpoints, got {u}")
    degrees = tree.graph.degrees
    sigma, log_pi = tree.sigma_to_root, tree.log_pi_to_root
    sigma_path = sigma[u] + sigma[v] - 2.0 * sigma[lca]
    closing = (degrees[u] - 1) * (degrees[v] - 1)
    cycle_log_pi = log_pi[u] + log_pi[v] + _log_factor(degrees[lca]) - 2.0 * log_pi[lca]
    length = tree.depth[u] + tree.depth[v] - 2 * tree.depth[lca] + 1
    return PathComponents(sigma_path, sigma_path + closing, cycle_log_pi, length)


def non_tree_edges(tree: RootedSpanningTree) -> List[Edge]:
    """Edges outside the tree in lexicographic order; the position is the edge index"""
    edge_set = tree.edge_set
    return [e for e in tree.graph.edges() if e not in edge_set]


def induced_cycle(tree: RootedSpanningTree, edge: Edge) -> Cycle:
    """
    Canonical cycle closed by a non-tree edge

    Raises:
        ContractViolation: the edge is not in the graph or already in the tree
    """
    u, v = edge
    if not tree.graph.has_edge(u, v):
        raise ContractViolation(f"({u}, {v}) is not an edge of the graph")
    if tree.is_tree_edge(u, v):
        raise ContractViolation(f"({u}, {v}) is a tree edge and closes no cycle")
    return Cycle.canonical(tree.path(u, v))
