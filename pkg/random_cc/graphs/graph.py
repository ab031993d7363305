"""
Graph core for random-cc
Simple undirected 1-skeletons, random graph models and edge-list I/O
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from random_cc.errors import EdgeListParseError, InvalidInputError, ValidationError
from random_cc.utils.seeding import make_rng

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


def normalize_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph on the dense node ids 0..n-1"""

    node_count: int
    adjacency: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if self.node_count < 0:
            raise ValidationError(f"node_count must be nonnegative, got {self.node_count}")
        if len(self.adjacency) != self.node_count:
            raise ValidationError(
                f"adjacency has {len(self.adjacency)} rows for {self.node_count} nodes"
            )
        for u, neighbors in enumerate(self.adjacency):
            previous = -1
            for v in neighbors:
                if v == u:
                    raise ValidationError(f"self-loop at node {u}")
                if not 0 <= v < self.node_count:
                    raise ValidationError(f"neighbor {v} of node {u} out of range")
                if v <= previous:
                    raise ValidationError(f"neighbors of node {u} not strictly sorted")
                previous = v
        for u, v in self.edges():
            if u not in self._neighbor_sets[v]:
                raise ValidationError(f"edge ({u}, {v}) is not symmetric")

    @classmethod
    def from_edges(cls, node_count: int, edges: Iterable[Sequence[int]]) -> "Graph":
        """Build a graph, deduplicating parallel and reversed edges"""
        neighbor_sets: List[set] = [set() for _ in range(node_count)]
        for edge in edges:
            u, v = int(edge[0]), int(edge[1])
            if u == v:
                raise ValidationError(f"self-loop at node {u}")
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise ValidationError(f"edge ({u}, {v}) out of range for {node_count} nodes")
            neighbor_sets[u].add(v)
            neighbor_sets[v].add(u)
        return cls(node_count, tuple(tuple(sorted(s)) for s in neighbor_sets))

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> "Graph":
        """Relabel nodes in sorted order to 0..n-1; self-loops are dropped"""
        nodes = sorted(graph.nodes())
        index = {node: i for i, node in enumerate(nodes)}
        edges = [(index[u], index[v]) for u, v in graph.edges() if u != v]
        return cls.from_edges(len(nodes), edges)

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.node_count))
        graph.add_edges_from(self.edges())
        return graph

    @cached_property
    def _neighbor_sets(self) -> Tuple[FrozenSet[int], ...]:
        return tuple(frozenset(neighbors) for neighbors in self.adjacency)

    @cached_property
    def edge_count(self) -> int:
        return sum(len(neighbors) for neighbors in self.adjacency) // 2

    @cached_property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(len(neighbors) for neighbors in self.adjacency)

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def neighbors(self, u: int) -> Tuple[int, ...]:
        return self.adjacency[u]

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self.node_count and v in self._neighbor_sets[u]

    def edges(self) -> List[Edge]:
        """All edges (u, v) with u < v in ascending lexicographic order"""
        return [(u, v) for u, neighbors in enumerate(self.adjacency) for v in neighbors if u < v]

    @cached_property
    def edge_set(self) -> FrozenSet[Edge]:
        return frozenset(self.edges())

    @cached_property
    def component_count(self) -> int:
        if self.node_count == 0:
            return 0
        return nx.number_connected_components(self.to_networkx())

    def is_connected(self) -> bool:
        return self.component_count == 1

    def cycle_space_dimension(self) -> int:
        return self.edge_count - self.node_count + self.component_count

    def adjacency_matrix(self) -> np.ndarray:
        matrix = np.zeros((self.node_count, self.node_count), dtype=np.int64)
        for u, v in self.edges():
            matrix[u, v] = 1
            matrix[v, u] = 1
        return matrix

    def laplacian(self) -> np.ndarray:
        """Combinatorial Laplacian L = D - A"""
        adjacency = self.adjacency_matrix()
        return np.diag(adjacency.sum(axis=1)) - adjacency


class GraphModel(Enum):
    """Random (and fixed) 1-skeleton models"""

    ER = "er"
    COMPLETE = "complete"
    COMPLETE_BIPARTITE = "bipartite"
    SBM = "sbm"
    BARABASI_ALBERT = "ba"
    KARATE = "karate"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class GraphModelSpec:
    """Model tag plus the parameters it needs"""

    model: GraphModel
    n: int = 0
    p: float = 0.0
    a: int = 0
    b: int = 0
    block_sizes: Tuple[int, ...] = ()
    block_probabilities: Tuple[Tuple[float, ...], ...] = ()
    attach: int = 1  # edges per new node for Barabasi-Albert
    seed: int = 0

    def __post_init__(self):
        if self.n < 0 or self.a < 0 or self.b < 0:
            raise InvalidInputError("node counts must be nonnegative")
        if self.model is GraphModel.ER and not 0.0 <= self.p <= 1.0:
            raise InvalidInputError(f"edge probability {self.p} outside [0, 1]")
        if self.model is GraphModel.SBM:
            k = len(self.block_sizes)
            if k == 0 or any(size <= 0 for size in self.block_sizes):
                raise InvalidInputError("SBM block sizes must be positive")
            probs = np.asarray(self.block_probabilities, dtype=float)
            if probs.shape != (k, k):
                raise InvalidInputError(f"SBM probability matrix must be {k}x{k}")
            if np.any(probs < 0.0) or np.any(probs > 1.0):
                raise InvalidInputError("SBM probabilities must lie in [0, 1]")
            if not np.array_equal(probs, probs.T):
                raise InvalidInputError("SBM probability matrix must be symmetric")
        if self.model is GraphModel.BARABASI_ALBERT and not 1 <= self.attach < max(self.n, 2):
            raise InvalidInputError(
                f"Barabasi-Albert needs 1 <= attach < n, got attach={self.attach}, n={self.n}"
            )

    @classmethod
    def erdos_renyi(cls, n: int, p: float, seed: int = 0) -> "GraphModelSpec":
        return cls(GraphModel.ER, n=n, p=p, seed=seed)

    @classmethod
    def complete(cls, n: int) -> "GraphModelSpec":
        return cls(GraphModel.COMPLETE, n=n)

    @classmethod
    def complete_bipartite(cls, a: int, b: int) -> "GraphModelSpec":
        return cls(GraphModel.COMPLETE_BIPARTITE, n=a + b, a=a, b=b)

    @classmethod
    def sbm(
        cls,
        block_sizes: Sequence[int],
        block_probabilities: Sequence[Sequence[float]],
        seed: int = 0,
    ) -> "GraphModelSpec":
        return cls(
            GraphModel.SBM,
            n=int(sum(block_sizes)),
            block_sizes=tuple(int(s) for s in block_sizes),
            block_probabilities=tuple(tuple(float(x) for x in row) for row in block_probabilities),
            seed=seed,
        )

    @classmethod
    def barabasi_albert(cls, n: int, attach: int, seed: int = 0) -> "GraphModelSpec":
        return cls(GraphModel.BARABASI_ALBERT, n=n, attach=attach, seed=seed)

    @classmethod
    def karate(cls) -> "GraphModelSpec":
        return cls(GraphModel.KARATE, n=34)

    def known_edge_probability(self) -> Optional[float]:
        """Generating edge probability when the model is ER or complete, else None"""
        if self.model is GraphModel.ER:
            return self.p
        if self.model is GraphModel.COMPLETE:
            return 1.0
        return None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model": self.model.value,
            "n": self.n,
            "p": self.p,
            "a": self.a,
            "b": self.b,
            "block_sizes": list(self.block_sizes),
            "block_probabilities": [list(row) for row in self.block_probabilities],
            "attach": self.attach,
            "seed": self.seed,
        }


def _bernoulli_pairs(n: int, pair_probabilities: np.ndarray, seed: int) -> List[Edge]:
    """One uniform draw per pair (u, v), u < v, in lexicographic order"""
    rows, cols = np.triu_indices(n, k=1)
    draws = make_rng(seed).random(rows.size)
    keep = draws < pair_probabilities
    return list(zip(rows[keep].tolist(), cols[keep].tolist()))


def generate(spec: GraphModelSpec) -> Graph:
    """Draw a graph from the model; a pure function of the spec"""
    n = spec.n
    if spec.model is GraphModel.ER:
        if n < 2:
            return Graph.from_edges(n, [])
        pair_count = n * (n - 1) // 2
        edges = _bernoulli_pairs(n, np.full(pair_count, spec.p), spec.seed)
        graph = Graph.from_edges(n, edges)
    elif spec.model is GraphModel.COMPLETE:
        graph = Graph.from_edges(n, ((u, v) for u in range(n) for v in range(u + 1, n)))
    elif spec.model is GraphModel.COMPLETE_BIPARTITE:
        graph = Graph.from_edges(
            spec.a + spec.b,
            ((u, spec.a + v) for u in range(spec.a) for v in range(spec.b)),
        )
    elif spec.model is GraphModel.SBM:
        blocks = np.repeat(np.arange(len(spec.block_sizes)), spec.block_sizes)
        probs = np.asarray(spec.block_probabilities, dtype=float)
        if n < 2:
            return Graph.from_edges(n, [])
        rows, cols = np.triu_indices(n, k=1)
        # blocks are nondecreasing in node id, so (block[u], block[v]) is upper-triangular
        pair_probabilities = probs[blocks[rows], blocks[cols]]
        graph = Graph.from_edges(n, _bernoulli_pairs(n, pair_probabilities, spec.seed))
    elif spec.model is GraphModel.BARABASI_ALBERT:
        graph = Graph.from_networkx(nx.barabasi_albert_graph(n, spec.attach, seed=spec.seed))
    elif spec.model is GraphModel.KARATE:
        graph = Graph.from_networkx(nx.karate_club_graph())
    else:  # pragma: no cover - exhaustive over GraphModel
        raise InvalidInputError(f"unknown model {spec.model}")

    logger.debug(
        f"Generated {spec.model} graph: n={graph.node_count}, m={graph.edge_count}"
    )
    return graph


def mle_edge_probability(g: Graph) -> float:
    """Maximum-likelihood ER edge probability m / C(n, 2)"""
    n = g.node_count
    if n < 2:
        raise InvalidInputError(f"edge probability needs at least 2 nodes, got {n}")
    return g.edge_count / (n * (n - 1) / 2)


def load_edge_list(text: str, node_count: Optional[int] = None) -> Graph:
    """
    Parse "u v" lines; '#' lines and blank lines are ignored.

    n is inferred as max id + 1 unless node_count is given. Isolated nodes above
    the largest listed id are only kept when node_count is passed.
    """
    edges: List[Edge] = []
    max_id = -1
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListParseError(f"expected 'u v', got {raw!r}", line_number)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListParseError(f"node ids must be integers, got {raw!r}", line_number)
        if u < 0 or v < 0:
            raise EdgeListParseError(f"node ids must be nonnegative, got {raw!r}", line_number)
        if u == v:
            raise ValidationError(f"line {line_number}: self-loop at node {u}")
        edges.append(normalize_edge(u, v))
        max_id = max(max_id, u, v)

    n = max_id + 1
    if node_count is not None:
        if node_count < n:
            raise InvalidInputError(f"node_count {node_count} smaller than largest id {max_id}")
        n = node_count
    return Graph.from_edges(n, edges)


def save_edge_list(g: Graph) -> str:
    return "".join(f"{u} {v}\n" for u, v in g.edges())


def read_edge_list(path: str, node_count: Optional[int] = None) -> Graph:
    return load_edge_list(Path(path).read_text(), node_count=node_count)


def write_edge_list(g: Graph, path: str) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(save_edge_list(g))
    return target
