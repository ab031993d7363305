"""
Exact and brute-force reference implementations

Every approximation in the package is checked against one of these:
- Kirchhoff matrix-tree counts and contracted counts (exact rationals)
- Transfer-current determinants (exact up to floating point, one pseudo-inverse
  per graph, usable at n = 30)
- Monte Carlo frequencies over Wilson trees
- Rejection sampling of cells from random node permutations
- Exhaustive spanning-tree enumeration for the per-tree counting identity
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Sequence

import numpy as np
import scipy.linalg
from networkx.utils import UnionFind

from random_cc.errors import (
    BudgetExceededError,
    ContractViolation,
    DisconnectedGraphError,
    InvalidInputError,
)
from random_cc.graphs.graph import Edge, Graph
from random_cc.monitoring.logging_config import metrics
from random_cc.trees.spanning_forest import (
    Cycle,
    RootedSpanningTree,
    induced_cycle,
    non_tree_edges,
    tree_from_edges,
    wilson_ust,
)
from random_cc.utils.exact_linalg import bareiss_determinant
from random_cc.utils.parallel import ordered_map
from random_cc.utils.seeding import SeedStream, derive_seed, make_rng

logger = logging.getLogger(__name__)

_MONTE_CARLO_CHUNK = 1000
_REJECTION_BATCH = 4096


@dataclass(frozen=True)
class TreeCountReport:
    """t(G) and the number of spanning trees inducing a queried cycle"""

    total_trees: int
    trees_containing: int

    def __post_init__(self):
        if not 0 <= self.trees_containing <= self.total_trees:
            raise ContractViolation(
                f"trees_containing={self.trees_containing} outside [0, {self.total_trees}]"
            )

    @property
    def rho(self) -> Fraction:
        if self.total_trees == 0:
            return Fraction(0)
        return Fraction(self.trees_containing, self.total_trees)


def _reduced_laplacian_determinant(node_count: int, edges: Iterable[Edge]) -> int:
    """Kirchhoff determinant of a multigraph Laplacian with row/column 0 removed"""
    if node_count <= 1:
        return 1
    laplacian = [[0] * node_count for _ in range(node_count)]
    for a, b in edges:
        if a == b:
            continue
        laplacian[a][a] += 1
        laplacian[b][b] += 1
        laplacian[a][b] -= 1
        laplacian[b][a] -= 1
    return bareiss_determinant([row[1:] for row in laplacian[1:]])


def spanning_tree_count(g: Graph) -> int:
    """Exact t(G) by the matrix-tree theorem; 0 for disconnected graphs"""
    if not g.is_connected():
        return 0
    return _reduced_laplacian_determinant(g.node_count, g.edges())


def contracted_tree_count(g: Graph, forest: Iterable[Edge]) -> int:
    """
    Number of spanning trees of g containing every edge of forest.

    Equals t(G / forest): the forest's edges are contracted, parallel edges are
    kept and self-loops dropped. Returns 0 when forest contains a cycle.
    """
    if not g.is_connected():
        return 0
    sets = UnionFind(range(g.node_count))
    for u, v in forest:
        if not g.has_edge(u, v):
            raise ContractViolation(f"({u}, {v}) is not an edge of the graph")
        if sets[u] == sets[v]:
            return 0
        sets.union(u, v)

    labels: Dict[int, int] = {}
    for u in range(g.node_count):
        labels.setdefault(sets[u], len(labels))
    contracted = [(labels[sets[u]], labels[sets[v]]) for u, v in g.edges()]
    return _reduced_laplacian_determinant(len(labels), contracted)


def tree_count_report(g: Graph, cycle: Cycle) -> TreeCountReport:
    """|T_c| as the sum over removed edges e of t(G / (c - e))"""
    cycle.validate(g)
    edges = cycle.edges()
    containing = sum(
        contracted_tree_count(g, edges[:i] + edges[i + 1 :]) for i in range(len(edges))
    )
    return TreeCountReport(total_trees=spanning_tree_count(g), trees_containing=containing)


def rho_exact_matrix_tree(g: Graph, cycle: Cycle) -> Fraction:
    """Exact rational probability that a uniform spanning tree induces cycle"""
    return tree_count_report(g, cycle).rho


class TransferCurrentOracle:
    """
    Exact occurrence probabilities from the transfer-current matrix.

    For edges e, f with incidence vectors b_e, b_f the transfer current is
    Y(e, f) = b_e^T L^+ b_f, and P[S in a uniform spanning tree] = det Y_S. The
    pseudo-inverse is computed once, so each cycle costs l determinants of size l-1.
    """

    def __init__(self, g: Graph):
        if not g.is_connected():
            raise DisconnectedGraphError("transfer currents need a connected graph")
        self.graph = g
        self._green = scipy.linalg.pinvh(g.laplacian().astype(float))
        logger.debug(f"Transfer-current oracle ready for n={g.node_count}")

    def transfer_matrix(self, edges: Sequence[Edge]) -> np.ndarray:
        tails = np.array([u for u, _ in edges])
        heads = np.array([v for _, v in edges])
        green = self._green
        return (
            green[np.ix_(tails, tails)]
            - green[np.ix_(tails, heads)]
            - green[np.ix_(heads, tails)]
            + green[np.ix_(heads, heads)]
        )

    def edge_set_probability(self, edges: Sequence[Edge]) -> float:
        """P[all edges lie in a uniform spanning tree]"""
        if not edges:
            return 1.0
        return max(float(np.linalg.det(self.transfer_matrix(edges))), 0.0)

    def rho(self, cycle: Cycle) -> float:
        cycle.validate(self.graph)
        edges = cycle.edges()
        full = self.transfer_matrix(edges)
        keep = np.arange(len(edges))
        terms = []
        for i in range(len(edges)):
            minor = full[np.ix_(keep != i, keep != i)]
            terms.append(max(float(np.linalg.det(minor)), 0.0))
        return min(math.fsum(terms), 1.0)


@dataclass(frozen=True)
class MonteCarloEstimate:
    """Fraction of sampled trees inducing a cycle, with its standard error"""

    estimate: float
    standard_error: float
    trials: int
    hits: int


def induces(tree: RootedSpanningTree, cycle: Cycle) -> bool:
    """A tree induces a cycle iff it holds all but one of the cycle's edges"""
    edge_set = tree.edge_set
    return sum(1 for e in cycle.edges() if e in edge_set) == cycle.length - 1


def rho_monte_carlo(
    g: Graph, cycle: Cycle, trials: int, seed: int, workers: int = 1
) -> MonteCarloEstimate:
    """Monte Carlo occurrence probability; chunks of trials use derived seeds"""
    if trials < 1:
        raise InvalidInputError(f"trials must be at least 1, got {trials}")
    cycle.validate(g)

    chunks = [
        (index, min(_MONTE_CARLO_CHUNK, trials - start))
        for index, start in enumerate(range(0, trials, _MONTE_CARLO_CHUNK))
    ]

    def run_chunk(chunk) -> int:
        index, size = chunk
        rng = make_rng(derive_seed(seed, SeedStream.MONTE_CARLO, index))
        return sum(induces(wilson_ust(g, rng=rng), cycle) for _ in range(size))

    hits = sum(ordered_map(run_chunk, chunks, workers=workers))
    estimate = hits / trials
    metrics.increment("trees_sampled", trials)
    return MonteCarloEstimate(
        estimate=estimate,
        standard_error=math.sqrt(estimate * (1.0 - estimate) / trials),
        trials=trials,
        hits=hits,
    )


@dataclass
class RejectionSample:
    """Cells accepted by permutation rejection sampling"""

    cycles: List[Cycle] = field(default_factory=list)
    attempts: int = 0
    requested: int = 0

    @property
    def accepted(self) -> int:
        return len(self.cycles)

    @property
    def shortfall(self) -> bool:
        return self.accepted < self.requested

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.attempts if self.attempts else 0.0


def rejection_sample_cells(
    g: Graph, l: int, count: int, seed: int, max_attempts: int = 1_000_000
) -> RejectionSample:
    """
    Uniform l-cycles by drawing random ordered l-subsets of the nodes.

    A draw is accepted when consecutive nodes (cyclically) are adjacent. Every
    l-cycle corresponds to the same number (2l) of accepted draws, so accepted
    cells are uniform over the l-cycles of g. Stops after max_attempts draws
    and reports the shortfall instead of raising.
    """
    n = g.node_count
    if not 3 <= l <= n:
        raise InvalidInputError(f"cycle length {l} outside [3, {n}]")
    if count < 0:
        raise InvalidInputError(f"count must be nonnegative, got {count}")

    rng = make_rng(derive_seed(seed, SeedStream.REJECTION))
    adjacency = g.adjacency_matrix().astype(bool)
    sample = RejectionSample(requested=count)

    while sample.accepted < count and sample.attempts < max_attempts:
        batch = min(_REJECTION_BATCH, max_attempts - sample.attempts)
        draws = rng.random((batch, n)).argsort(axis=1)[:, :l]
        closed = adjacency[draws[:, -1], draws[:, 0]]
        for i in range(l - 1):
            closed &= adjacency[draws[:, i], draws[:, i + 1]]

        for row in range(batch):
            sample.attempts += 1
            if closed[row]:
                sample.cycles.append(Cycle.canonical(draws[row].tolist()))
                if sample.accepted == count:
                    break

    if sample.shortfall:
        logger.warning(
            f"Rejection sampling stopped after {sample.attempts} attempts with "
            f"{sample.accepted}/{count} cells of length {l}"
        )
    return sample


def _connects(node_count: int, edges: Iterable[Edge]) -> bool:
    sets = UnionFind(range(node_count))
    components = node_count
    for u, v in edges:
        if sets[u] != sets[v]:
            sets.union(u, v)
            components -= 1
    return components == 1


def _spanning_edge_sets(g: Graph) -> Iterator[List[Edge]]:
    """Include/exclude recursion over edges in order; every branch yields a tree"""
    n = g.node_count
    edges = g.edges()

    def extend(index: int, chosen: List[Edge], labels: List[int]) -> Iterator[List[Edge]]:
        if len(chosen) == n - 1:
            yield list(chosen)
            return
        u, v = edges[index]
        if labels[u] != labels[v]:
            old, new = labels[v], labels[u]
            merged = [new if label == old else label for label in labels]
            chosen.append((u, v))
            yield from extend(index + 1, chosen, merged)
            chosen.pop()
        # skipping the edge keeps a completion only if the rest still spans
        if _connects(n, chosen + edges[index + 1 :]):
            yield from extend(index + 1, chosen, labels)

    if n == 1:
        yield []
    elif g.is_connected():
        yield from extend(0, [], list(range(n)))


def enumerate_spanning_trees(g: Graph, budget: int = 100_000) -> List[RootedSpanningTree]:
    """
    Every spanning tree exactly once, rooted at node 0.

    Raises:
        BudgetExceededError: t(G) > budget
    """
    total = spanning_tree_count(g)
    if total > budget:
        raise BudgetExceededError(f"graph has {total} spanning trees, budget is {budget}")
    trees = [tree_from_edges(g, edges, root=0) for edges in _spanning_edge_sets(g)]
    logger.debug(f"Enumerated {len(trees)} spanning trees")
    return trees


def induced_cycle_frequencies(trees: Sequence[RootedSpanningTree]) -> Counter:
    """|T_c|: number of trees inducing each cycle"""
    counts: Counter = Counter()
    for tree in trees:
        for edge in non_tree_edges(tree):
            counts[induced_cycle(tree, edge)] += 1
    return counts


def tree_frequency_rho(g: Graph, cycle: Cycle, budget: int = 100_000) -> Fraction:
    """Exact rho_c as the share of enumerated spanning trees inducing cycle"""
    cycle.validate(g)
    trees = enumerate_spanning_trees(g, budget)
    hits = sum(1 for tree in trees if induces(tree, cycle))
    return Fraction(hits, len(trees))


def exhaustive_cycle_census(g: Graph, budget: int = 100_000) -> Dict[int, Fraction]:
    """
    Counting-coefficient sum over every spanning tree with exact rho_c.

    Each tree adds 1 / (rho_c * t(G)) = 1 / |T_c| for every cycle it induces,
    which totals the number of l-cycles for every length l.
    """
    trees = enumerate_spanning_trees(g, budget)
    frequencies = induced_cycle_frequencies(trees)
    totals: Dict[int, Fraction] = {}
    for tree in trees:
        for edge in non_tree_edges(tree):
            cycle = induced_cycle(tree, edge)
            totals[cycle.length] = totals.get(cycle.length, Fraction(0)) + Fraction(
                1, frequencies[cycle]
            )
    return dict(sorted(totals.items()))
