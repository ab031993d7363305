"""
Per-tree evaluation of induced cycles

Shared by the census and the lifting sampler so both use the same occurrence
probability for a cycle: biases of an approximation then cancel between the
estimated counts and the selection probabilities.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

from random_cc.errors import DomainError
from random_cc.graphs.graph import Edge, Graph
from random_cc.oracles.oracles import TransferCurrentOracle
from random_cc.probability.occurrence import OccurrenceModel
from random_cc.trees.spanning_forest import (
    Cycle,
    RootedSpanningTree,
    induced_cycle,
    non_tree_edges,
    offline_lca,
    path_components,
)

logger = logging.getLogger(__name__)


class Approximation(Enum):
    """Source of the occurrence probability rho_c"""

    ESTIMATED = "estimated"  # per-node last-step factors, materializes every cycle
    FAST = "fast"  # accumulator sums, O(1) per cycle
    EXACT = "exact"  # transfer-current determinants

    def __str__(self):
        return self.value


@dataclass
class InducedCycle:
    """One non-tree edge of a tree and the cycle it closes"""

    edge_index: int
    edge: Edge
    length: int
    log_rho: float  # clamped to at most 0
    clamped: bool
    cycle: Optional[Cycle] = None

    @property
    def rho(self) -> float:
        return math.exp(self.log_rho)


class CycleEvaluator:
    """Occurrence probabilities for every cycle a tree induces"""

    def __init__(self, g: Graph, approximation: Approximation, q: Optional[float] = None):
        self.graph = g
        self.approximation = approximation
        self._model: Optional[OccurrenceModel] = None
        self._oracle: Optional[TransferCurrentOracle] = None
        if approximation is Approximation.EXACT:
            self._oracle = TransferCurrentOracle(g)
        else:
            if q is None:
                raise DomainError("approximate occurrence probabilities need an edge probability")
            self._model = OccurrenceModel(g, q)

    def evaluate(self, tree: RootedSpanningTree) -> List[InducedCycle]:
        """Cycles in edge-index order (lexicographic non-tree edges)"""
        edges = non_tree_edges(tree)
        if self.approximation is Approximation.FAST:
            return self._evaluate_fast(tree, edges)

        results = []
        for index, edge in enumerate(edges):
            cycle = induced_cycle(tree, edge)
            if self._oracle is not None:
                rho = self._oracle.rho(cycle)
                log_rho = math.log(rho) if rho > 0.0 else -math.inf
            else:
                log_rho = self._model.log_rho_estimated(cycle)
            results.append(self._make(index, edge, cycle.length, log_rho, cycle))
        return results

    def _evaluate_fast(self, tree: RootedSpanningTree, edges: List[Edge]) -> List[InducedCycle]:
        lcas = offline_lca(tree, edges)
        model = self._model
        results = []
        for index, ((u, v), lca) in enumerate(zip(edges, lcas)):
            components = path_components(tree, u, v, lca)
            log_rho = model.log_rho_approx_components(components)
            results.append(self._make(index, (u, v), components.length, log_rho, None))
        return results

    @staticmethod
    def _make(index: int, edge: Edge, length: int, log_rho: float, cycle: Optional[Cycle]) -> InducedCycle:
        clamped = log_rho > 0.0
        return InducedCycle(
            edge_index=index,
            edge=edge,
            length=length,
            log_rho=0.0 if clamped else log_rho,
            clamped=clamped,
            cycle=cycle,
        )

    def materialize(self, tree: RootedSpanningTree, induced: InducedCycle) -> Cycle:
        if induced.cycle is None:
            induced.cycle = induced_cycle(tree, induced.edge)
        return induced.cycle
