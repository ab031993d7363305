"""
Cycle census: estimated, analytic and exact simple-cycle counts per length

Each spanning tree adds the counting coefficient 1 / (rho_c * s) to the estimate of
its cycle's length for every cycle it induces. Cycles seen in several trees are
counted every time; the coefficient already accounts for repeated exposure.
"""

import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

import pandas as pd
from scipy.special import gammaln

from random_cc.errors import BudgetExceededError, InvalidInputError
from random_cc.graphs.graph import Graph, mle_edge_probability
from random_cc.monitoring.logging_config import LoggedOperation, metrics, set_tree_index
from random_cc.probability.occurrence import log_gamma, tau_last_estimated
from random_cc.sampling.induced_cycles import Approximation, CycleEvaluator
from random_cc.trees.spanning_forest import Cycle, wilson_ust
from random_cc.utils.parallel import ordered_map
from random_cc.utils.seeding import SeedStream, derive_seed, make_rng

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["length", "estimate", "occurrences", "apriori"]


@dataclass
class CycleCensus:
    """Per-length estimates N~_l and occurrence counts o_l"""

    node_count: int
    estimates: Dict[int, float] = field(default_factory=dict)
    occurrences: Dict[int, int] = field(default_factory=dict)
    trees_used: int = 0
    seed: Optional[int] = None
    approximation: str = Approximation.FAST.value
    apriori: Dict[int, float] = field(default_factory=dict)
    exact: Optional[Dict[int, int]] = None

    def estimate(self, l: int) -> float:
        return self.estimates.get(l, 0.0)

    def occurrence(self, l: int) -> int:
        return self.occurrences.get(l, 0)

    def eligible_lengths(self, threshold: int) -> List[int]:
        """Lengths with more than threshold occurrences, ascending"""
        return sorted(l for l, o in self.occurrences.items() if o > threshold)

    def total_estimate(self) -> float:
        return math.fsum(self.estimates.values())

    def to_frame(self) -> pd.DataFrame:
        columns = CSV_COLUMNS + (["exact"] if self.exact is not None else [])
        rows = []
        for l in range(3, self.node_count + 1):
            row = {
                "length": l,
                "estimate": self.estimate(l),
                "occurrences": self.occurrence(l),
                "apriori": self.apriori.get(l, 0.0),
            }
            if self.exact is not None:
                row["exact"] = self.exact.get(l, 0)
            if any(row[c] for c in columns[1:]):
                rows.append(row)
        return pd.DataFrame(rows, columns=columns)

    def to_csv(self) -> str:
        return self.to_frame().to_csv(index=False, lineterminator="\n")


def count_complete(n: int, l: int) -> int:
    """Number of l-cycles in K_n: C(n, l) (l-1)! / 2"""
    if not 3 <= l <= n:
        raise InvalidInputError(f"cycle length {l} outside [3, {n}]")
    return math.comb(n, l) * math.factorial(l - 1) // 2


def log_count_complete(n: int, l: int) -> float:
    if not 3 <= l <= n:
        raise InvalidInputError(f"cycle length {l} outside [3, {n}]")
    return float(gammaln(n + 1) - gammaln(n - l + 1)) - math.log(2 * l)


def apriori_count_er(n: int, p: float, l: int) -> float:
    """Expected number of l-cycles in ER(n, p), evaluated in log-space"""
    if not 0.0 <= p <= 1.0:
        raise InvalidInputError(f"edge probability {p} outside [0, 1]")
    if p == 0.0:
        return 0.0
    return math.exp(log_count_complete(n, l) + l * math.log(p))


def log10_trees_per_cycle_complete(n: int, l: int) -> float:
    """
    log10 of 1 / (N_l * rho~_c) on K_n: how many spanning trees are needed to see one
    l-cycle in expectation, with rho~ the per-node estimate (exact on K_n)

    For a Hamiltonian cycle of K_100 this gives about 38.3. The quoted estimate of
    about 10^34.3 trees for K_100 comes from log10_hamiltonian_limit_bound instead.
    """
    d = n - 1
    log_rho = (
        math.log(l)
        + math.log(tau_last_estimated(d, n, l))
        + (2 - l) * math.log(d - 1)
        + log_gamma(n, 1.0, l)
    )
    return -(log_count_complete(n, l) + log_rho) / math.log(10)


def log10_hamiltonian_limit_bound(n: int) -> float:
    """
    log10 of 2 n^(n-2) / (n! (n-2)^2), the closed-form worst-case tree count for a
    Hamiltonian cycle of K_n that keeps the (n-2)^2 degree term of a single removed
    edge without cancelling it against the path product

    The quoted estimate of about 10^34.3 trees for a Hamiltonian cycle of K_100 is
    this bound at n = 100.
    """
    log_value = math.lgamma(n + 1) - math.log(2) + 2 * math.log(n - 2) - (n - 2) * math.log(n)
    return -log_value / math.log(10)


def _census_tree(
    g: Graph, evaluator: CycleEvaluator, seed: int, index: int, trees: int
) -> Tuple[Dict[int, float], Dict[int, int], int]:
    set_tree_index(index)
    tree = wilson_ust(g, rng=make_rng(derive_seed(seed, SeedStream.CENSUS_TREES, index)))
    terms: Dict[int, List[float]] = defaultdict(list)
    counts: Dict[int, int] = defaultdict(int)
    clamped = 0
    for induced in evaluator.evaluate(tree):
        terms[induced.length].append(math.exp(-induced.log_rho) / trees)
        counts[induced.length] += 1
        clamped += induced.clamped
    return {l: math.fsum(v) for l, v in terms.items()}, dict(counts), clamped


def estimate_counts(
    g: Graph,
    trees: int,
    approximation: Approximation = Approximation.FAST,
    seed: int = 0,
    edge_probability: Optional[float] = None,
    workers: int = 1,
) -> CycleCensus:
    """
    Estimate the number of simple cycles per length from s uniform spanning trees.

    Args:
        g: connected skeleton
        trees: number of spanning trees s
        approximation: occurrence probability variant, the same one the sampler uses
        seed: master seed; tree i draws from derive_seed(seed, CENSUS_TREES, i)
        edge_probability: q for the approximations, the MLE when None
        workers: thread count, never changes the result
    """
    if trees < 1:
        raise InvalidInputError(f"trees must be at least 1, got {trees}")
    q = edge_probability if edge_probability is not None else mle_edge_probability(g)
    metrics.gauge("edge_probability", q)
    evaluator = CycleEvaluator(g, approximation, q if approximation is not Approximation.EXACT else None)

    with LoggedOperation(
        "estimate_counts", logger, trees=trees, approximation=approximation.value
    ):
        per_tree = ordered_map(
            lambda i: _census_tree(g, evaluator, seed, i, trees), range(trees), workers=workers
        )

    sums: Dict[int, List[float]] = defaultdict(list)
    occurrences: Dict[int, int] = defaultdict(int)
    clamped = 0
    for tree_sums, tree_counts, tree_clamped in per_tree:
        for l, value in tree_sums.items():
            sums[l].append(value)
        for l, count in tree_counts.items():
            occurrences[l] += count
        clamped += tree_clamped

    metrics.increment("trees_sampled", trees)
    metrics.increment("census_terms", sum(occurrences.values()))
    if clamped:
        metrics.increment("rho_clamped", clamped)
        logger.warning(f"Census clamped {clamped} occurrence probabilities to 1")

    n = g.node_count
    return CycleCensus(
        node_count=n,
        estimates={l: math.fsum(sums[l]) for l in sorted(sums)},
        occurrences=dict(sorted(occurrences.items())),
        trees_used=trees,
        seed=seed,
        approximation=approximation.value,
        apriori={l: apriori_count_er(n, q, l) for l in range(3, n + 1)},
    )


def enumerate_simple_cycles(g: Graph, max_visited_path_nodes: int = 20_000_000) -> Iterator[Cycle]:
    """
    Every simple cycle exactly once, by backtracking from each start node s over
    nodes larger than s; a closed path is reported only in the direction where its
    second node is smaller than its last.

    Raises:
        BudgetExceededError: more than max_visited_path_nodes path extensions
    """
    adjacency = g.adjacency
    n = g.node_count
    visited = 0
    for s in range(n):
        path = [s]
        on_path = [False] * n
        on_path[s] = True
        stack = [iter([w for w in adjacency[s] if w > s])]
        while stack:
            w = next(stack[-1], None)
            if w is None:
                stack.pop()
                on_path[path.pop()] = False
                continue
            if on_path[w]:
                continue
            visited += 1
            if visited > max_visited_path_nodes:
                raise BudgetExceededError(
                    f"cycle enumeration exceeded {max_visited_path_nodes} visited path nodes"
                )
            path.append(w)
            on_path[w] = True
            if len(path) >= 3 and path[1] < w and g.has_edge(w, s):
                yield Cycle(tuple(path))
            stack.append(iter([x for x in adjacency[w] if x > s]))


def exact_counts(
    g: Graph,
    max_cycle_space_dimension: int = 40,
    max_visited_path_nodes: int = 20_000_000,
) -> Dict[int, int]:
    """
    Exact number of simple cycles per length.

    Raises:
        BudgetExceededError: cycle space too large or path budget exhausted
    """
    dimension = g.cycle_space_dimension()
    if dimension > max_cycle_space_dimension:
        raise BudgetExceededError(
            f"cycle space dimension {dimension} exceeds budget {max_cycle_space_dimension}"
        )
    counts: Dict[int, int] = defaultdict(int)
    for cycle in enumerate_simple_cycles(g, max_visited_path_nodes):
        counts[cycle.length] += 1
    return dict(sorted(counts.items()))
