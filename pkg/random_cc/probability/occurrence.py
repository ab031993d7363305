"""
Occurrence probabilities of induced cycles

The probability rho_c that a uniform spanning tree induces cycle c is the sum over
the cycle's edges e of P[c minus e lies in the tree]. Each path probability is a
product of Laplacian random walk steps; approximating the walk on the expected
Erdos-Renyi graph gives a degree-free factor gamma(n, q, l), a last-step factor tau
and one degree term per removed edge:

    rho_estimated = sum_e tau(d(w_e)) (d(v_e)-1)(d(w_e)-1) / prod_c (d-1) * gamma
    rho_approx    = sigma_c / pi_c * tau(q) * gamma

For the directed canonical edge (u, v) = (v_i, v_{i+1}), w_e = v_{i+2} is v's other
cycle neighbour. rho_approx only needs sigma_c and pi_c, which the rooted tree
accumulators deliver in constant time.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np
import scipy.linalg

from random_cc.errors import ContractViolation, DomainError, InvalidInputError
from random_cc.graphs.graph import Graph
from random_cc.monitoring.logging_config import metrics
from random_cc.trees.spanning_forest import Cycle, PathComponents

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OccurrenceParams:
    """Node count n, assumed edge probability q and cycle length l"""

    n: int
    q: float
    l: int

    def __post_init__(self):
        if not 3 <= self.l <= self.n:
            raise InvalidInputError(f"cycle length {self.l} outside [3, {self.n}]")
        if not 0.0 < self.q <= 1.0:
            raise InvalidInputError(f"edge probability {self.q} outside (0, 1]")

    @classmethod
    def for_cycle(cls, g: Graph, cycle: Cycle, q: float) -> "OccurrenceParams":
        return cls(n=g.node_count, q=q, l=cycle.length)


def log_gamma(n: int, q: float, l: int) -> float:
    """log of ((n-2)/n)^(l-3) * (n-1)/n * ((n-1)q-1)/((n-1)q)"""
    expected_degree = (n - 1) * q
    if expected_degree <= 1.0:
        raise DomainError(
            f"(n-1)q = {expected_degree:.6g} <= 1, the occurrence approximation is undefined"
        )
    return (
        (l - 3) * math.log((n - 2) / n)
        + math.log((n - 1) / n)
        + math.log((expected_degree - 1.0) / expected_degree)
    )


def gamma(n: int, q: float, l: int) -> float:
    return math.exp(log_gamma(n, q, l))


def tau_last_estimated(d_w: float, n: int, l: int) -> float:
    """
    Last-step transition factor 1 / (1 + (d_w-2)/(n-3) * (n-l)/l).

    Exactly 1 when l == n. A degree below 2 has no detour and also yields 1.
    """
    if l == n:
        return 1.0
    if n <= 3:
        raise DomainError(f"tau is undefined for n = {n} <= 3 when l < n")
    excess = max(d_w - 2.0, 0.0)
    return 1.0 / (1.0 + excess / (n - 3) * (n - l) / l)


def tau_last_approx(n: int, q: float, l: int) -> float:
    """tau with the expected degree (n-1)q in place of d(w)"""
    return tau_last_estimated((n - 1) * q, n, l)


def clamp_rho(value: float) -> Tuple[float, bool]:
    """Clamp a probability estimate to 1 and count the event"""
    if value > 1.0:
        metrics.increment("rho_clamped")
        return 1.0, True
    return value, False


def _require_cycle_degrees(cycle: Cycle, g: Graph):
    degrees = g.degrees
    for w in cycle.nodes:
        if degrees[w] < 2:
            raise ContractViolation(f"cycle node {w} has degree {degrees[w]} < 2")


def _check_params(cycle: Cycle, g: Graph, params: OccurrenceParams):
    if params.l != cycle.length or params.n != g.node_count:
        raise ContractViolation(
            f"params (n={params.n}, l={params.l}) do not match graph n={g.node_count} "
            f"and cycle length {cycle.length}"
        )


def estimated_degree_sum(cycle: Cycle, g: Graph, n: int) -> float:
    """sum over canonical edges (v_i, v_{i+1}) of tau(d(v_{i+2})) (d(v_{i+1})-1)(d(v_{i+2})-1)"""
    degrees = g.degrees
    nodes = cycle.nodes
    l = len(nodes)
    terms = []
    for i in range(l):
        v = nodes[(i + 1) % l]
        w = nodes[(i + 2) % l]
        terms.append(
            tau_last_estimated(degrees[w], n, l) * (degrees[v] - 1) * (degrees[w] - 1)
        )
    return math.fsum(terms)


def cycle_degree_sum(cycle: Cycle, g: Graph) -> float:
    """sigma_c: sum of (d(a)-1)(d(b)-1) over the cycle's edges"""
    degrees = g.degrees
    return math.fsum((degrees[a] - 1) * (degrees[b] - 1) for a, b in cycle.directed_edges())


def cycle_log_degree_product(cycle: Cycle, g: Graph) -> float:
    """log pi_c: log of the product of (d(w)-1) over the cycle's nodes"""
    degrees = g.degrees
    return math.fsum(math.log(degrees[w] - 1) for w in cycle.nodes)


def rho_estimated(cycle: Cycle, g: Graph, params: OccurrenceParams) -> float:
    """Occurrence probability with per-node last-step factors, clamped to 1"""
    _check_params(cycle, g, params)
    _require_cycle_degrees(cycle, g)
    log_value = (
        math.log(estimated_degree_sum(cycle, g, params.n))
        - cycle_log_degree_product(cycle, g)
        + log_gamma(params.n, params.q, params.l)
    )
    return clamp_rho(math.exp(log_value))[0]


def rho_approx(cycle: Cycle, g: Graph, params: OccurrenceParams) -> float:
    """Occurrence probability with the degree-free last-step factor, clamped to 1"""
    _check_params(cycle, g, params)
    _require_cycle_degrees(cycle, g)
    log_value = log_rho_approx_from_sums(
        cycle_degree_sum(cycle, g),
        cycle_log_degree_product(cycle, g),
        params.n,
        params.q,
        params.l,
    )
    return clamp_rho(math.exp(log_value))[0]


def log_rho_approx_from_sums(sigma_cycle: float, log_pi: float, n: int, q: float, l: int) -> float:
    """Unclamped log rho_approx from cycle sums"""
    return (
        math.log(sigma_cycle)
        - log_pi
        + log_gamma(n, q, l)
        + math.log(tau_last_approx(n, q, l))
    )


class OccurrenceModel:
    """
    Occurrence probabilities for one skeleton and assumed edge probability q.

    gamma and tau depend only on the cycle length, so they are cached per length;
    the sampler and the census evaluate millions of cycles against one model.
    """

    def __init__(self, g: Graph, q: float):
        if not 0.0 < q <= 1.0:
            raise InvalidInputError(f"edge probability {q} outside (0, 1]")
        self.graph = g
        self.n = g.node_count
        self.q = q
        self._log_gamma = lru_cache(maxsize=None)(self._compute_log_gamma)
        self._log_tau_approx = lru_cache(maxsize=None)(self._compute_log_tau_approx)

    def _compute_log_gamma(self, l: int) -> float:
        return log_gamma(self.n, self.q, l)

    def _compute_log_tau_approx(self, l: int) -> float:
        return math.log(tau_last_approx(self.n, self.q, l))

    def log_rho_approx_components(self, components: PathComponents) -> float:
        """Unclamped log rho_approx from accumulator sums in O(1)"""
        l = components.length
        return (
            math.log(components.sigma_cycle)
            - components.log_pi
            + self._log_gamma(l)
            + self._log_tau_approx(l)
        )

    def log_rho_approx(self, cycle: Cycle) -> float:
        l = cycle.length
        return (
            math.log(cycle_degree_sum(cycle, self.graph))
            - cycle_log_degree_product(cycle, self.graph)
            + self._log_gamma(l)
            + self._log_tau_approx(l)
        )

    def log_rho_estimated(self, cycle: Cycle) -> float:
        l = cycle.length
        return (
            math.log(estimated_degree_sum(cycle, self.graph, self.n))
            - cycle_log_degree_product(cycle, self.graph)
            + self._log_gamma(l)
        )


def _lrw_path_probability(laplacian: np.ndarray, adjacency: Tuple[Tuple[int, ...], ...], path) -> float:
    """
    Probability that the Laplacian random walk from path[0] to path[-1] follows path.

    Each step solves the Dirichlet problem f(target) = 1, f(visited) = 0, f harmonic
    elsewhere, and moves to neighbour y with probability f(y) / sum of f over the
    neighbours of the current node.
    """
    n = laplacian.shape[0]
    target = path[-1]
    visited = {path[0]}
    probability = 1.0

    for current, step in zip(path[:-1], path[1:]):
        # component of the target once visited nodes are removed
        reachable = {target}
        frontier = [target]
        while frontier:
            x = frontier.pop()
            for y in adjacency[x]:
                if y not in reachable and y not in visited:
                    reachable.add(y)
                    frontier.append(y)
        if step not in reachable:
            return 0.0

        f = np.zeros(n)
        f[target] = 1.0
        interior = sorted(reachable - {target})
        if interior:
            index = np.array(interior)
            rhs = np.array([1.0 if target in adjacency[i] else 0.0 for i in interior])
            try:
                f[index] = scipy.linalg.solve(laplacian[np.ix_(index, index)], rhs)
            except (scipy.linalg.LinAlgError, ValueError):
                return 0.0

        normalizer = math.fsum(f[y] for y in adjacency[current])
        if normalizer <= 0.0:
            return 0.0
        probability *= f[step] / normalizer
        visited.add(step)

    return probability


def rho_exact_lrw(cycle: Cycle, g: Graph, direction: str = "forward") -> float:
    """
    Exact occurrence probability by Laplacian random walks.

    For each canonical edge (v_i, v_{i+1}) removed, the remaining path runs
    v_{i+1} -> ... -> v_i ("forward") or v_i -> ... -> v_{i+1} ("backward"). Both give
    P[path in a uniform spanning tree]. Small graphs only: every step solves a
    linear system of size up to n.
    """
    if direction not in ("forward", "backward"):
        raise InvalidInputError(f"direction must be 'forward' or 'backward', got {direction!r}")
    cycle.validate(g)
    laplacian = g.laplacian().astype(float)
    nodes = list(cycle.nodes)
    l = len(nodes)

    contributions = []
    for i in range(l):
        path = [nodes[(i + 1 + k) % l] for k in range(l)]
        if direction == "backward":
            path.reverse()
        contributions.append(_lrw_path_probability(laplacian, g.adjacency, path))
    return math.fsum(contributions)
