"""
Lifting Sampler for random-cc

Lifts a 1-skeleton to a two-dimensional cell complex. s uniform spanning trees are
drawn; every cycle a tree induces is selected with probability

    rho'_c = (1 - (1 - P_l)^(1/s)) / rho_c

so that, over all trees, each l-cycle ends up in the complex with probability P_l.
Selected cycles are stored once even when several trees select them.

Key Features:
- Uniform mode: a target probability P_l per length
- ExpectedCells mode: a census pass plans P_l so that about nu cells are drawn,
  spread evenly over the lengths that occur more than t times
- Undersampling detection: rho'_c > 1 is clamped and reported
- Full model pipeline from ER(n, p), and the Linial-Meshulam special case
"""

import itertools
import logging
import math
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from typing import Any, Dict, List, Optional, Set, Tuple

import numpy as np

from random_cc.errors import (
    DisconnectedGraphError,
    DomainError,
    InvalidInputError,
    NoEligibleLengthsError,
)
from random_cc.graphs.graph import Graph, GraphModelSpec, generate, mle_edge_probability
from random_cc.monitoring.logging_config import LoggedOperation, metrics, set_tree_index
from random_cc.sampling.cycle_census import CycleCensus, estimate_counts
from random_cc.sampling.induced_cycles import Approximation, CycleEvaluator
from random_cc.topology.complex_analysis import CellComplex2
from random_cc.trees.spanning_forest import Cycle, wilson_ust
from random_cc.utils.parallel import ordered_map
from random_cc.utils.seeding import SeedStream, derive_seed, make_rng

logger = logging.getLogger(__name__)

_UNDERSAMPLING_TOLERANCE = 1e-9  # log-space slack for rho computed as 1 - eps


class SamplingMode(Enum):
    UNIFORM = "uniform"
    EXPECTED_CELLS = "expected_cells"

    def __str__(self):
        return self.value


def parse_length_probabilities(text: str) -> Dict[int, float]:
    """Parse "L:P,L:P,..." into {length: probability}"""
    result: Dict[int, float] = {}
    for item in filter(None, (part.strip() for part in text.split(","))):
        length, sep, probability = item.partition(":")
        if not sep:
            raise InvalidInputError(f"expected 'length:probability', got {item!r}")
        try:
            result[int(length)] = float(probability)
        except ValueError:
            raise InvalidInputError(f"expected 'length:probability', got {item!r}")
    return result


@dataclass(frozen=True)
class SamplingConfig:
    """Parameters of one lifting run"""

    trees: int = 1000
    mode: SamplingMode = SamplingMode.UNIFORM
    target_probabilities: Dict[int, float] = field(default_factory=dict)  # P_l, unlisted = 0
    expected_cells: float = 0.0  # nu
    threshold: int = 4  # t
    approximation: Approximation = Approximation.FAST
    seed: int = 0
    edge_probability: Optional[float] = None  # q; the MLE when None
    workers: int = 1

    def __post_init__(self):
        if self.trees < 1:
            raise InvalidInputError(f"trees must be at least 1, got {self.trees}")
        for length, probability in self.target_probabilities.items():
            if length < 3:
                raise InvalidInputError(f"cycle length {length} below 3")
            if not 0.0 <= probability <= 1.0:
                raise InvalidInputError(f"P_{length} = {probability} outside [0, 1]")
        if self.expected_cells < 0:
            raise InvalidInputError(f"expected cells must be nonnegative, got {self.expected_cells}")
        if self.threshold < 0:
            raise InvalidInputError(f"threshold must be nonnegative, got {self.threshold}")
        if self.edge_probability is not None and not 0.0 < self.edge_probability <= 1.0:
            raise InvalidInputError(f"edge probability {self.edge_probability} outside (0, 1]")

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["mode"] = self.mode.value
        data["approximation"] = self.approximation.value
        data["target_probabilities"] = {str(l): p for l, p in sorted(self.target_probabilities.items())}
        return data


@dataclass
class LiftingReport:
    """Diagnostics of a lifting run"""

    trees: int
    mode: str
    approximation: str
    seed: int
    target_probabilities: Dict[int, float] = field(default_factory=dict)
    cycles_evaluated: int = 0
    cells_selected: int = 0
    duplicate_hits: int = 0
    rho_clamped: int = 0
    undersampled_edges: int = 0
    undersampled_lengths: List[int] = field(default_factory=list)
    census: Optional[CycleCensus] = None

    @property
    def undersampled(self) -> bool:
        return bool(self.undersampled_lengths)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "trees": self.trees,
            "mode": self.mode,
            "approximation": self.approximation,
            "seed": self.seed,
            "target_probabilities": {str(l): p for l, p in sorted(self.target_probabilities.items())},
            "cycles_evaluated": self.cycles_evaluated,
            "cells_selected": self.cells_selected,
            "duplicate_hits": self.duplicate_hits,
            "rho_clamped": self.rho_clamped,
            "undersampled_edges": self.undersampled_edges,
            "undersampled_lengths": list(self.undersampled_lengths),
        }


def _log_exposure_target(target: float, trees: int) -> float:
    """log(1 - (1 - P)^(1/s)); -inf for P = 0"""
    if target == 0.0:
        return -math.inf
    if target == 1.0:
        return 0.0
    return math.log(-math.expm1(math.log1p(-target) / trees))


def selection_probability(target: float, rho: float, trees: int) -> float:
    """
    Per-tree selection probability rho'_c giving overall inclusion P_l.

    Values above 1 mean undersampling; they are returned as is for the caller to
    flag and clamp.
    """
    if not 0.0 <= target <= 1.0:
        raise InvalidInputError(f"target probability {target} outside [0, 1]")
    if trees < 1:
        raise InvalidInputError(f"trees must be at least 1, got {trees}")
    if not 0.0 < rho <= 1.0:
        raise DomainError(f"occurrence probability {rho} outside (0, 1]")
    if target == 0.0:
        return 0.0
    if target == 1.0:
        return 1.0 / rho
    return -math.expm1(math.log1p(-target) / trees) / rho


def plan_expected_cells(census: CycleCensus, nu: float, threshold: int) -> Dict[int, float]:
    """
    P_l = min(1, (nu / |L|) / N~_l) for L = {l : o_l > t}

    Raises:
        NoEligibleLengthsError: no length occurred more than threshold times
    """
    if nu < 0:
        raise InvalidInputError(f"nu must be nonnegative, got {nu}")
    eligible = census.eligible_lengths(threshold)
    if not eligible:
        raise NoEligibleLengthsError()
    per_length = nu / len(eligible)
    plan = {}
    for l in eligible:
        estimate = census.estimate(l)
        assert estimate > 0.0, f"length {l} occurred but has no estimate"
        plan[l] = min(1.0, per_length / estimate)
    return plan


@dataclass
class _TreeSelection:
    cycles: List[Cycle]
    evaluated: int
    clamped: int
    undersampled_edges: int
    undersampled_lengths: Set[int]


def _select_from_tree(
    g: Graph,
    evaluator: CycleEvaluator,
    log_targets: Dict[int, float],
    seed: int,
    index: int,
) -> _TreeSelection:
    set_tree_index(index)
    rng = make_rng(derive_seed(seed, SeedStream.SAMPLING_TREES, index))
    tree = wilson_ust(g, rng=rng)
    induced = evaluator.evaluate(tree)
    draws = rng.random(len(induced)).tolist()

    selection = _TreeSelection([], len(induced), 0, 0, set())
    for item, draw in zip(induced, draws):
        selection.clamped += item.clamped
        log_target = log_targets.get(item.length)
        if log_target is None:
            continue
        log_select = log_target - item.log_rho
        if log_select > _UNDERSAMPLING_TOLERANCE:
            selection.undersampled_edges += 1
            selection.undersampled_lengths.add(item.length)
        if log_select > 0.0:
            log_select = 0.0
        if draw < math.exp(log_select):
            selection.cycles.append(evaluator.materialize(tree, item))
    return selection


def sample_lifting(g: Graph, cfg: SamplingConfig) -> Tuple[CellComplex2, LiftingReport]:
    """
    Lift a connected skeleton to a two-dimensional cell complex.

    Tree i of the sampling pass draws from derive_seed(seed, SAMPLING_TREES, i); the
    census pass of ExpectedCells mode uses the independent CENSUS_TREES stream.
    Cells are merged in (tree index, edge index) order.

    Raises:
        DisconnectedGraphError: the skeleton is not connected
        NoEligibleLengthsError: ExpectedCells mode found no length above threshold
    """
    if not g.is_connected():
        raise DisconnectedGraphError(
            f"lifting needs a connected skeleton ({g.component_count} components)"
        )
    q = None
    if cfg.approximation is not Approximation.EXACT:
        q = cfg.edge_probability if cfg.edge_probability is not None else mle_edge_probability(g)
        metrics.gauge("edge_probability", q)

    report = LiftingReport(
        trees=cfg.trees,
        mode=cfg.mode.value,
        approximation=cfg.approximation.value,
        seed=cfg.seed,
    )

    with LoggedOperation("sample_lifting", logger, trees=cfg.trees, mode=cfg.mode.value):
        if cfg.mode is SamplingMode.EXPECTED_CELLS:
            report.census = estimate_counts(
                g,
                cfg.trees,
                cfg.approximation,
                seed=cfg.seed,
                edge_probability=q,
                workers=cfg.workers,
            )
            targets = plan_expected_cells(report.census, cfg.expected_cells, cfg.threshold)
        else:
            targets = {
                l: p for l, p in cfg.target_probabilities.items() if l <= g.node_count
            }
        report.target_probabilities = dict(sorted(targets.items()))

        log_targets = {
            l: _log_exposure_target(p, cfg.trees) for l, p in targets.items() if p > 0.0
        }
        if not log_targets:
            logger.info("All target probabilities are zero, no cells to sample")
            return CellComplex2(g), report

        evaluator = CycleEvaluator(g, cfg.approximation, q)
        selections = ordered_map(
            lambda i: _select_from_tree(g, evaluator, log_targets, cfg.seed, i),
            range(cfg.trees),
            workers=cfg.workers,
        )

    seen: Set[Cycle] = set()
    cells: List[Cycle] = []
    undersampled: Set[int] = set()
    for selection in selections:
        report.cycles_evaluated += selection.evaluated
        report.rho_clamped += selection.clamped
        report.undersampled_edges += selection.undersampled_edges
        undersampled |= selection.undersampled_lengths
        for cycle in selection.cycles:
            if cycle in seen:
                report.duplicate_hits += 1
            else:
                seen.add(cycle)
                cells.append(cycle)
    report.cells_selected = len(cells)
    report.undersampled_lengths = sorted(undersampled)

    metrics.increment("trees_sampled", cfg.trees)
    metrics.increment("cycles_evaluated", report.cycles_evaluated)
    metrics.increment("cells_selected", report.cells_selected)
    metrics.increment("duplicate_hits", report.duplicate_hits)
    metrics.increment("rho_clamped", report.rho_clamped)
    metrics.increment("undersampled_edges", report.undersampled_edges)
    if report.undersampled:
        logger.warning(
            f"Undersampled lengths {report.undersampled_lengths}: "
            f"{report.undersampled_edges} selections needed rho' > 1, increase the tree count"
        )

    return CellComplex2(g, tuple(cells)), report


def sample_random_cell_complex(
    n: int, p: float, cfg: SamplingConfig
) -> Tuple[Graph, CellComplex2, LiftingReport]:
    """
    Full two-stage model: an ER(n, p) skeleton, then the lifting with q = p
    unless cfg sets an edge probability of its own.

    The skeleton seed is derive_seed(cfg.seed, GRAPH).

    Raises:
        DisconnectedGraphError: the drawn skeleton is not connected
    """
    spec = GraphModelSpec.erdos_renyi(n, p, seed=derive_seed(cfg.seed, SeedStream.GRAPH))
    skeleton = generate(spec)
    q = cfg.edge_probability if cfg.edge_probability is not None else spec.known_edge_probability()
    complex_, report = sample_lifting(skeleton, replace(cfg, edge_probability=q))
    return skeleton, complex_, report


def linial_meshulam(n: int, p: float, seed: int) -> CellComplex2:
    """
    Complete skeleton K_n with every triangle included independently with
    probability p, decided in lexicographic triangle order.
    """
    if n < 0:
        raise InvalidInputError(f"n must be nonnegative, got {n}")
    if not 0.0 <= p <= 1.0:
        raise InvalidInputError(f"triangle probability {p} outside [0, 1]")
    skeleton = generate(GraphModelSpec.complete(n))
    triangles = list(itertools.combinations(range(n), 3))
    draws = make_rng(derive_seed(seed, SeedStream.LINIAL_MESHULAM)).random(len(triangles))
    chosen = np.flatnonzero(draws < p).tolist()
    return CellComplex2(skeleton, tuple(Cycle(triangles[i]) for i in chosen))
