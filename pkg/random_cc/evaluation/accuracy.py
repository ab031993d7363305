"""
Accuracy of occurrence-probability approximations against exact references

Cycles are harvested from a few uniform spanning trees (so the study sees the
cycles a sampler actually meets), then each approximation is compared with a
reference probability on a log10 scale. A length-mean baseline, assigning every
cycle the mean reference probability of its length, shows how much of the accuracy
comes from per-cycle degree information.
"""

import logging
import math
from enum import Enum
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from random_cc.graphs.graph import Graph, mle_edge_probability
from random_cc.oracles.oracles import TransferCurrentOracle, rho_exact_matrix_tree, rho_monte_carlo
from random_cc.probability.occurrence import OccurrenceParams, rho_approx, rho_estimated
from random_cc.trees.spanning_forest import Cycle, induced_cycle, non_tree_edges, wilson_ust
from random_cc.utils.seeding import SeedStream, derive_seed, make_rng

logger = logging.getLogger(__name__)

METHODS = ("estimated", "approx", "baseline")


class ReferenceMethod(Enum):
    TRANSFER_CURRENT = "transfer-current"
    MATRIX_TREE = "matrix-tree"
    MONTE_CARLO = "monte-carlo"

    def __str__(self):
        return self.value


def harvest_cycles(g: Graph, trees: int, seed: int) -> List[Cycle]:
    """Distinct cycles induced by trees uniform spanning trees, in first-seen order"""
    seen = set()
    cycles = []
    for index in range(trees):
        tree = wilson_ust(g, rng=make_rng(derive_seed(seed, SeedStream.HARVEST, index)))
        for edge in non_tree_edges(tree):
            cycle = induced_cycle(tree, edge)
            if cycle not in seen:
                seen.add(cycle)
                cycles.append(cycle)
    return cycles


def _reference_values(
    g: Graph,
    cycles: Sequence[Cycle],
    reference: ReferenceMethod,
    trials: int,
    seed: int,
    workers: int,
) -> List[float]:
    if reference is ReferenceMethod.TRANSFER_CURRENT:
        oracle = TransferCurrentOracle(g)
        return [oracle.rho(c) for c in cycles]
    if reference is ReferenceMethod.MATRIX_TREE:
        return [float(rho_exact_matrix_tree(g, c)) for c in cycles]
    return [
        rho_monte_carlo(g, c, trials, derive_seed(seed, SeedStream.MONTE_CARLO, i), workers).estimate
        for i, c in enumerate(cycles)
    ]


def _log10_error(values: pd.Series, reference: pd.Series) -> pd.Series:
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.log10(values / reference)


def approximation_accuracy(
    g: Graph,
    cycles: Sequence[Cycle],
    q: Optional[float] = None,
    reference: ReferenceMethod = ReferenceMethod.TRANSFER_CURRENT,
    trials: int = 100_000,
    seed: int = 0,
    workers: int = 1,
) -> pd.DataFrame:
    """
    One row per cycle with the reference probability, both approximations, the
    length-mean baseline and their log10 errors
    """
    q = q if q is not None else mle_edge_probability(g)
    rows = []
    for cycle, rho_ref in zip(cycles, _reference_values(g, cycles, reference, trials, seed, workers)):
        params = OccurrenceParams.for_cycle(g, cycle, q)
        rows.append(
            {
                "cycle": "-".join(str(v) for v in cycle.nodes),
                "length": cycle.length,
                "rho_ref": rho_ref,
                "rho_estimated": rho_estimated(cycle, g, params),
                "rho_approx": rho_approx(cycle, g, params),
            }
        )
    frame = pd.DataFrame(
        rows, columns=["cycle", "length", "rho_ref", "rho_estimated", "rho_approx"]
    )
    frame["rho_baseline"] = frame.groupby("length")["rho_ref"].transform("mean")
    for method in METHODS:
        frame[f"log10_error_{method}"] = _log10_error(frame[f"rho_{method}"], frame["rho_ref"])
    logger.debug(f"Accuracy table for {len(frame)} cycles against {reference}")
    return frame


def summarize_accuracy(frame: pd.DataFrame, tolerance: float = 1.0) -> Dict[str, Dict[str, float]]:
    """Share of cycles within tolerance orders of magnitude, and median |log10 error|"""
    summary = {}
    for method in METHODS:
        errors = frame[f"log10_error_{method}"].abs()
        finite = errors[np.isfinite(errors)]
        summary[method] = {
            "within_tolerance": float((finite < tolerance).sum() / len(errors)) if len(errors) else math.nan,
            "median_abs_log10_error": float(finite.median()) if len(finite) else math.nan,
        }
    return summary
