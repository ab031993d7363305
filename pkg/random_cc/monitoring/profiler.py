"""
Runtime Profiler for random-cc benchmarks

Records wall-clock timings of sampling runs per problem size and fits the
empirical scaling exponent on a log-log scale.

Key Features:
- Per-size timing of repeated runs
- Log-log slope fit of runtime against n
- Tabular export through pandas
"""

import logging
import statistics
from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)


@dataclass
class SizeProfile:
    """Timings collected for one problem size"""

    size: int
    edge_count: int = 0
    run_times: List[float] = field(default_factory=list)
    cells: List[int] = field(default_factory=list)

    @property
    def mean_time(self) -> float:
        return statistics.mean(self.run_times) if self.run_times else 0.0

    @property
    def min_time(self) -> float:
        return min(self.run_times) if self.run_times else 0.0


class RuntimeProfiler:
    """
    Collects runtimes per problem size and summarizes the scaling behaviour
    """

    def __init__(self):
        self.size_profiles: Dict[int, SizeProfile] = {}
        logger.debug("Runtime profiler initialized")

    def record(self, size: int, elapsed: float, edge_count: int = 0, cells: int = 0):
        """Record one timed run of the given size"""
        profile = self.size_profiles.setdefault(size, SizeProfile(size=size))
        profile.edge_count = edge_count
        profile.run_times.append(elapsed)
        profile.cells.append(cells)

    def loglog_slope(self) -> float:
        """
        Least-squares slope of log(mean time) against log(size)

        Returns:
            float: scaling exponent, nan with fewer than two sizes
        """
        points = [
            (p.size, p.mean_time)
            for p in sorted(self.size_profiles.values(), key=lambda p: p.size)
            if p.mean_time > 0
        ]
        if len(points) < 2:
            return float("nan")
        sizes = np.log([p[0] for p in points])
        times = np.log([p[1] for p in points])
        slope, _intercept = np.polyfit(sizes, times, 1)
        return float(slope)

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for profile in sorted(self.size_profiles.values(), key=lambda p: p.size):
            rows.append(
                {
                    "n": profile.size,
                    "m": profile.edge_count,
                    "runs": len(profile.run_times),
                    "mean_seconds": profile.mean_time,
                    "min_seconds": profile.min_time,
                    "mean_cells": statistics.mean(profile.cells) if profile.cells else 0.0,
                }
            )
        return pd.DataFrame(
            rows, columns=["n", "m", "runs", "mean_seconds", "min_seconds", "mean_cells"]
        )

    def reset(self):
        self.size_profiles.clear()
