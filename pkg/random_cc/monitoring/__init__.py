"""
random-cc Monitoring Module

Provides structured logging, sampling metrics, run manifests and runtime profiling.
"""

from random_cc.monitoring.logging_config import (
    LoggedOperation,
    SamplingMetrics,
    metrics,
    set_run_id,
    set_tree_index,
    setup_logging,
)

__all__ = [
    "setup_logging",
    "set_run_id",
    "set_tree_index",
    "metrics",
    "LoggedOperation",
    "SamplingMetrics",
]
