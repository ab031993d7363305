"""
Approximation accuracy studies
"""

from random_cc.evaluation.accuracy import (
    ReferenceMethod,
    approximation_accuracy,
    harvest_cycles,
    summarize_accuracy,
)

__all__ = [
    "ReferenceMethod",
    "approximation_accuracy",
    "harvest_cycles",
    "summarize_accuracy",
]
