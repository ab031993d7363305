"""
Occurrence probabilities of cycles induced by uniform spanning trees
"""

from random_cc.probability.occurrence import (
    OccurrenceModel,
    OccurrenceParams,
    clamp_rho,
    cycle_degree_sum,
    cycle_log_degree_product,
    gamma,
    log_gamma,
    rho_approx,
    rho_estimated,
    rho_exact_lrw,
    tau_last_approx,
    tau_last_estimated,
)

__all__ = [
    "OccurrenceModel",
    "OccurrenceParams",
    "clamp_rho",
    "cycle_degree_sum",
    "cycle_log_degree_product",
    "gamma",
    "log_gamma",
    "rho_approx",
    "rho_estimated",
    "rho_exact_lrw",
    "tau_last_approx",
    "tau_last_estimated",
]
