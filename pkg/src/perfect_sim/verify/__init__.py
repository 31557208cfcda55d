"""Oracles, statistics and verification checks."""

from .checks import local_correctness_check, truncation_bound_check
from .oracles import ProbabilityTable, exact_ising_distribution, magnetization_table, stationary_of_chain
from .report import CheckRecord, VerificationReport
from .stats import chi_square_gof, empirical_report

__all__ = [
    "CheckRecord",
    "ProbabilityTable",
    "VerificationReport",
    "chi_square_gof",
    "empirical_report",
    "exact_ising_distribution",
    "local_correctness_check",
    "magnetization_table",
    "stationary_of_chain",
    "truncation_bound_check",
]
