"""Robust single-machine scheduling under per-interval energy limits."""

from .bb import bb_solve, chu_lower_bound
from .core import (
    BaselineSchedule,
    Instance,
    InvalidInstance,
    InvalidSchedule,
    Operation,
    RealisedSchedule,
    SolveResult,
    Status,
    TriviallyInfeasible,
    interval_energy,
    latest_start_schedule,
    realised_schedule,
    right_shift_schedule,
    total_tardiness,
)
from .fixed_perm import BudgetExceeded, earliest_robust_start, optimal_robust_schedule
from .generator import GenConfig, generate_instance, paper_grid
from .heuristics import TabuParams, edf_schedule, greedy_initial, greedy_schedule, tabu_search
from .verification import Robust, Violated, brute_force_is_robust, brute_force_optimum, is_robust

__version__ = "0.1.0"

__all__ = [
    "BaselineSchedule",
    "BudgetExceeded",
    "GenConfig",
    "Instance",
    "InvalidInstance",
    "InvalidSchedule",
    "Operation",
    "RealisedSchedule",
    "Robust",
    "SolveResult",
    "Status",
    "TabuParams",
    "TriviallyInfeasible",
    "Violated",
    "bb_solve",
    "brute_force_is_robust",
    "brute_force_optimum",
    "chu_lower_bound",
    "earliest_robust_start",
    "edf_schedule",
    "generate_instance",
    "greedy_initial",
    "greedy_schedule",
    "interval_energy",
    "is_robust",
    "latest_start_schedule",
    "optimal_robust_schedule",
    "paper_grid",
    "realised_schedule",
    "right_shift_schedule",
    "tabu_search",
    "total_tardiness",
]
