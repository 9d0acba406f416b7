"""Contrastive explanations for distributed constraint optimization.

The package models cost-based constraint networks owned by agents, solves
them (exact branch-and-bound and 1-optimal local search), poses contrastive
"why this value instead of that one" queries, and answers them through a
simulated request/reply protocol whose variants trade explanation length
for runtime.  A CLI (``dcopex``) and an HTTP service expose the same
capabilities for scripting and interactive exploration.
"""

__version__ = "0.1.0"

from .core import (
    INFINITY,
    Assignment,
    Constraint,
    Cost,
    DcopInstance,
    Explanation,
    GroundedConstraint,
    check_validity,
    constraint_cost,
    grounded_set,
    solution_cost,
)
from .engine import RunStats, Variant, minimal_subset_oracle, run_explanation
from .generators import GenConfig, GenKind, generate
from .queries import Query, best_alternative_query, random_baseline_query, select_query_vars
from .solvers import SolveResult, solve_1opt, solve_optimal, verify_k_optimal

__all__ = [
    "INFINITY",
    "Assignment",
    "Constraint",
    "Cost",
    "DcopInstance",
    "Explanation",
    "GenConfig",
    "GenKind",
    "GroundedConstraint",
    "Query",
    "RunStats",
    "SolveResult",
    "Variant",
    "best_alternative_query",
    "check_validity",
    "constraint_cost",
    "generate",
    "grounded_set",
    "minimal_subset_oracle",
    "random_baseline_query",
    "run_explanation",
    "select_query_vars",
    "solution_cost",
    "solve_1opt",
    "solve_optimal",
    "verify_k_optimal",
]
