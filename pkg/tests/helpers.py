"""Shared fuzzing helpers: seeded random instances and queries for the
protocol property tests and the acceptance suite."""

import numpy as np

from dcopex.engine import Variant, run_explanation
from dcopex.errors import NoFeasibleSubset
from dcopex.generators import GenConfig, GenKind, generate
from dcopex.queries import best_alternative_query, random_baseline_query, select_query_vars
from dcopex.solvers import solve_1opt, solve_optimal


def fuzz_case(case_seed: int):
    """One deterministic fuzz scenario: instance, published solution, query.

    Cycles through both generator families, both solution regimes, and both
    query modes; returns None when the drawn query size is infeasible.
    """
    rng = np.random.Generator(np.random.PCG64(case_seed))
    kind = GenKind.RANDOM_UNIFORM if case_seed % 2 == 0 else GenKind.MEETING_SCHEDULING
    num_agents = int(rng.integers(3, 9))
    cfg = GenConfig(
        kind=kind,
        num_agents=num_agents,
        density=float(rng.choice([0.3, 0.5, 0.8])),
        domain_size=int(rng.integers(2, 6)),
        cost_min=0,
        cost_max=int(rng.integers(5, 60)),
        num_slots=int(rng.integers(3, 7)),
        seed=case_seed,
    )
    inst = generate(cfg)
    if case_seed % 3 == 0:
        sigma = solve_optimal(inst).solution
    else:
        sigma = solve_1opt(inst, seed=case_seed + 1).solution
    q_size = int(rng.integers(1, max(2, min(4, num_agents))))
    try:
        chosen = select_query_vars(inst, sigma, q_size, rng)
    except NoFeasibleSubset:
        return None
    if case_seed % 2 == 0:
        query = best_alternative_query(inst, sigma, chosen, rng)
    else:
        query = random_baseline_query(inst, sigma, chosen, {}, rng)
    return inst, sigma, query


def run_all_variants(inst, sigma, query):
    return {v: run_explanation(v, inst, sigma, query) for v in Variant}
