"""Contrastive query construction: variable selection and the two value protocols.

A query names an asked agent, the current values of a variable subset, and a
pointwise-different alternative assignment for the same subset.  Alternatives
come either from uniform sampling over the remaining domain (random baseline)
or from optimally re-solving the instance with the queried values removed
(best alternative).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

from .core import Assignment, Constraint, DcopInstance
from .errors import EmptyAlternativeDomain, MalformedQuery, NoFeasibleSubset
from .solvers import DEFAULT_NODE_BUDGET, solve_optimal

REJECTION_CAP = 10_000
EXACT_SEARCH_MAX_VARS = 20


@dataclass(frozen=True)
class Query:
    asked_agent: int
    original: Assignment
    alternative: Assignment


def validate_query(inst: DcopInstance, q: Query) -> None:
    if q.asked_agent not in inst.agents:
        raise MalformedQuery(f"unknown asked agent {q.asked_agent}")
    if not q.original:
        raise MalformedQuery("query binds no variables")
    if set(q.original) != set(q.alternative):
        raise MalformedQuery("original and alternative must bind the same variables")
    for x, v in q.original.items():
        if x not in inst.domains:
            raise MalformedQuery(f"query binds unknown variable {x}")
        if v not in inst.domains[x]:
            raise MalformedQuery(f"original value {v!r} not in domain of variable {x}")
        alt = q.alternative[x]
        if alt not in inst.domains[x]:
            raise MalformedQuery(f"alternative value {alt!r} not in domain of variable {x}")
        if alt == v:
            raise MalformedQuery(f"variable {x}: alternative equals the original value")


def _no_isolated(inst: DcopInstance, subset: frozenset[int]) -> bool:
    return all(inst.neighbors[x] & subset for x in subset)


def select_query_vars(
    inst: DcopInstance, sigma: Mapping[int, int], q_size: int, rng: np.random.Generator
) -> frozenset[int]:
    """Uniformly sample ``q_size`` variables, none isolated within the choice.

    For q_size > 1 every chosen variable must share a constraint with another
    chosen variable.  Bounded rejection sampling first; on small instances an
    exhaustive enumeration decides whether any feasible subset exists at all.
    """
    if not inst.is_complete(sigma):
        raise MalformedQuery("variable selection requires a complete solution")
    n = len(inst.variables)
    if not 1 <= q_size <= n:
        raise MalformedQuery(f"q_size must lie in [1, {n}]")
    variables = list(inst.variables)
    if q_size == 1:
        return frozenset({variables[int(rng.integers(n))]})
    for _ in range(REJECTION_CAP):
        picked = rng.choice(n, size=q_size, replace=False)
        subset = frozenset(variables[i] for i in picked)
        if _no_isolated(inst, subset):
            return subset
    if n <= EXACT_SEARCH_MAX_VARS:
        feasible = [
            frozenset(combo)
            for combo in combinations(variables, q_size)
            if _no_isolated(inst, frozenset(combo))
        ]
        if feasible:
            return feasible[int(rng.integers(len(feasible)))]
        raise NoFeasibleSubset(
            f"no {q_size}-variable subset leaves every chosen variable constrained"
        )
    raise NoFeasibleSubset(
        f"rejection sampling found no feasible {q_size}-variable subset "
        f"within {REJECTION_CAP} draws"
    )


def _pick_asked_agent(
    inst: DcopInstance, variables: Iterable[int], rng: np.random.Generator
) -> int:
    owners = sorted({inst.owner[x] for x in variables})
    return owners[int(rng.integers(len(owners)))]


def random_baseline_query(
    inst: DcopInstance,
    sigma: Mapping[int, int],
    variables: Iterable[int],
    exclude: Mapping[int, Iterable[int]],
    rng: np.random.Generator,
) -> Query:
    """Alternative values drawn uniformly from each domain minus the current
    value and any per-variable exclusions."""
    chosen = sorted(variables)
    alternative: Assignment = {}
    for x in chosen:
        banned = {sigma[x]} | set(exclude.get(x, ()))
        pool = [d for d in inst.domains[x] if d not in banned]
        if not pool:
            raise EmptyAlternativeDomain(f"variable {x}: no alternative values remain")
        alternative[x] = pool[int(rng.integers(len(pool)))]
    original = {x: sigma[x] for x in chosen}
    asked = _pick_asked_agent(inst, chosen, rng)
    return Query(asked_agent=asked, original=original, alternative=alternative)


def restricted_instance(
    inst: DcopInstance, sigma: Mapping[int, int], variables: Iterable[int]
) -> DcopInstance:
    """The instance with queried domains punctured at their current value and
    all other domains collapsed to that value."""
    queried = set(variables)
    new_domains: dict[int, tuple[int, ...]] = {}
    for x in inst.variables:
        if x in queried:
            punctured = tuple(d for d in inst.domains[x] if d != sigma[x])
            if not punctured:
                raise EmptyAlternativeDomain(f"variable {x}: domain has no alternative value")
            new_domains[x] = punctured
        else:
            new_domains[x] = (sigma[x],)
    new_constraints = []
    for c in inst.constraints:
        allowed = [set(new_domains[x]) for x in c.scope]
        table = {
            vals: cost
            for vals, cost in c.table.items()
            if all(v in ok for v, ok in zip(vals, allowed))
        }
        new_constraints.append(Constraint(id=c.id, scope=c.scope, table=table))
    return DcopInstance(
        agents=inst.agents,
        variables=inst.variables,
        domains=new_domains,
        constraints=tuple(new_constraints),
        owner=inst.owner,
        labels=inst.labels,
    )


def best_alternative_query(
    inst: DcopInstance,
    sigma: Mapping[int, int],
    variables: Iterable[int],
    rng: np.random.Generator,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> Query:
    """Alternative taken from the optimum of the restricted instance where the
    queried variables lose their current values and everything else is frozen."""
    chosen = sorted(variables)
    restricted = restricted_instance(inst, sigma, chosen)
    result = solve_optimal(restricted, node_budget=node_budget)
    alternative = {x: result.solution[x] for x in chosen}
    original = {x: sigma[x] for x in chosen}
    asked = _pick_asked_agent(inst, chosen, rng)
    return Query(asked_agent=asked, original=original, alternative=alternative)
