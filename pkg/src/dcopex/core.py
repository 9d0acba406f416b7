"""Core model: instances, cost arithmetic, grounded constraints, explanations.

Costs are non-negative Python ints plus the ``INFINITY`` sentinel
(``math.inf``) marking infeasible configurations.  Python ints are
arbitrary precision, so finite addition cannot overflow; anything that is
not a non-negative int or ``INFINITY`` is rejected at construction time.

All model objects are immutable after construction and safe to share
across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping

from .errors import (
    IncompleteSolution,
    InconsistentExplanation,
    InvariantViolation,
    UnboundVariable,
)

INFINITY = math.inf

Cost = int | float  # non-negative int, or INFINITY
Value = int
Assignment = dict[int, int]  # variable id -> value


def is_valid_cost(c) -> bool:
    """True for a non-negative int (bools excluded) or INFINITY."""
    if c is INFINITY or (isinstance(c, float) and math.isinf(c) and c > 0):
        return True
    return isinstance(c, int) and not isinstance(c, bool) and c >= 0


def add_costs(a, b):
    """INFINITY-absorbing addition."""
    if a == INFINITY or b == INFINITY:
        return INFINITY
    return a + b


def sum_costs(costs: Iterable) -> Cost:
    total = 0
    for c in costs:
        if c == INFINITY:
            return INFINITY
        total += c
    return total


def overlay(base: Mapping[int, int], delta: Mapping[int, int]) -> dict[int, int]:
    """The assignment ``base`` with ``delta`` values overriding."""
    merged = dict(base)
    merged.update(delta)
    return merged


@dataclass(frozen=True)
class Constraint:
    """A cost function over an ordered variable scope, given as a total table."""

    id: int
    scope: tuple[int, ...]
    table: Mapping[tuple[int, ...], Cost]

    def __post_init__(self):
        if len(self.scope) == 0:
            raise InvariantViolation(f"constraint {self.id}: empty scope")
        if len(set(self.scope)) != len(self.scope):
            raise InvariantViolation(f"constraint {self.id}: duplicate scope variables")


@dataclass(frozen=True)
class GroundedConstraint:
    """A constraint fixed to concrete scope values, carrying its scalar cost."""

    constraint_id: int
    scope: tuple[int, ...]
    values: tuple[int, ...]
    cost: Cost


@dataclass(frozen=True)
class DcopInstance:
    """Agents, variables, domains, cost constraints, and the variable->agent map."""

    agents: tuple[int, ...]
    variables: tuple[int, ...]
    domains: Mapping[int, tuple[int, ...]]
    constraints: tuple[Constraint, ...]
    owner: Mapping[int, int]
    labels: dict | None = field(default=None, compare=True)

    def __post_init__(self):
        if len(set(self.agents)) != len(self.agents):
            raise InvariantViolation("duplicate agent ids")
        if len(set(self.variables)) != len(self.variables):
            raise InvariantViolation("duplicate variable ids")
        agent_set = set(self.agents)
        var_set = set(self.variables)
        for x in self.variables:
            if x not in self.domains:
                raise InvariantViolation(f"variable {x} has no domain")
            dom = self.domains[x]
            if len(dom) == 0:
                raise InvariantViolation(f"variable {x} has an empty domain")
            if len(set(dom)) != len(dom):
                raise InvariantViolation(f"variable {x} has duplicate domain values")
            if x not in self.owner:
                raise InvariantViolation(f"variable {x} has no owner")
            if self.owner[x] not in agent_set:
                raise InvariantViolation(f"variable {x} owned by unknown agent {self.owner[x]}")
        seen_ids = set()
        for c in self.constraints:
            if c.id in seen_ids:
                raise InvariantViolation(f"duplicate constraint id {c.id}")
            seen_ids.add(c.id)
            for x in c.scope:
                if x not in var_set:
                    raise InvariantViolation(f"constraint {c.id} scopes unknown variable {x}")
            expected = set(product(*(self.domains[x] for x in c.scope)))
            keys = set(c.table.keys())
            if keys != expected:
                raise InvariantViolation(
                    f"constraint {c.id}: table is not total over the scope domains"
                )
            for vals, cost in c.table.items():
                if not is_valid_cost(cost):
                    raise InvariantViolation(
                        f"constraint {c.id}: cost {cost!r} at {vals} is not a "
                        "non-negative int or INFINITY"
                    )

    @cached_property
    def constraints_by_id(self) -> dict[int, Constraint]:
        return {c.id: c for c in self.constraints}

    @cached_property
    def constraints_by_var(self) -> dict[int, tuple[Constraint, ...]]:
        by_var: dict[int, list[Constraint]] = {x: [] for x in self.variables}
        for c in self.constraints:
            for x in c.scope:
                by_var[x].append(c)
        return {x: tuple(cs) for x, cs in by_var.items()}

    @cached_property
    def neighbors(self) -> dict[int, frozenset[int]]:
        """Variables sharing at least one constraint with each variable."""
        adj: dict[int, set[int]] = {x: set() for x in self.variables}
        for c in self.constraints:
            for x in c.scope:
                adj[x].update(y for y in c.scope if y != x)
        return {x: frozenset(s) for x, s in adj.items()}

    @cached_property
    def variables_by_agent(self) -> dict[int, tuple[int, ...]]:
        by_agent: dict[int, list[int]] = {a: [] for a in self.agents}
        for x in self.variables:
            by_agent[self.owner[x]].append(x)
        return {a: tuple(xs) for a, xs in by_agent.items()}

    @cached_property
    def max_finite_cost(self) -> int:
        """Largest finite cost across all tables; 0 when no finite entry exists."""
        best = 0
        for c in self.constraints:
            for cost in c.table.values():
                if cost != INFINITY and cost > best:
                    best = cost
        return best

    def is_complete(self, assignment: Mapping[int, int]) -> bool:
        return set(assignment.keys()) == set(self.variables)

    def validate_assignment(self, assignment: Mapping[int, int]) -> None:
        for x, v in assignment.items():
            if x not in self.domains:
                raise InvariantViolation(f"assignment binds unknown variable {x}")
            if v not in self.domains[x]:
                raise InvariantViolation(f"value {v!r} not in domain of variable {x}")


def constraint_cost(c: Constraint, assignment: Mapping[int, int]):
    """Table entry for the assignment projected onto the constraint scope."""
    try:
        key = tuple(assignment[x] for x in c.scope)
    except KeyError as exc:
        raise UnboundVariable(
            f"constraint {c.id}: variable {exc.args[0]} is unbound"
        ) from None
    return c.table[key]


def ground(c: Constraint, assignment: Mapping[int, int]) -> GroundedConstraint:
    return GroundedConstraint(
        constraint_id=c.id,
        scope=c.scope,
        values=tuple(assignment[x] for x in c.scope),
        cost=constraint_cost(c, assignment),
    )


def solution_cost(inst: DcopInstance, sigma: Mapping[int, int]):
    """Sum of all constraint costs under a complete assignment."""
    if not inst.is_complete(sigma):
        raise IncompleteSolution("solution_cost requires a complete assignment")
    return sum_costs(constraint_cost(c, sigma) for c in inst.constraints)


def grounded_set(
    inst: DcopInstance, full: Mapping[int, int], focus: Iterable[int]
) -> set[GroundedConstraint]:
    """Constraints whose scope meets ``focus``, grounded by the complete ``full``.

    Each constraint id appears at most once.
    """
    if not inst.is_complete(full):
        raise IncompleteSolution("grounded_set requires a complete assignment")
    focus_set = set(focus)
    unknown = focus_set - set(inst.variables)
    if unknown:
        raise InvariantViolation(f"focus contains unknown variables {sorted(unknown)}")
    by_id: dict[int, Constraint] = {}
    for x in focus_set:
        for c in inst.constraints_by_var[x]:
            by_id[c.id] = c
    return {ground(c, full) for c in by_id.values()}


def canonical_side(side: Iterable[GroundedConstraint]) -> tuple[GroundedConstraint, ...]:
    """Deterministic ordering for a side: cost descending, then constraint id."""
    return tuple(sorted(side, key=lambda g: (-g.cost, g.constraint_id)))


@dataclass(frozen=True)
class Explanation:
    """Both grounded sides of a contrastive explanation plus their cost sums."""

    solution_side: tuple[GroundedConstraint, ...]
    alternative_side: tuple[GroundedConstraint, ...]
    solution_cost: Cost
    alternative_cost: Cost


def make_explanation(
    solution_side: Iterable[GroundedConstraint],
    alternative_side: Iterable[GroundedConstraint],
) -> Explanation:
    """Build an explanation with canonical ordering and computed cost sums."""
    sol = canonical_side(solution_side)
    alt = canonical_side(alternative_side)
    for name, side in (("solution", sol), ("alternative", alt)):
        ids = [g.constraint_id for g in side]
        if len(set(ids)) != len(ids):
            raise InvariantViolation(f"{name} side repeats a constraint id")
    return Explanation(
        solution_side=sol,
        alternative_side=alt,
        solution_cost=sum_costs(g.cost for g in sol),
        alternative_cost=sum_costs(g.cost for g in alt),
    )


def check_validity(e: Explanation) -> bool:
    """True iff the solution-side cost does not exceed the alternative-side cost.

    Raises InconsistentExplanation when a cost field disagrees with its side
    or a side repeats a constraint id.
    """
    for name, side, recorded in (
        ("solution", e.solution_side, e.solution_cost),
        ("alternative", e.alternative_side, e.alternative_cost),
    ):
        ids = [g.constraint_id for g in side]
        if len(set(ids)) != len(ids):
            raise InconsistentExplanation(f"{name} side repeats a constraint id")
        if sum_costs(g.cost for g in side) != recorded:
            raise InconsistentExplanation(f"{name} cost field does not match its side")
    return e.solution_cost <= e.alternative_cost
