"""Exact and 1-optimal solvers plus a brute-force k-optimality checker.

solve_optimal is depth-first branch-and-bound over a fixed variable order
(max constraint degree first, id tie-break).  The lower bound is the
forward-checking style sum: exact cost of fully assigned constraints, plus
per-variable minima of the accumulated assigned-to-unassigned cost rows,
plus table minima of constraints between unassigned variables.  Values are
tried cheapest-accumulated-cost first, which is deterministic for a given
instance.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations, product
from typing import Mapping

import numpy as np

from .core import (
    INFINITY,
    Assignment,
    Cost,
    DcopInstance,
    add_costs,
    constraint_cost,
    solution_cost,
    sum_costs,
)
from .errors import BudgetExhausted, IncompleteSolution

DEFAULT_NODE_BUDGET = 5_000_000


@dataclass(frozen=True)
class SolveResult:
    solution: Assignment
    cost: Cost
    nodes_explored: int
    wall_time: float


def _variable_order(inst: DcopInstance) -> list[int]:
    degree = {x: len(inst.constraints_by_var[x]) for x in inst.variables}
    return sorted(inst.variables, key=lambda x: (-degree[x], x))


def _finite_min(costs) -> Cost:
    best = INFINITY
    for c in costs:
        if c < best:
            best = c
    return best


class _Bookkeeping:
    """Sum of lower bounds for not-yet-attached constraints, INFINITY-safe."""

    __slots__ = ("finite", "infinite")

    def __init__(self):
        self.finite = 0
        self.infinite = 0

    def add(self, value) -> None:
        if value == INFINITY:
            self.infinite += 1
        else:
            self.finite += value

    def remove(self, value) -> None:
        if value == INFINITY:
            self.infinite -= 1
        else:
            self.finite -= value

    @property
    def total(self) -> Cost:
        return INFINITY if self.infinite else self.finite


def solve_optimal(inst: DcopInstance, node_budget: int = DEFAULT_NODE_BUDGET) -> SolveResult:
    """Globally minimal complete assignment via branch-and-bound.

    Raises BudgetExhausted once more than ``node_budget`` nodes (variable
    binding attempts) have been expanded.
    """
    start = time.perf_counter()
    order = _variable_order(inst)
    n = len(order)
    position = {x: k for k, x in enumerate(order)}
    domains = {x: list(inst.domains[x]) for x in inst.variables}

    # Split constraints by arity.  Binary tables are pre-oriented both ways;
    # wider constraints contribute their table minimum until fully bound.
    unary_base: dict[int, list] = {x: [0] * len(domains[x]) for x in inst.variables}
    oriented: dict[int, list] = {x: [] for x in inst.variables}  # x -> [(y, rows, table_min)]
    wide = []  # arity >= 3: (constraint, last_position, table_min)
    for c in inst.constraints:
        if len(c.scope) == 1:
            x = c.scope[0]
            for i, v in enumerate(domains[x]):
                unary_base[x][i] = add_costs(unary_base[x][i], c.table[(v,)])
        elif len(c.scope) == 2:
            x, y = c.scope
            tmin = _finite_min(c.table.values())
            rows_xy = [[c.table[(vx, vy)] for vy in domains[y]] for vx in domains[x]]
            rows_yx = [[c.table[(vx, vy)] for vx in domains[x]] for vy in domains[y]]
            oriented[x].append((y, rows_xy, tmin))
            oriented[y].append((x, rows_yx, tmin))
        else:
            wide.append((c, max(position[v] for v in c.scope), _finite_min(c.table.values())))

    acc = {x: list(unary_base[x]) for x in inst.variables}
    acc_min = {x: _finite_min(acc[x]) if domains[x] else 0 for x in inst.variables}
    # Lower bound mass for constraints not yet attached to the assignment:
    # binary edges with both endpoints unassigned, plus unbound wide ones.
    loose = _Bookkeeping()
    seen_edges = set()
    for x in inst.variables:
        for y, _, tmin in oriented[x]:
            key = (min(x, y), max(x, y))
            if key not in seen_edges:
                seen_edges.add(key)
                loose.add(tmin)
    for _, _, tmin in wide:
        loose.add(tmin)
    wide_by_last: list[list] = [[] for _ in range(max(n, 1))]
    for c, last, tmin in wide:
        wide_by_last[last].append((c, tmin))

    assigned: dict[int, int] = {}
    unassigned_suffix = [order[k:] for k in range(n + 1)]
    best_cost: Cost = INFINITY
    best_solution: dict | None = None
    nodes = 0

    def bound_tail(depth: int) -> Cost:
        total = loose.total
        if total == INFINITY:
            return INFINITY
        for y in unassigned_suffix[depth]:
            m = acc_min[y]
            if m == INFINITY:
                return INFINITY
            total += m
        return total

    def search(depth: int, g: Cost) -> None:
        nonlocal best_cost, best_solution, nodes
        if depth == n:
            if best_solution is None or g < best_cost:
                best_cost = g
                best_solution = dict(assigned)
            return
        x = order[depth]
        dom = domains[x]
        # Cheapest accumulated cost first; position breaks ties.
        value_order = sorted(range(len(dom)), key=lambda i: (acc[x][i], i))
        for i in value_order:
            v = dom[i]
            nodes += 1
            if nodes > node_budget:
                raise BudgetExhausted(f"optimal solve exceeded the node budget of {node_budget}")
            g2 = add_costs(g, acc[x][i])
            assigned[x] = v
            # Bind wide constraints whose scope completes here.
            wide_undo = []
            for c, tmin in wide_by_last[depth]:
                loose.remove(tmin)
                wide_undo.append(tmin)
                g2 = add_costs(g2, constraint_cost(c, assigned))
            # Move edges from x to unassigned neighbors out of the loose pool
            # and into the neighbors' accumulated rows.
            undo = []
            for y, rows, tmin in oriented[x]:
                if y in assigned:
                    continue
                loose.remove(tmin)
                old_row, old_min = acc[y], acc_min[y]
                row = rows[i]
                new_row = [add_costs(a, b) for a, b in zip(old_row, row)]
                acc[y] = new_row
                acc_min[y] = _finite_min(new_row)
                undo.append((y, old_row, old_min, tmin))
            pruned = best_solution is not None and add_costs(g2, bound_tail(depth + 1)) >= best_cost
            if not pruned:
                search(depth + 1, g2)
            for y, old_row, old_min, tmin in reversed(undo):
                acc[y] = old_row
                acc_min[y] = old_min
                loose.add(tmin)
            for tmin in reversed(wide_undo):
                loose.add(tmin)
            del assigned[x]

    search(0, 0)
    assert best_solution is not None
    return SolveResult(
        solution={x: best_solution[x] for x in inst.variables},
        cost=best_cost,
        nodes_explored=nodes,
        wall_time=time.perf_counter() - start,
    )


def solve_1opt(inst: DcopInstance, seed: int) -> SolveResult:
    """Best-improvement hill climbing from a seeded uniform-random start.

    Each move applies the single-variable change with the largest cost
    decrease (variable id, then domain order break ties) until no
    single-variable change improves, so the result is 1-optimal.
    """
    start = time.perf_counter()
    rng = np.random.Generator(np.random.PCG64(seed))
    sigma: dict[int, int] = {
        x: inst.domains[x][int(rng.integers(len(inst.domains[x])))] for x in inst.variables
    }
    moves_evaluated = 0
    touching = inst.constraints_by_var
    while True:
        total = solution_cost(inst, sigma)
        # Cost of everything a variable does not touch, so candidate totals
        # can be formed without subtracting (INFINITY-safe).
        rest: dict[int, Cost] = {}
        for x in inst.variables:
            touching_ids = {c.id for c in touching[x]}
            rest[x] = sum_costs(
                constraint_cost(c, sigma) for c in inst.constraints if c.id not in touching_ids
            )
        best_new = total
        best_move: tuple[int, int] | None = None
        for x in inst.variables:
            current = sigma[x]
            for v in inst.domains[x]:
                if v == current:
                    continue
                moves_evaluated += 1
                sigma[x] = v
                candidate = rest[x]
                for c in touching[x]:
                    candidate = add_costs(candidate, constraint_cost(c, sigma))
                    if candidate >= best_new:
                        break
                sigma[x] = current
                if candidate < best_new:
                    best_new = candidate
                    best_move = (x, v)
        if best_move is None:
            break
        sigma[best_move[0]] = best_move[1]
    return SolveResult(
        solution=sigma,
        cost=solution_cost(inst, sigma),
        nodes_explored=moves_evaluated,
        wall_time=time.perf_counter() - start,
    )


def verify_k_optimal(inst: DcopInstance, sigma: Mapping[int, int], k: int) -> bool:
    """Exhaustively check that no reassignment of <= k variables lowers the cost.

    Exponential in k by design; intended for desk-scale verification.
    """
    if not inst.is_complete(sigma):
        raise IncompleteSolution("verify_k_optimal requires a complete assignment")
    if not 1 <= k <= len(inst.variables):
        raise ValueError(f"k must lie in [1, {len(inst.variables)}]")
    for size in range(1, k + 1):
        for subset in combinations(inst.variables, size):
            subset_set = set(subset)
            affected = [c for c in inst.constraints if any(x in subset_set for x in c.scope)]
            affected_ids = {c.id for c in affected}
            base_rest = sum_costs(
                constraint_cost(c, sigma) for c in inst.constraints if c.id not in affected_ids
            )
            base_total = sum_costs([base_rest] + [constraint_cost(c, sigma) for c in affected])
            candidate = dict(sigma)
            for values in product(*(inst.domains[x] for x in subset)):
                for x, v in zip(subset, values):
                    candidate[x] = v
                new_total = base_rest
                for c in affected:
                    new_total = add_costs(new_total, constraint_cost(c, candidate))
                    if new_total >= base_total:
                        break
                if new_total < base_total:
                    return False
    return True
