"""Brute-force reference computations, independent of the library's own paths.

Everything here works straight off constraint tables with plain loops, so
the implementations under test never share code with their oracle.
"""

from itertools import product

from dcopex.core import INFINITY


def _table_sum(inst, assignment, constraints):
    total = 0
    for c in constraints:
        cost = c.table[tuple(assignment[x] for x in c.scope)]
        if cost == INFINITY:
            return INFINITY
        total += cost
    return total


def enumerate_optimal(inst):
    """(minimum cost, first minimizing assignment in lexicographic domain order)."""
    best_cost = None
    best = None
    for values in product(*(inst.domains[x] for x in inst.variables)):
        sigma = dict(zip(inst.variables, values))
        cost = _table_sum(inst, sigma, inst.constraints)
        if best_cost is None or cost < best_cost:
            best_cost = cost
            best = sigma
    return best_cost, best


def full_set_verdict(inst, sigma, query):
    """Whether the full-set comparison of Definition-style sides holds:
    alternative-side total >= solution-side total over every constraint
    touching a queried variable."""
    focus = set(query.original)
    alt_full = dict(sigma)
    alt_full.update(query.alternative)
    sol_total = 0
    alt_total = 0
    sol_inf = alt_inf = False
    for c in inst.constraints:
        if not any(x in focus for x in c.scope):
            continue
        sol_cost = c.table[tuple(sigma[x] for x in c.scope)]
        alt_cost = c.table[tuple(alt_full[x] for x in c.scope)]
        if sol_cost == INFINITY:
            sol_inf = True
        else:
            sol_total += sol_cost
        if alt_cost == INFINITY:
            alt_inf = True
        else:
            alt_total += alt_cost
    if alt_inf:
        return True
    if sol_inf:
        return False
    return sol_total <= alt_total


def restricted_minimum(inst, sigma, queried):
    """Minimum complete cost when queried variables lose their current value
    and all other variables stay fixed; enumerated directly."""
    queried = sorted(queried)
    pools = [[d for d in inst.domains[x] if d != sigma[x]] for x in queried]
    best_cost = None
    best = None
    for values in product(*pools):
        candidate = dict(sigma)
        candidate.update(dict(zip(queried, values)))
        cost = _table_sum(inst, candidate, inst.constraints)
        if best_cost is None or cost < best_cost:
            best_cost = cost
            best = {x: candidate[x] for x in queried}
    return best_cost, best
