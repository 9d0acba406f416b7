from itertools import combinations

import numpy as np
import pytest
from oracles import restricted_minimum

from dcopex.core import DcopInstance, solution_cost
from dcopex.errors import EmptyAlternativeDomain, MalformedQuery, NoFeasibleSubset
from dcopex.generators import GenConfig, GenKind, generate
from dcopex.queries import (
    Query,
    best_alternative_query,
    random_baseline_query,
    select_query_vars,
    validate_query,
)


def rng(seed=0):
    return np.random.Generator(np.random.PCG64(seed))


def unconstrained_pair():
    return DcopInstance(
        agents=(0, 1), variables=(0, 1), domains={0: (0, 1), 1: (0, 1)},
        constraints=(), owner={0: 0, 1: 1},
    )


class TestSelectQueryVars:
    def test_single_variable_unconstrained(self, triangle, triangle_optimum):
        seen = set()
        for seed in range(30):
            got = select_query_vars(triangle, triangle_optimum, 1, rng(seed))
            assert len(got) == 1
            seen |= got
        assert seen == {0, 1, 2}

    def test_pairs_on_complete_graph(self, triangle, triangle_optimum):
        # Every pair shares a constraint here, so any pair may come back.
        for seed in range(10):
            got = select_query_vars(triangle, triangle_optimum, 2, rng(seed))
            assert len(got) == 2
            assert got in {frozenset(p) for p in combinations((0, 1, 2), 2)}

    def test_no_feasible_subset(self):
        inst = unconstrained_pair()
        with pytest.raises(NoFeasibleSubset):
            select_query_vars(inst, {0: 0, 1: 0}, 2, rng())

    def test_no_isolated_choice_in_sparse_graph(self):
        inst = generate(GenConfig(kind=GenKind.RANDOM_UNIFORM, num_agents=12,
                                  density=0.15, domain_size=3, seed=8))
        sigma = {x: inst.domains[x][0] for x in inst.variables}
        for seed in range(20):
            try:
                got = select_query_vars(inst, sigma, 3, rng(seed))
            except NoFeasibleSubset:
                continue
            for x in got:
                assert inst.neighbors[x] & got

    def test_bad_sizes(self, triangle, triangle_optimum):
        with pytest.raises(MalformedQuery):
            select_query_vars(triangle, triangle_optimum, 0, rng())
        with pytest.raises(MalformedQuery):
            select_query_vars(triangle, triangle_optimum, 4, rng())

    def test_deterministic(self, triangle, triangle_optimum):
        a = select_query_vars(triangle, triangle_optimum, 2, rng(5))
        b = select_query_vars(triangle, triangle_optimum, 2, rng(5))
        assert a == b


class TestRandomBaseline:
    def test_binary_domain_forces_flip(self, triangle, triangle_optimum):
        q = random_baseline_query(triangle, triangle_optimum, {0}, {}, rng())
        assert q.original == {0: 1}
        assert q.alternative == {0: 0}

    def test_exclusions_respected(self):
        inst = generate(GenConfig(kind=GenKind.RANDOM_UNIFORM, num_agents=2,
                                  density=1.0, domain_size=10, seed=1))
        sigma = {0: 4, 1: 2}
        exclude = {0: {7}, 1: {0}}
        for seed in range(40):
            q = random_baseline_query(inst, sigma, {0, 1}, exclude, rng(seed))
            assert q.alternative[0] not in (4, 7)
            assert q.alternative[1] not in (2, 0)
            validate_query(inst, q)

    def test_exclusion_pool_size(self):
        # With the current value plus one exclusion removed, 8 of 10 remain.
        inst = generate(GenConfig(kind=GenKind.RANDOM_UNIFORM, num_agents=2,
                                  density=1.0, domain_size=10, seed=1))
        sigma = {0: 4, 1: 2}
        seen = set()
        for seed in range(200):
            q = random_baseline_query(inst, sigma, {0}, {0: {7}}, rng(seed))
            seen.add(q.alternative[0])
        assert seen == set(range(10)) - {4, 7}

    def test_empty_pool_raises(self, triangle, triangle_optimum):
        with pytest.raises(EmptyAlternativeDomain):
            random_baseline_query(triangle, triangle_optimum, {0}, {0: {0}}, rng())

    def test_asked_agent_owns_a_queried_variable(self, triangle, triangle_optimum):
        for seed in range(10):
            q = random_baseline_query(triangle, triangle_optimum, {0, 1}, {}, rng(seed))
            assert q.asked_agent in {triangle.owner[x] for x in q.original}


class TestBestAlternative:
    def test_single_variable_binary_domain(self, triangle, triangle_optimum):
        q = best_alternative_query(triangle, triangle_optimum, {0}, rng())
        assert q.alternative == {0: 0}

    def test_pair_on_triangle(self, triangle, triangle_optimum):
        # Both punctured domains shrink to {0}; the only combination is (0, 0),
        # whose complete cost is 1 + 3 + 3 = 7.
        q = best_alternative_query(triangle, triangle_optimum, {0, 1}, rng())
        assert q.alternative == {0: 0, 1: 0}
        assert solution_cost(triangle, {0: 0, 1: 0, 2: 0}) == 7

    @pytest.mark.parametrize("seed", range(8))
    def test_matches_enumeration_over_punctured_domains(self, seed):
        inst = generate(GenConfig(kind=GenKind.RANDOM_UNIFORM, num_agents=5,
                                  density=0.7, domain_size=4, seed=seed))
        sigma = {x: inst.domains[x][(seed + x) % 4] for x in inst.variables}
        queried = set(list(inst.variables)[: 2 + seed % 3])
        q = best_alternative_query(inst, sigma, queried, rng(seed))
        want_cost, _ = restricted_minimum(inst, sigma, queried)
        full = dict(sigma)
        full.update(q.alternative)
        assert solution_cost(inst, full) == want_cost
        validate_query(inst, q)

    def test_whole_variable_set(self, triangle, triangle_optimum):
        q = best_alternative_query(triangle, triangle_optimum, {0, 1, 2}, rng())
        want_cost, want = restricted_minimum(triangle, triangle_optimum, {0, 1, 2})
        full = dict(q.alternative)
        assert solution_cost(triangle, full) == want_cost
        assert q.alternative == want

    def test_deterministic(self, triangle, triangle_optimum):
        a = best_alternative_query(triangle, triangle_optimum, {0, 1}, rng(3))
        b = best_alternative_query(triangle, triangle_optimum, {0, 1}, rng(3))
        assert a == b


class TestValidateQuery:
    def test_same_value_rejected(self, triangle):
        with pytest.raises(MalformedQuery):
            validate_query(triangle, Query(asked_agent=0, original={0: 1}, alternative={0: 1}))

    def test_mismatched_variables_rejected(self, triangle):
        with pytest.raises(MalformedQuery):
            validate_query(triangle, Query(asked_agent=0, original={0: 1}, alternative={1: 0}))

    def test_empty_rejected(self, triangle):
        with pytest.raises(MalformedQuery):
            validate_query(triangle, Query(asked_agent=0, original={}, alternative={}))

    def test_unknown_agent_rejected(self, triangle):
        with pytest.raises(MalformedQuery):
            validate_query(triangle, Query(asked_agent=9, original={0: 1}, alternative={0: 0}))

    def test_out_of_domain_rejected(self, triangle):
        with pytest.raises(MalformedQuery):
            validate_query(triangle, Query(asked_agent=0, original={0: 1}, alternative={0: 5}))
