import pytest
from oracles import enumerate_optimal

from dcopex.core import DcopInstance, solution_cost
from dcopex.errors import BudgetExhausted, IncompleteSolution
from dcopex.generators import GenConfig, GenKind, generate
from dcopex.solvers import solve_1opt, solve_optimal, verify_k_optimal


def small_instance(seed, kind=GenKind.RANDOM_UNIFORM, n=6, density=0.5, domain=4):
    cfg = GenConfig(kind=kind, num_agents=n, density=density, domain_size=domain,
                    num_slots=domain, seed=seed)
    return generate(cfg)


class TestSolveOptimal:
    def test_triangle_optimum(self, triangle, triangle_optimum):
        result = solve_optimal(triangle)
        assert result.solution == triangle_optimum
        assert result.cost == 3

    def test_constraint_free(self):
        inst = DcopInstance(
            agents=(0, 1), variables=(0, 1), domains={0: (0, 1), 1: (5, 6)},
            constraints=(), owner={0: 0, 1: 1},
        )
        result = solve_optimal(inst)
        assert result.cost == 0
        assert inst.is_complete(result.solution)

    @pytest.mark.parametrize("seed", range(12))
    def test_matches_exhaustive_enumeration(self, seed):
        kind = GenKind.MEETING_SCHEDULING if seed % 3 == 0 else GenKind.RANDOM_UNIFORM
        inst = small_instance(seed, kind=kind)
        want, _ = enumerate_optimal(inst)
        result = solve_optimal(inst)
        assert result.cost == want
        assert solution_cost(inst, result.solution) == result.cost

    def test_budget_exhausted(self):
        inst = small_instance(0, n=8, density=0.9)
        with pytest.raises(BudgetExhausted):
            solve_optimal(inst, node_budget=3)

    def test_deterministic(self):
        inst = small_instance(4)
        assert solve_optimal(inst).solution == solve_optimal(inst).solution


class TestSolveOneOpt:
    def test_no_single_flip_improves_triangle(self, triangle):
        for seed in range(6):
            result = solve_1opt(triangle, seed)
            base = solution_cost(triangle, result.solution)
            for x in triangle.variables:
                for v in triangle.domains[x]:
                    if v == result.solution[x]:
                        continue
                    flipped = dict(result.solution)
                    flipped[x] = v
                    assert solution_cost(triangle, flipped) >= base

    def test_constraint_free_returns_initial(self):
        inst = DcopInstance(
            agents=(0,), variables=(0, 1), domains={0: (0, 1, 2), 1: (0, 1)},
            constraints=(), owner={0: 0, 1: 0},
        )
        result = solve_1opt(inst, seed=9)
        assert result.nodes_explored >= 0
        assert inst.is_complete(result.solution)
        assert result.cost == 0

    @pytest.mark.parametrize("seed", range(8))
    def test_result_is_one_optimal(self, seed):
        inst = small_instance(seed, kind=GenKind.MEETING_SCHEDULING, n=5)
        result = solve_1opt(inst, seed=seed + 50)
        assert verify_k_optimal(inst, result.solution, 1)

    @pytest.mark.parametrize("seed", range(8))
    def test_never_beats_optimal(self, seed):
        inst = small_instance(seed)
        optimal = solve_optimal(inst).cost
        assert solve_1opt(inst, seed=seed).cost >= optimal

    def test_deterministic_given_seed(self):
        inst = small_instance(3)
        assert solve_1opt(inst, 7).solution == solve_1opt(inst, 7).solution


class TestVerifyKOptimal:
    def test_optimum_is_k_optimal_at_full_depth(self, triangle, triangle_optimum):
        assert verify_k_optimal(triangle, triangle_optimum, 3)

    def test_all_zero_not_one_optimal(self, triangle):
        # {0,0,0} costs 1+3+3=7; flipping the first variable to 1 gives 1+1+3=5.
        assert solution_cost(triangle, {0: 0, 1: 0, 2: 0}) == 7
        assert not verify_k_optimal(triangle, {0: 0, 1: 0, 2: 0}, 1)

    def test_constraint_free_always_optimal(self):
        inst = DcopInstance(
            agents=(0,), variables=(0, 1), domains={0: (0, 1), 1: (0, 1)},
            constraints=(), owner={0: 0, 1: 0},
        )
        assert verify_k_optimal(inst, {0: 1, 1: 0}, 2)

    def test_optimal_solution_is_k_optimal_for_all_k(self):
        inst = small_instance(2, n=5)
        solution = solve_optimal(inst).solution
        for k in (1, 2, 5):
            assert verify_k_optimal(inst, solution, k)

    def test_incomplete_rejected(self, triangle):
        with pytest.raises(IncompleteSolution):
            verify_k_optimal(triangle, {0: 0}, 1)

    def test_bad_k_rejected(self, triangle, triangle_optimum):
        with pytest.raises(ValueError):
            verify_k_optimal(triangle, triangle_optimum, 0)
