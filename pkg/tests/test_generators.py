import math

import pytest

from dcopex.errors import InvalidConfig
from dcopex.generators import (
    MEETING_CONFLICT_COST,
    GenConfig,
    GenKind,
    gen_meeting_scheduling,
    gen_random_uniform,
    generate,
    meeting_pair_cost,
)
from dcopex.serialize import canonical_dumps, instance_to_json


def random_cfg(**overrides):
    base = dict(kind=GenKind.RANDOM_UNIFORM, num_agents=10, density=0.2,
                domain_size=10, cost_min=1, cost_max=100, seed=11)
    base.update(overrides)
    return GenConfig(**base)


def meeting_cfg(**overrides):
    base = dict(kind=GenKind.MEETING_SCHEDULING, num_agents=10, density=0.5,
                num_slots=10, seed=11)
    base.update(overrides)
    return GenConfig(**base)


class TestRandomUniform:
    def test_shape_and_cost_bounds(self):
        inst = gen_random_uniform(random_cfg())
        assert len(inst.variables) == 10
        assert len(inst.agents) == 10
        assert all(inst.owner[x] == x for x in inst.variables)
        assert all(len(inst.domains[x]) == 10 for x in inst.variables)
        for c in inst.constraints:
            assert len(c.scope) == 2
            for cost in c.table.values():
                assert 1 <= cost <= 100

    def test_two_agents_full_density(self):
        inst = gen_random_uniform(random_cfg(num_agents=2, density=1.0))
        assert len(inst.constraints) == 1

    def test_zero_density(self):
        inst = gen_random_uniform(random_cfg(density=0.0))
        assert len(inst.constraints) == 0

    def test_edge_count_within_three_sigma(self):
        # Edge count is Binomial(C(25,2)=300, 0.5): mean 150, sigma sqrt(75).
        trials = 25 * 24 // 2
        mean = trials * 0.5
        sigma = math.sqrt(trials * 0.5 * 0.5)
        inst = gen_random_uniform(random_cfg(num_agents=25, density=0.5, seed=42))
        assert mean - 3 * sigma <= len(inst.constraints) <= mean + 3 * sigma

    def test_determinism_byte_identical(self):
        cfg = random_cfg(seed=77)
        a = canonical_dumps(instance_to_json(gen_random_uniform(cfg)))
        b = canonical_dumps(instance_to_json(gen_random_uniform(cfg)))
        assert a == b

    def test_seed_changes_instance(self):
        a = gen_random_uniform(random_cfg(seed=1))
        b = gen_random_uniform(random_cfg(seed=2))
        assert a != b


class TestMeetingPairCost:
    def test_preferred_between_slots(self):
        assert meeting_pair_cost(1, 3, 2) == 2**1 + 2**1 == 4

    def test_equal_slots_conflict(self):
        assert meeting_pair_cost(4, 4, 0) == MEETING_CONFLICT_COST

    def test_zero_distance_both(self):
        # Preferred slot equals one slot of each meeting pair member.
        assert meeting_pair_cost(2, 3, 2) == 2**0 + 2**1 == 3
        assert meeting_pair_cost(2, 2 + 1, 2) == 3

    def test_preferred_matching_one_slot_each(self):
        assert meeting_pair_cost(5, 6, 5) == 2**0 + 2**1


class TestMeetingScheduling:
    def test_domain_is_slots(self):
        inst = gen_meeting_scheduling(meeting_cfg(num_slots=4))
        assert all(inst.domains[x] == (0, 1, 2, 3) for x in inst.variables)

    def test_pair_count_matches_density(self):
        for m, density in ((10, 0.5), (8, 0.3), (6, 1.0)):
            inst = gen_meeting_scheduling(meeting_cfg(num_agents=m, density=density))
            expected = math.ceil(density * m * (m - 1) / 2)
            assert len(inst.constraints) == expected

    def test_pairs_distinct_one_user_each(self):
        inst = gen_meeting_scheduling(meeting_cfg())
        pairs = [tuple(c.scope) for c in inst.constraints]
        assert len(set(pairs)) == len(pairs)

    def test_equal_slot_entries_are_conflict_cost(self):
        inst = gen_meeting_scheduling(meeting_cfg(num_slots=5))
        for c in inst.constraints:
            for (a, b), cost in c.table.items():
                if a == b:
                    assert cost == MEETING_CONFLICT_COST
                else:
                    assert cost < MEETING_CONFLICT_COST

    def test_all_costs_finite(self):
        inst = gen_meeting_scheduling(meeting_cfg())
        assert inst.max_finite_cost == MEETING_CONFLICT_COST

    def test_table_consistent_with_single_preference(self):
        # Every pair table must match the formula for some preferred slot.
        inst = gen_meeting_scheduling(meeting_cfg(num_slots=6, seed=3))
        for c in inst.constraints:
            candidates = [
                p
                for p in range(6)
                if all(
                    c.table[(a, b)] == meeting_pair_cost(a, b, p)
                    for a in range(6)
                    for b in range(6)
                )
            ]
            assert candidates, f"constraint {c.id} matches no preferred slot"

    def test_determinism_byte_identical(self):
        cfg = meeting_cfg(seed=5)
        a = canonical_dumps(instance_to_json(gen_meeting_scheduling(cfg)))
        b = canonical_dumps(instance_to_json(gen_meeting_scheduling(cfg)))
        assert a == b


class TestConfigValidation:
    @pytest.mark.parametrize(
        "overrides",
        [
            {"density": 1.5},
            {"density": -0.1},
            {"domain_size": 1},
            {"cost_min": 5, "cost_max": 4},
            {"cost_min": -1},
            {"num_agents": 0},
            {"seed": -3},
        ],
    )
    def test_bad_random_config(self, overrides):
        with pytest.raises(InvalidConfig):
            generate(random_cfg(**overrides))

    def test_bad_slots(self):
        with pytest.raises(InvalidConfig):
            generate(meeting_cfg(num_slots=1))

    def test_kind_mismatch(self):
        with pytest.raises(InvalidConfig):
            gen_random_uniform(meeting_cfg())
        with pytest.raises(InvalidConfig):
            gen_meeting_scheduling(random_cfg())
