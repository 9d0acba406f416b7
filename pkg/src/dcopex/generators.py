"""Seeded construction of the two benchmark instance families.

All randomness flows from ``GenConfig.seed`` through a PCG64 generator
(``numpy.random.Generator``).  Draw order is fixed, so an identical config
yields a byte-identical JSON instance on every platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from itertools import combinations, product

import numpy as np

from .core import Constraint, DcopInstance
from .errors import InvalidConfig

# Finite stand-in for the infeasible same-slot configuration in meeting
# instances; deliberately an ordinary cost, not INFINITY.
MEETING_CONFLICT_COST = 10_000


class GenKind(str, Enum):
    RANDOM_UNIFORM = "random"
    MEETING_SCHEDULING = "meeting"


@dataclass(frozen=True)
class GenConfig:
    kind: GenKind
    num_agents: int
    density: float = 0.5
    domain_size: int = 10
    cost_min: int = 1
    cost_max: int = 100
    num_slots: int = 10
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.kind, GenKind):
            object.__setattr__(self, "kind", GenKind(self.kind))

    def validate(self) -> None:
        if self.num_agents < 1:
            raise InvalidConfig("num_agents must be >= 1")
        if not (0.0 <= self.density <= 1.0):
            raise InvalidConfig("density must lie in [0, 1]")
        if self.domain_size < 2:
            raise InvalidConfig("domain_size must be >= 2")
        if self.cost_min > self.cost_max:
            raise InvalidConfig("cost_min must be <= cost_max")
        if self.cost_min < 0:
            raise InvalidConfig("costs must be non-negative")
        if self.num_slots < 2:
            raise InvalidConfig("num_slots must be >= 2")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise InvalidConfig("seed must be a non-negative int")


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def gen_random_uniform(cfg: GenConfig) -> DcopInstance:
    """One variable per agent; each pair constrained with probability ``density``.

    Table entries are drawn uniformly from [cost_min, cost_max].  Pairs are
    visited in lexicographic order and the table rows per pair in
    lexicographic value order, which pins the draw sequence.
    """
    cfg.validate()
    if cfg.kind != GenKind.RANDOM_UNIFORM:
        raise InvalidConfig(f"gen_random_uniform got kind {cfg.kind.value!r}")
    rng = _rng(cfg.seed)
    n = cfg.num_agents
    variables = tuple(range(n))
    domain = tuple(range(cfg.domain_size))
    edges = [(i, j) for i, j in combinations(range(n), 2) if rng.random() < cfg.density]
    constraints = []
    for cid, (i, j) in enumerate(edges):
        table = {
            (a, b): int(rng.integers(cfg.cost_min, cfg.cost_max + 1))
            for a, b in product(domain, domain)
        }
        constraints.append(Constraint(id=cid, scope=(i, j), table=table))
    return DcopInstance(
        agents=tuple(range(n)),
        variables=variables,
        domains={x: domain for x in variables},
        constraints=tuple(constraints),
        owner={x: x for x in variables},
    )


def meeting_pair_cost(slot_a: int, slot_b: int, preferred: int) -> int:
    """Cost one shared attendee contributes to a meeting pair."""
    if slot_a == slot_b:
        return MEETING_CONFLICT_COST
    return 2 ** abs(slot_a - preferred) + 2 ** abs(slot_b - preferred)


def gen_meeting_scheduling(cfg: GenConfig) -> DcopInstance:
    """Meetings as variables over time slots; shared attendees induce pair costs.

    Users are added one per sampled meeting pair (each attending exactly the
    two meetings of its pair) until ceil(density * M*(M-1)/2) distinct pairs
    are constrained.  A pair scheduled to the same slot costs
    MEETING_CONFLICT_COST; otherwise the pair costs
    2^|slot_a - preferred| + 2^|slot_b - preferred| for its user's preferred
    slot.
    """
    cfg.validate()
    if cfg.kind != GenKind.MEETING_SCHEDULING:
        raise InvalidConfig(f"gen_meeting_scheduling got kind {cfg.kind.value!r}")
    rng = _rng(cfg.seed)
    m = cfg.num_agents
    variables = tuple(range(m))
    slots = tuple(range(cfg.num_slots))
    all_pairs = list(combinations(range(m), 2))
    target = math.ceil(cfg.density * len(all_pairs))
    order = rng.permutation(len(all_pairs)) if all_pairs else []
    chosen = sorted(all_pairs[k] for k in order[:target])
    constraints = []
    for cid, (i, j) in enumerate(chosen):
        preferred = int(rng.integers(cfg.num_slots))
        table = {
            (a, b): meeting_pair_cost(a, b, preferred)
            for a, b in product(slots, slots)
        }
        constraints.append(Constraint(id=cid, scope=(i, j), table=table))
    return DcopInstance(
        agents=tuple(range(m)),
        variables=variables,
        domains={x: slots for x in variables},
        constraints=tuple(constraints),
        owner={x: x for x in variables},
    )


def generate(cfg: GenConfig) -> DcopInstance:
    if cfg.kind == GenKind.RANDOM_UNIFORM:
        return gen_random_uniform(cfg)
    return gen_meeting_scheduling(cfg)
