"""Request/reply explanation protocol over the simulation runtime.

The asked agent grounds its own relevant constraints for both sides of a
contrastive query, collects the other relevant agents' grounded constraints
via REQUEST/REPLY messages, and assembles the explanation.  Five variants:

* base - full alternative side, no selection work.
* o1   - the asked agent sorts the collected alternative constraints by
         decreasing cost and keeps the shortest prefix whose sum reaches
         the solution-side cost (a minimum-cardinality subset).
* o2   - responders pre-sort their lists; the asked agent k-way-merges the
         heads through a priority heap until the threshold is reached.
         Produces exactly o1's set.
* v1   - responders pre-sort; the asked agent interleaves the lists
         round-robin into one pseudo-sorted list and takes the shortest
         prefix reaching the threshold.
* v2   - the solution side is collected from all relevant agents first;
         the alternative side is then requested in stages from the
         highest-degree agents until the collected cost covers the
         remaining gap.

NCLO charging follows the runtime contract: one table access per grounding,
one op per scalar comparison (sorting, thresholds, degree ranking, contact
estimates), one op per heap element move.  The base variant performs no
comparisons; its validity flag is derived outside the charged path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Callable, Iterable, Mapping, Sequence

from .core import (
    INFINITY,
    Assignment,
    Cost,
    DcopInstance,
    Explanation,
    GroundedConstraint,
    add_costs,
    ground,
    make_explanation,
    overlay,
    sum_costs,
)
from .errors import ListTooLarge, MalformedQuery
from .queries import Query, validate_query
from .runtime import REPLY, REQUEST, Message, SimAgent, World


class Variant(str, Enum):
    BASE = "base"
    O1 = "o1"
    O2 = "o2"
    V1 = "v1"
    V2 = "v2"


PRESORTING_VARIANTS = (Variant.O2, Variant.V1)


@dataclass(frozen=True)
class RunStats:
    nclo: int
    messages: int
    length: int
    valid: bool
    rounds: int
    steps: int


@dataclass(frozen=True)
class RequestPayload:
    assignment: Assignment
    sorted_reply: bool = False

    def size_hint(self) -> int:
        return len(self.assignment)


@dataclass(frozen=True)
class ReplyPayload:
    responder: int
    echo: Assignment
    grounded: tuple[GroundedConstraint, ...]

    def size_hint(self) -> int:
        return len(self.grounded)


def get_own_grounded_constraints(
    agent: int, sigma_bar: Mapping[int, int], sigma: Mapping[int, int], inst: DcopInstance
) -> tuple[GroundedConstraint, ...]:
    """Constraints scoping a queried variable owned by ``agent``, grounded by
    the complete solution overlaid with ``sigma_bar``.  Ordered by id."""
    own_queried = [x for x in sigma_bar if inst.owner.get(x) == agent]
    by_id = {}
    for x in own_queried:
        for c in inst.constraints_by_var[x]:
            by_id[c.id] = c
    full = overlay(sigma, sigma_bar)
    return tuple(ground(by_id[cid], full) for cid in sorted(by_id))


def _sort_key(g: GroundedConstraint) -> tuple:
    return (-g.cost, g.constraint_id)


def merge_sort_counted(items: Sequence, key: Callable, charge: Callable[[int], None]) -> list:
    """Stable merge sort that charges one op per key comparison."""
    keyed = [(key(item), item) for item in items]

    def merge_run(lo: int, mid: int, hi: int) -> None:
        left = keyed[lo:mid]
        right = keyed[mid:hi]
        i = j = 0
        k = lo
        comparisons = 0
        while i < len(left) and j < len(right):
            comparisons += 1
            if right[j][0] < left[i][0]:
                keyed[k] = right[j]
                j += 1
            else:
                keyed[k] = left[i]
                i += 1
            k += 1
        charge(comparisons)
        while i < len(left):
            keyed[k] = left[i]
            i += 1
            k += 1
        while j < len(right):
            keyed[k] = right[j]
            j += 1
            k += 1

    width = 1
    n = len(keyed)
    while width < n:
        lo = 0
        while lo < n:
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            if mid < hi:
                merge_run(lo, mid, hi)
            lo = hi
        width *= 2
    return [item for _, item in keyed]


class CountingHeap:
    """Binary min-heap charging one op per element move on push/pop."""

    def __init__(self, charge: Callable[[int], None]):
        self._heap: list = []
        self._charge = charge

    def __len__(self) -> int:
        return len(self._heap)

    def push(self, entry) -> None:
        h = self._heap
        h.append(entry)
        moves = 1
        i = len(h) - 1
        while i > 0:
            parent = (i - 1) // 2
            if h[i] < h[parent]:
                h[i], h[parent] = h[parent], h[i]
                moves += 1
                i = parent
            else:
                break
        self._charge(moves)

    def pop(self):
        h = self._heap
        top = h[0]
        last = h.pop()
        moves = 1
        if h:
            h[0] = last
            i = 0
            n = len(h)
            while True:
                left = 2 * i + 1
                right = left + 1
                smallest = i
                if left < n and h[left] < h[smallest]:
                    smallest = left
                if right < n and h[right] < h[smallest]:
                    smallest = right
                if smallest == i:
                    break
                h[i], h[smallest] = h[smallest], h[i]
                moves += 1
                i = smallest
        self._charge(moves)
        return top


def _dedup_by_id(groups: Iterable[Iterable[GroundedConstraint]]) -> list[GroundedConstraint]:
    by_id: dict[int, GroundedConstraint] = {}
    for group in groups:
        for g in group:
            by_id.setdefault(g.constraint_id, g)
    return [by_id[cid] for cid in sorted(by_id)]


class _Responder(SimAgent):
    def __init__(self, agent_id: int, inst: DcopInstance, sigma: Assignment):
        super().__init__(agent_id)
        self._inst = inst
        self._sigma = sigma

    def on_message(self, msg: Message) -> None:
        if msg.kind != REQUEST:
            return
        payload: RequestPayload = msg.payload
        grounded = get_own_grounded_constraints(
            self.id, payload.assignment, self._sigma, self._inst
        )
        self.charge(len(grounded))
        if payload.sorted_reply:
            grounded = tuple(merge_sort_counted(grounded, _sort_key, self.charge))
        self.send(
            msg.sender,
            REPLY,
            ReplyPayload(responder=self.id, echo=payload.assignment, grounded=grounded),
        )


class _Asker(SimAgent):
    """Runs the query side of the protocol and assembles the explanation."""

    def __init__(self, agent_id: int, inst: DcopInstance, sigma: Assignment, query: Query, variant: Variant):
        super().__init__(agent_id)
        self._inst = inst
        self._sigma = sigma
        self._query = query
        self._variant = variant
        self._others: list[int] = []
        self._own_sol: tuple[GroundedConstraint, ...] = ()
        self._own_alt: tuple[GroundedConstraint, ...] = ()
        self._sol_replies: dict[int, tuple[GroundedConstraint, ...]] = {}
        self._alt_replies: dict[int, tuple[GroundedConstraint, ...]] = {}
        self.rounds = 0
        self.result: dict | None = None
        # v2 state
        self._v2_solution_side: list[GroundedConstraint] | None = None
        self._v2_sol_cost: Cost = 0
        self._v2_collected: dict[int, GroundedConstraint] = {}
        self._v2_collected_cost: Cost = 0
        self._v2_degrees: dict[int, int] = {}
        self._v2_ranked: list[int] | None = None
        self._v2_next_rank = 0
        self._v2_contacted: set[int] = set()
        self._v2_pending = 0

    # -- shared plumbing ---------------------------------------------------

    def on_start(self) -> None:
        q = self._query
        self._own_sol = get_own_grounded_constraints(self.id, q.original, self._sigma, self._inst)
        self.charge(len(self._own_sol))
        self._own_alt = get_own_grounded_constraints(self.id, q.alternative, self._sigma, self._inst)
        self.charge(len(self._own_alt))
        if self._variant in PRESORTING_VARIANTS:
            self._own_alt = tuple(merge_sort_counted(self._own_alt, _sort_key, self.charge))
        self._others = sorted(
            {self._inst.owner[x] for x in q.original} - {self.id}
        )
        if self._variant is Variant.V2:
            self._start_v2()
        else:
            self._start_fanout()

    def on_message(self, msg: Message) -> None:
        if msg.kind != REPLY:
            return
        payload: ReplyPayload = msg.payload
        if payload.echo == self._query.original:
            self._sol_replies[payload.responder] = payload.grounded
        else:
            self._alt_replies[payload.responder] = payload.grounded
        if self._variant is Variant.V2:
            self._v2_on_reply(payload)
        else:
            expected = 2 * len(self._others)
            if len(self._sol_replies) + len(self._alt_replies) == expected:
                self._finalize_fanout()

    def _solution_side(self) -> list[GroundedConstraint]:
        return _dedup_by_id([self._own_sol, *self._sol_replies.values()])

    def _finish(self, solution_side, alternative_side, valid: bool) -> None:
        self.result = {
            "solution_side": tuple(solution_side),
            "alternative_side": tuple(alternative_side),
            "valid": valid,
        }

    # -- base / o1 / o2 / v1 -----------------------------------------------

    def _start_fanout(self) -> None:
        sorted_reply = self._variant in PRESORTING_VARIANTS
        for agent in self._others:
            self.send(agent, REQUEST, RequestPayload(self._query.original, sorted_reply=False))
            self.send(agent, REQUEST, RequestPayload(self._query.alternative, sorted_reply=sorted_reply))
        if self._others:
            self.rounds = 1
        else:
            self._finalize_fanout()

    def _finalize_fanout(self) -> None:
        solution_side = self._solution_side()
        sol_cost = sum_costs(g.cost for g in solution_side)
        if self._variant is Variant.BASE:
            alternative = _dedup_by_id([self._own_alt, *self._alt_replies.values()])
            alt_cost = sum_costs(g.cost for g in alternative)
            self._finish(solution_side, alternative, valid=alt_cost >= sol_cost)
            return
        if self._variant is Variant.O1:
            pool = _dedup_by_id([self._own_alt, *self._alt_replies.values()])
            ordered = merge_sort_counted(pool, _sort_key, self.charge)
            taken, reached = self._prefix_take(iter(ordered), sol_cost)
        elif self._variant is Variant.O2:
            taken, reached = self._heap_take(sol_cost)
        else:  # V1
            taken, reached = self._prefix_take(self._round_robin(), sol_cost)
        self._finish(solution_side, taken, valid=reached)

    def _streams(self) -> list[tuple[GroundedConstraint, ...]]:
        streams = [self._own_alt]
        streams.extend(self._alt_replies[a] for a in self._others)
        return streams

    def _prefix_take(self, items, threshold: Cost):
        """Shortest prefix whose (deduplicated) cost sum reaches the threshold.

        Charges one comparison per loop: the running-sum check.  Duplicate
        constraint ids are skipped without affecting the sum.
        """
        running: Cost = 0
        taken: list[GroundedConstraint] = []
        seen: set[int] = set()
        while True:
            self.charge(1)
            if running >= threshold:
                return taken, True
            item = next(items, None)
            while item is not None and item.constraint_id in seen:
                item = next(items, None)
            if item is None:
                return taken, False
            seen.add(item.constraint_id)
            taken.append(item)
            running = add_costs(running, item.cost)

    def _round_robin(self):
        streams = self._streams()
        depth = 0
        while any(depth < len(s) for s in streams):
            for s in streams:
                if depth < len(s):
                    yield s[depth]
            depth += 1

    def _heap_take(self, threshold: Cost):
        streams = self._streams()
        heap = CountingHeap(self.charge)
        for si, stream in enumerate(streams):
            if stream:
                heap.push((_sort_key(stream[0]), si, 0))
        running: Cost = 0
        taken: list[GroundedConstraint] = []
        seen: set[int] = set()
        while True:
            self.charge(1)
            if running >= threshold:
                return taken, True
            if not len(heap):
                return taken, False
            _, si, idx = heap.pop()
            item = streams[si][idx]
            if idx + 1 < len(streams[si]):
                heap.push((_sort_key(streams[si][idx + 1]), si, idx + 1))
            if item.constraint_id in seen:
                continue
            seen.add(item.constraint_id)
            taken.append(item)
            running = add_costs(running, item.cost)

    # -- v2 ------------------------------------------------------------------

    def _start_v2(self) -> None:
        for g in self._own_alt:
            self._v2_collected[g.constraint_id] = g
        self._v2_collected_cost = sum_costs(g.cost for g in self._v2_collected.values())
        if not self._others:
            self._v2_solution_side = self._solution_side()
            self._v2_sol_cost = sum_costs(g.cost for g in self._v2_solution_side)
            self._v2_decide()
            return
        for agent in self._others:
            self.send(agent, REQUEST, RequestPayload(self._query.original, sorted_reply=False))
        self.rounds = 1

    def _v2_on_reply(self, payload: ReplyPayload) -> None:
        if self._v2_solution_side is None:
            if len(self._sol_replies) < len(self._others):
                return
            self._v2_solution_side = self._solution_side()
            self._v2_sol_cost = sum_costs(g.cost for g in self._v2_solution_side)
            self._v2_degrees = {a: len(self._sol_replies[a]) for a in self._others}
            self._v2_decide()
            return
        self._v2_pending -= 1
        for g in payload.grounded:
            if g.constraint_id not in self._v2_collected:
                self._v2_collected[g.constraint_id] = g
                self._v2_collected_cost = add_costs(self._v2_collected_cost, g.cost)
        if self._v2_pending == 0:
            self._v2_decide()

    def _v2_decide(self) -> None:
        self.charge(1)
        if self._v2_collected_cost >= self._v2_sol_cost:
            self._v2_finish(valid=True)
            return
        uncontacted = [a for a in self._others if a not in self._v2_contacted]
        if not uncontacted:
            self._v2_finish(valid=False)
            return
        if self._v2_ranked is None:
            self._v2_ranked = merge_sort_counted(
                uncontacted, lambda a: (-self._v2_degrees[a], a), self.charge
            )
        delta = (
            INFINITY
            if self._v2_sol_cost == INFINITY
            else self._v2_sol_cost - self._v2_collected_cost
        )
        c_max = self._inst.max_finite_cost
        chosen: list[int] = []
        estimate = 0
        while self._v2_next_rank < len(self._v2_ranked):
            agent = self._v2_ranked[self._v2_next_rank]
            self._v2_next_rank += 1
            chosen.append(agent)
            estimate += self._v2_degrees[agent] * c_max
            self.charge(1)
            if estimate >= delta:
                break
        for agent in chosen:
            self._v2_contacted.add(agent)
            self.send(agent, REQUEST, RequestPayload(self._query.alternative, sorted_reply=False))
        self._v2_pending = len(chosen)
        self.rounds += 1

    def _v2_finish(self, valid: bool) -> None:
        assert self._v2_solution_side is not None
        alternative = [self._v2_collected[cid] for cid in sorted(self._v2_collected)]
        self._finish(self._v2_solution_side, alternative, valid=valid)


def run_explanation(
    variant: Variant,
    inst: DcopInstance,
    sigma: Assignment,
    query: Query,
    trace: list | None = None,
) -> tuple[Explanation, RunStats]:
    """Execute one protocol run and return the explanation plus run metrics."""
    variant = Variant(variant)
    if not inst.is_complete(sigma):
        raise MalformedQuery("the published solution must be complete")
    inst.validate_assignment(sigma)
    validate_query(inst, query)
    for x, v in query.original.items():
        if sigma[x] != v:
            raise MalformedQuery(
                f"query original value for variable {x} disagrees with the solution"
            )
    asker = _Asker(query.asked_agent, inst, sigma, query, variant)
    agents: list[SimAgent] = [asker]
    agents.extend(
        _Responder(a, inst, sigma) for a in inst.agents if a != query.asked_agent
    )
    world = World(agents, trace=trace)
    steps = world.run(max_steps=4 * (len(inst.agents) + 2))
    assert asker.result is not None, "protocol ended without a result"
    explanation = make_explanation(
        asker.result["solution_side"], asker.result["alternative_side"]
    )
    stats = RunStats(
        nclo=world.nclo[query.asked_agent],
        messages=world.messages_sent,
        length=len(explanation.alternative_side),
        valid=asker.result["valid"],
        rounds=asker.rounds,
        steps=steps,
    )
    return explanation, stats


def minimal_subset_oracle(costs: Sequence, threshold: Cost):
    """Exact minimum cardinality of a subset of ``costs`` summing to at least
    ``threshold``, by exhaustive enumeration in increasing subset size.
    Returns INFINITY when no subset reaches the threshold."""
    if len(costs) > 25:
        raise ListTooLarge(f"oracle refuses {len(costs)} costs (max 25)")
    if threshold <= 0:
        return 0
    if sum_costs(costs) < threshold:
        return INFINITY
    for k in range(1, len(costs) + 1):
        for combo in combinations(costs, k):
            if sum_costs(combo) >= threshold:
                return k
    return INFINITY
