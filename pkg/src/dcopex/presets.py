"""Built-in demo instances for the HTTP service and the explorer UI."""

from __future__ import annotations

from itertools import product

from .core import Constraint, DcopInstance
from .generators import MEETING_CONFLICT_COST

SLOT_NAMES = ("Morning", "Noon", "Afternoon", "Evening")


def meeting_demo() -> DcopInstance:
    """Two meetings over four time slots, four attendees.

    You and Bob attend both meetings (a binary constraint between them);
    Charlie attends only the first meeting and David only the second (unary
    preference constraints).  Preferred slots: you Evening, Bob Afternoon,
    Charlie Afternoon, David Evening.  The optimal schedule is M1 Afternoon,
    M2 Evening at cost 8.
    """
    slots = tuple(range(4))

    def pair_table(preferences: list[int]) -> dict:
        table = {}
        for a, b in product(slots, slots):
            if a == b:
                table[(a, b)] = MEETING_CONFLICT_COST
            else:
                table[(a, b)] = sum(
                    2 ** abs(a - p) + 2 ** abs(b - p) for p in preferences
                )
        return table

    shared = Constraint(id=0, scope=(0, 1), table=pair_table([3, 2]))
    charlie = Constraint(id=1, scope=(0,), table={(s,): 2 ** abs(s - 2) for s in slots})
    david = Constraint(id=2, scope=(1,), table={(s,): 2 ** abs(s - 3) for s in slots})
    labels = {
        "variables": {"0": "M1", "1": "M2"},
        "values": {
            "0": {str(i): name for i, name in enumerate(SLOT_NAMES)},
            "1": {str(i): name for i, name in enumerate(SLOT_NAMES)},
        },
        "constraints": {
            "0": "You and Bob attend both meetings",
            "1": "Charlie attends M1",
            "2": "David attends M2",
        },
    }
    return DcopInstance(
        agents=(0, 1),
        variables=(0, 1),
        domains={0: slots, 1: slots},
        constraints=(shared, charlie, david),
        owner={0: 0, 1: 1},
        labels=labels,
    )


PRESETS = {"meeting-demo": meeting_demo}
