"""JSON round-tripping for instances, assignments, queries, and explanations.

The instance document looks like::

    {
      "agents": [0, 1],
      "variables": [{"id": 0, "domain": [0, 1], "owner": 0}, ...],
      "constraints": [
        {"id": 0, "scope": [0, 1],
         "table": [{"values": [0, 0], "cost": 1}, ...]},
        ...
      ],
      "labels": {"variables": {"0": "M1"}, "values": {"0": {"0": "Morning"}}}
    }

``labels`` is optional display metadata.  The string ``"inf"`` encodes the
INFINITY cost.  Round-trips are lossless, including list orders.
"""

from __future__ import annotations

import json
from typing import Any, Mapping

from .core import INFINITY, Assignment, Constraint, DcopInstance, Explanation, GroundedConstraint
from .errors import InstanceFormatError


def cost_to_json(cost) -> "int | str":
    return "inf" if cost == INFINITY else cost


def cost_from_json(raw):
    if raw == "inf":
        return INFINITY
    if isinstance(raw, int) and not isinstance(raw, bool):
        return raw
    raise InstanceFormatError(f"cost must be a non-negative int or \"inf\", got {raw!r}")


def canonical_dumps(obj: Any) -> str:
    """Stable JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise InstanceFormatError(msg)


def _int_field(obj: Mapping, key: str, where: str) -> int:
    _require(key in obj, f"{where}: missing '{key}'")
    v = obj[key]
    _require(isinstance(v, int) and not isinstance(v, bool), f"{where}: '{key}' must be an int")
    return v


def instance_to_json(inst: DcopInstance) -> dict:
    doc: dict = {
        "agents": list(inst.agents),
        "variables": [
            {"id": x, "domain": list(inst.domains[x]), "owner": inst.owner[x]}
            for x in inst.variables
        ],
        "constraints": [
            {
                "id": c.id,
                "scope": list(c.scope),
                "table": [
                    {"values": list(vals), "cost": cost_to_json(cost)}
                    for vals, cost in c.table.items()
                ],
            }
            for c in inst.constraints
        ],
    }
    if inst.labels is not None:
        doc["labels"] = inst.labels
    return doc


def instance_from_json(doc: Any) -> DcopInstance:
    _require(isinstance(doc, dict), "instance document must be a JSON object")
    for key in ("agents", "variables", "constraints"):
        _require(key in doc, f"instance document: missing '{key}'")
        _require(isinstance(doc[key], list), f"instance document: '{key}' must be a list")
    agents = []
    for a in doc["agents"]:
        _require(isinstance(a, int) and not isinstance(a, bool), "agent ids must be ints")
        agents.append(a)
    variables: list[int] = []
    domains: dict[int, tuple[int, ...]] = {}
    owner: dict[int, int] = {}
    for entry in doc["variables"]:
        _require(isinstance(entry, dict), "each variable must be an object")
        x = _int_field(entry, "id", "variable")
        _require("domain" in entry and isinstance(entry["domain"], list), f"variable {x}: missing domain list")
        for v in entry["domain"]:
            _require(isinstance(v, int) and not isinstance(v, bool), f"variable {x}: domain values must be ints")
        variables.append(x)
        domains[x] = tuple(entry["domain"])
        owner[x] = _int_field(entry, "owner", f"variable {x}")
    constraints: list[Constraint] = []
    for entry in doc["constraints"]:
        _require(isinstance(entry, dict), "each constraint must be an object")
        cid = _int_field(entry, "id", "constraint")
        _require("scope" in entry and isinstance(entry["scope"], list), f"constraint {cid}: missing scope list")
        for s in entry["scope"]:
            _require(isinstance(s, int) and not isinstance(s, bool),
                     f"constraint {cid}: scope entries must be ints")
        scope = tuple(entry["scope"])
        _require("table" in entry and isinstance(entry["table"], list), f"constraint {cid}: missing table list")
        table: dict[tuple[int, ...], int | float] = {}
        for row in entry["table"]:
            _require(isinstance(row, dict) and "values" in row and "cost" in row,
                     f"constraint {cid}: each table row needs 'values' and 'cost'")
            vals = tuple(row["values"])
            for v in vals:
                _require(isinstance(v, int) and not isinstance(v, bool),
                         f"constraint {cid}: table values must be ints")
            _require(vals not in table, f"constraint {cid}: duplicate table row {vals}")
            table[vals] = cost_from_json(row["cost"])
        constraints.append(Constraint(id=cid, scope=scope, table=table))
    labels = doc.get("labels")
    if labels is not None:
        _require(isinstance(labels, dict), "labels must be an object")
    return DcopInstance(
        agents=tuple(agents),
        variables=tuple(variables),
        domains=domains,
        constraints=tuple(constraints),
        owner=owner,
        labels=labels,
    )


def assignment_to_json(assignment: Mapping[int, int]) -> dict:
    return {str(x): v for x, v in sorted(assignment.items())}


def assignment_from_json(doc: Any) -> Assignment:
    _require(isinstance(doc, dict), "assignment must be a JSON object")
    out: Assignment = {}
    for k, v in doc.items():
        try:
            x = int(k)
        except (TypeError, ValueError):
            raise InstanceFormatError(f"assignment key {k!r} is not an int") from None
        _require(isinstance(v, int) and not isinstance(v, bool),
                 f"assignment value for {k} must be an int")
        out[x] = v
    return out


def grounded_to_json(g: GroundedConstraint) -> dict:
    return {
        "constraint_id": g.constraint_id,
        "scope": list(g.scope),
        "values": list(g.values),
        "cost": cost_to_json(g.cost),
    }


def grounded_from_json(doc: Any) -> GroundedConstraint:
    _require(isinstance(doc, dict), "grounded constraint must be an object")
    return GroundedConstraint(
        constraint_id=_int_field(doc, "constraint_id", "grounded constraint"),
        scope=tuple(doc["scope"]),
        values=tuple(doc["values"]),
        cost=cost_from_json(doc["cost"]),
    )


def explanation_to_json(e: Explanation) -> dict:
    return {
        "solution_side": [grounded_to_json(g) for g in e.solution_side],
        "alternative_side": [grounded_to_json(g) for g in e.alternative_side],
        "solution_cost": cost_to_json(e.solution_cost),
        "alternative_cost": cost_to_json(e.alternative_cost),
    }
