"""HTTP facade over generation, solving, querying, and explanation.

Sessions hold an instance, at most one published solution, and an
append-only history of (query, explanation, stats) triples.  Everything is
in-memory; ``GET /sessions/{id}/export`` and ``POST /sessions/import`` move
a session through JSON for persistence.  Error mapping: malformed bodies
are 400, unknown sessions 404, domain invariant violations 422, and a
budget-exhausted exact solve 409.  An explanation that fails validity is a
normal 200 response with ``valid: false``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Any

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .core import DcopInstance, solution_cost
from .engine import RunStats, Variant, run_explanation
from .errors import (
    BudgetExhausted,
    DcopError,
    InstanceFormatError,
    InvalidConfig,
)
from .generators import GenConfig, GenKind, generate
from .presets import PRESETS
from .queries import Query
from .serialize import (
    assignment_from_json,
    assignment_to_json,
    cost_to_json,
    explanation_to_json,
    instance_from_json,
    instance_to_json,
)
from .solvers import DEFAULT_NODE_BUDGET, solve_1opt, solve_optimal


@dataclass
class Session:
    session_id: str
    instance: DcopInstance
    solution: dict | None = None
    solution_mode: str | None = None
    history: list[dict] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    def __init__(self):
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        self._counter = 0

    def create(self, instance: DcopInstance) -> Session:
        with self._lock:
            self._counter += 1
            session = Session(session_id=f"s{self._counter}", instance=instance)
            self._sessions[session.session_id] = session
            return session

    def get(self, session_id: str) -> "Session | None":
        with self._lock:
            return self._sessions.get(session_id)


def _instance_summary(inst: DcopInstance) -> dict:
    return {
        "num_agents": len(inst.agents),
        "num_variables": len(inst.variables),
        "num_constraints": len(inst.constraints),
        "domain_sizes": {str(x): len(inst.domains[x]) for x in inst.variables},
    }


def _rendering(explanation, stats: RunStats, queried_vars: set[int]) -> dict:
    """Per-constraint lines the UI turns into prose; ``partners`` are the
    scope variables outside the query."""

    def lines(side):
        out = []
        for g in side:
            out.append(
                {
                    "constraint_id": g.constraint_id,
                    "scope": list(g.scope),
                    "values": list(g.values),
                    "cost": cost_to_json(g.cost),
                    "partners": [x for x in g.scope if x not in queried_vars],
                }
            )
        return out

    return {
        "solution_lines": lines(explanation.solution_side),
        "alternative_lines": lines(explanation.alternative_side),
        "solution_total": cost_to_json(explanation.solution_cost),
        "alternative_total": cost_to_json(explanation.alternative_cost),
        "valid": stats.valid,
        "length": stats.length,
        "nclo": stats.nclo,
    }


def _stats_doc(stats: RunStats) -> dict:
    return {
        "nclo": stats.nclo,
        "messages": stats.messages,
        "length": stats.length,
        "valid": stats.valid,
        "rounds": stats.rounds,
        "steps": stats.steps,
    }


def create_app() -> FastAPI:
    app = FastAPI(title="dcopex explanation service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore()

    @app.exception_handler(RequestValidationError)
    async def _bad_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    def _not_found(session_id: str) -> JSONResponse:
        return JSONResponse(
            status_code=404, content={"detail": f"unknown session {session_id}"}
        )

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    @app.post("/sessions")
    def create_session(body: dict) -> Any:
        try:
            if "preset" in body:
                maker = PRESETS.get(body["preset"])
                if maker is None:
                    return JSONResponse(
                        status_code=400,
                        content={"detail": f"unknown preset {body['preset']!r}"},
                    )
                inst = maker()
            elif "generator" in body:
                doc = body["generator"]
                if not isinstance(doc, dict) or "kind" not in doc:
                    return JSONResponse(
                        status_code=400, content={"detail": "generator needs a 'kind'"}
                    )
                cfg = GenConfig(**{**doc, "kind": GenKind(doc["kind"])})
                inst = generate(cfg)
            elif "instance" in body:
                inst = instance_from_json(body["instance"])
            else:
                return JSONResponse(
                    status_code=400,
                    content={"detail": "body needs 'preset', 'generator', or 'instance'"},
                )
        except (InstanceFormatError, InvalidConfig, ValueError, TypeError) as exc:
            return JSONResponse(status_code=400, content={"detail": str(exc)})
        except DcopError as exc:
            return JSONResponse(status_code=422, content={"detail": str(exc)})
        session = store.create(inst)
        return {"session_id": session.session_id, "summary": _instance_summary(inst)}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> Any:
        session = store.get(session_id)
        if session is None:
            return _not_found(session_id)
        with session.lock:
            return {
                "session_id": session.session_id,
                "instance": instance_to_json(session.instance),
                "solution": (
                    assignment_to_json(session.solution) if session.solution else None
                ),
                "solution_mode": session.solution_mode,
                "solution_cost": (
                    cost_to_json(solution_cost(session.instance, session.solution))
                    if session.solution
                    else None
                ),
                "history_length": len(session.history),
            }

    @app.post("/sessions/{session_id}/solve")
    def solve(session_id: str, body: dict) -> Any:
        session = store.get(session_id)
        if session is None:
            return _not_found(session_id)
        mode = body.get("mode", "optimal")
        if mode not in ("optimal", "one-opt"):
            return JSONResponse(
                status_code=400, content={"detail": f"unknown mode {mode!r}"}
            )
        with session.lock:
            try:
                if mode == "optimal":
                    result = solve_optimal(
                        session.instance,
                        node_budget=body.get("node_budget", DEFAULT_NODE_BUDGET),
                    )
                else:
                    result = solve_1opt(session.instance, seed=body.get("seed", 0))
            except BudgetExhausted as exc:
                return JSONResponse(status_code=409, content={"detail": str(exc)})
            session.solution = result.solution
            session.solution_mode = mode
            return {
                "solution": assignment_to_json(result.solution),
                "cost": cost_to_json(result.cost),
            }

    @app.post("/sessions/{session_id}/explain")
    def explain(session_id: str, body: dict) -> Any:
        session = store.get(session_id)
        if session is None:
            return _not_found(session_id)
        with session.lock:
            if session.solution is None:
                return JSONResponse(
                    status_code=422,
                    content={"detail": "session has no solution; call /solve first"},
                )
            try:
                variant = Variant(body.get("variant", "base"))
                qdoc = body.get("query")
                if not isinstance(qdoc, dict):
                    return JSONResponse(
                        status_code=400, content={"detail": "body needs a 'query' object"}
                    )
                query = Query(
                    asked_agent=qdoc.get("asked_agent"),
                    original=assignment_from_json(qdoc.get("original", {})),
                    alternative=assignment_from_json(qdoc.get("alternative", {})),
                )
                explanation, stats = run_explanation(
                    variant, session.instance, session.solution, query
                )
            except (InstanceFormatError, ValueError) as exc:
                return JSONResponse(status_code=400, content={"detail": str(exc)})
            except DcopError as exc:
                return JSONResponse(status_code=422, content={"detail": str(exc)})
            record = {
                "query": {
                    "asked_agent": query.asked_agent,
                    "original": assignment_to_json(query.original),
                    "alternative": assignment_to_json(query.alternative),
                },
                "variant": variant.value,
                "explanation": explanation_to_json(explanation),
                "stats": _stats_doc(stats),
            }
            session.history.append(record)
            return {
                **record,
                "rendering": _rendering(explanation, stats, set(query.original)),
            }

    @app.get("/sessions/{session_id}/history")
    def history(session_id: str) -> Any:
        session = store.get(session_id)
        if session is None:
            return _not_found(session_id)
        with session.lock:
            return {"history": list(session.history)}

    @app.get("/sessions/{session_id}/export")
    def export_session(session_id: str) -> Any:
        session = store.get(session_id)
        if session is None:
            return _not_found(session_id)
        with session.lock:
            return {
                "instance": instance_to_json(session.instance),
                "solution": (
                    assignment_to_json(session.solution) if session.solution else None
                ),
                "solution_mode": session.solution_mode,
                "history": list(session.history),
            }

    @app.post("/sessions/import")
    def import_session(body: dict) -> Any:
        try:
            inst = instance_from_json(body.get("instance"))
        except InstanceFormatError as exc:
            return JSONResponse(status_code=400, content={"detail": str(exc)})
        except DcopError as exc:
            return JSONResponse(status_code=422, content={"detail": str(exc)})
        session = store.create(inst)
        if body.get("solution"):
            session.solution = assignment_from_json(body["solution"])
            session.solution_mode = body.get("solution_mode")
        session.history.extend(body.get("history", []))
        return {"session_id": session.session_id, "summary": _instance_summary(inst)}

    return app
