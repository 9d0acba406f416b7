"""Command-line interface.

Subcommands: ``generate``, ``solve``, ``query``, ``explain``,
``experiment run``, and ``serve``.  Inputs are JSON files (``-`` reads
stdin); outputs are canonical JSON (sorted keys, two-space indent), so
repeated invocations with the same seeds are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .core import DcopInstance, solution_cost
from .engine import Variant, run_explanation
from .errors import DcopError
from .experiments import config_from_json, run_experiment_to_dir
from .generators import GenConfig, GenKind, generate
from .queries import Query, best_alternative_query, random_baseline_query, select_query_vars
from .serialize import (
    assignment_from_json,
    assignment_to_json,
    canonical_dumps,
    cost_to_json,
    explanation_to_json,
    instance_from_json,
    instance_to_json,
)
from .solvers import DEFAULT_NODE_BUDGET, solve_1opt, solve_optimal


def _read_json(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return json.loads(text)


def _write_text(text: str, out: "str | None") -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _load_instance(path: str) -> DcopInstance:
    return instance_from_json(_read_json(path))


def _load_solution(path: str) -> dict:
    """Accept either a bare assignment map or the `solve` output wrapper."""
    doc = _read_json(path)
    if isinstance(doc, dict) and "solution" in doc:
        doc = doc["solution"]
    return assignment_from_json(doc)


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _cmd_generate(args: argparse.Namespace) -> int:
    if args.config:
        doc = _read_json(args.config)
        cfg = GenConfig(**{**doc, "kind": GenKind(doc["kind"])})
    else:
        cfg = GenConfig(
            kind=GenKind(args.kind),
            num_agents=args.agents,
            density=args.density,
            domain_size=args.domain_size,
            cost_min=args.cost_min,
            cost_max=args.cost_max,
            num_slots=args.slots,
            seed=args.seed,
        )
    inst = generate(cfg)
    _write_text(canonical_dumps(instance_to_json(inst)), args.out)
    return 0


def _cmd_solve(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    if args.mode == "optimal":
        result = solve_optimal(inst, node_budget=args.node_budget)
    else:
        result = solve_1opt(inst, seed=args.seed)
    doc = {
        "solution": assignment_to_json(result.solution),
        "cost": cost_to_json(result.cost),
    }
    _write_text(canonical_dumps(doc), args.out)
    return 0


def _cmd_query(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    sigma = _load_solution(args.solution)
    rng = _rng(args.seed)
    chosen = select_query_vars(inst, sigma, args.size, rng)
    if args.mode == "best":
        query = best_alternative_query(inst, sigma, chosen, rng, node_budget=args.node_budget)
    else:
        exclude: dict[int, set] = {}
        if args.exclude_one_opt:
            other = _load_solution(args.exclude_one_opt)
            exclude = {x: {other[x]} for x in other}
        query = random_baseline_query(inst, sigma, chosen, exclude, rng)
    doc = {
        "asked_agent": query.asked_agent,
        "original": assignment_to_json(query.original),
        "alternative": assignment_to_json(query.alternative),
    }
    _write_text(canonical_dumps(doc), args.out)
    return 0


def _cmd_explain(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    sigma = _load_solution(args.solution)
    qdoc = _read_json(args.query)
    query = Query(
        asked_agent=qdoc["asked_agent"],
        original=assignment_from_json(qdoc["original"]),
        alternative=assignment_from_json(qdoc["alternative"]),
    )
    trace: list | None = [] if args.trace else None
    explanation, stats = run_explanation(Variant(args.variant), inst, sigma, query, trace=trace)
    doc = {
        "explanation": explanation_to_json(explanation),
        "stats": {
            "nclo": stats.nclo,
            "messages": stats.messages,
            "length": stats.length,
            "valid": stats.valid,
            "rounds": stats.rounds,
            "steps": stats.steps,
        },
    }
    _write_text(canonical_dumps(doc), args.out)
    if args.trace:
        lines = "".join(json.dumps(entry, sort_keys=True) + "\n" for entry in trace or [])
        Path(args.trace).write_text(lines)
    return 0


def _cmd_experiment_run(args: argparse.Namespace) -> int:
    cfg = config_from_json(_read_json(args.config))
    if args.fast:
        from dataclasses import replace

        from .experiments import FAST_REPETITIONS

        cfg = replace(cfg, repetitions=min(cfg.repetitions, FAST_REPETITIONS))
    meta = run_experiment_to_dir(cfg, args.out)
    sys.stdout.write(
        f"wrote {meta['runs']} runs to {args.out} "
        f"({len(meta['skipped'])} repetitions skipped)\n"
    )
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dcopex",
        description="Generate, solve, query, and explain distributed constraint optimization instances.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="emit a benchmark instance as JSON")
    p.add_argument("--config", help="JSON config file; overrides the flags")
    p.add_argument("--kind", choices=[k.value for k in GenKind], default="random")
    p.add_argument("--agents", type=int, default=10)
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--domain-size", type=int, default=10)
    p.add_argument("--cost-min", type=int, default=1)
    p.add_argument("--cost-max", type=int, default=100)
    p.add_argument("--slots", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("solve", help="solve an instance optimally or to 1-optimality")
    p.add_argument("--instance", required=True, help="instance JSON ('-' for stdin)")
    p.add_argument("--mode", choices=["optimal", "one-opt"], default="optimal")
    p.add_argument("--seed", type=int, default=0, help="start seed for one-opt")
    p.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("query", help="build a contrastive query against a solution")
    p.add_argument("--instance", required=True)
    p.add_argument("--solution", required=True, help="solution JSON ('-' for stdin)")
    p.add_argument("--size", type=int, default=1, help="number of queried variables")
    p.add_argument("--mode", choices=["random", "best"], default="random")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--exclude-one-opt",
        metavar="SOLUTION_JSON",
        help="extra solution whose values are excluded from random alternatives",
    )
    p.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_query)

    p = sub.add_parser("explain", help="answer a query through the protocol")
    p.add_argument("--instance", required=True)
    p.add_argument("--solution", required=True)
    p.add_argument("--query", required=True)
    p.add_argument("--variant", choices=[v.value for v in Variant], default="base")
    p.add_argument("--trace", help="write a JSON-lines message trace to this path")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_explain)

    p = sub.add_parser("experiment", help="batch experiment tooling")
    exp_sub = p.add_subparsers(dest="experiment_command", required=True)
    run_p = exp_sub.add_parser("run", help="run a config and write CSV outputs")
    run_p.add_argument("--config", required=True)
    run_p.add_argument("--out", required=True, help="output directory")
    run_p.add_argument("--fast", action="store_true",
                       help="cap repetitions at 20 for a quick look")
    run_p.set_defaults(func=_cmd_experiment_run)

    p = sub.add_parser("serve", help="run the HTTP explanation service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8345)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: "list[str] | None" = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DcopError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
