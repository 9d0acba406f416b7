"""Seeded batch experiments: validity rate, explanation length, NCLO, messages.

Seed discipline: every random stream derives from the master seed through
``numpy.random.SeedSequence`` with a fixed entropy key:

* instance for (agent_count, repetition):  [master, 0, agent_count, repetition]
* one-opt start for the same cell:         [master, 1, agent_count, repetition]
* query for (agent_count, q_size, rep):    [master, 2, agent_count, q_size, repetition]
  (spawn child 0 picks the variables, child 1 picks alternative values)

Variants never enter a seed key, so adding a variant to a config leaves every
other variant's instances and queries untouched.  Query variables are likewise
identical across query modes and solution modes for the same cell.

Outputs: ``raw.csv`` (one row per run), ``summary.csv`` (one row per cell with
count/mean/standard deviation, population convention), and ``meta.json``
(config echo, package version, schema version, skipped cells).  Rows are
written in sorted cell-key order, so repeated invocations are byte-identical.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Iterable

import numpy as np

from . import __version__
from .engine import Variant, run_explanation
from .errors import BudgetExhausted, EmptyInput, InvalidConfig
from .generators import GenConfig, GenKind, generate
from .queries import best_alternative_query, random_baseline_query, select_query_vars
from .solvers import DEFAULT_NODE_BUDGET, solve_1opt, solve_optimal

SCHEMA_VERSION = 1

RAW_COLUMNS = [
    "solution_mode",
    "query_mode",
    "agent_count",
    "q_size",
    "variant",
    "repetition",
    "valid",
    "explanation_length",
    "nclo",
    "messages",
]

SUMMARY_COLUMNS = [
    "solution_mode",
    "query_mode",
    "agent_count",
    "q_size",
    "variant",
    "runs",
    "pct_valid",
    "mean_length",
    "sd_length",
    "mean_nclo",
    "sd_nclo",
    "mean_messages",
    "sd_messages",
]


class SolutionMode(str, Enum):
    OPTIMAL = "optimal"
    ONE_OPT = "one-opt"


class QueryMode(str, Enum):
    RANDOM_BASELINE = "random"
    BEST_ALTERNATIVE = "best"


DEFAULT_REPETITIONS = 100
FAST_REPETITIONS = 20


@dataclass(frozen=True)
class ExperimentConfig:
    generator: GenConfig
    solution_mode: SolutionMode
    query_mode: QueryMode
    q_sizes: tuple[int, ...]
    agent_counts: tuple[int, ...]
    variants: tuple[Variant, ...]
    repetitions: int = DEFAULT_REPETITIONS
    master_seed: int = 0
    node_budget: int = DEFAULT_NODE_BUDGET

    def __post_init__(self):
        object.__setattr__(self, "solution_mode", SolutionMode(self.solution_mode))
        object.__setattr__(self, "query_mode", QueryMode(self.query_mode))
        object.__setattr__(self, "q_sizes", tuple(self.q_sizes))
        object.__setattr__(self, "agent_counts", tuple(self.agent_counts))
        object.__setattr__(self, "variants", tuple(Variant(v) for v in self.variants))

    def validate(self) -> None:
        if self.repetitions < 1:
            raise InvalidConfig("repetitions must be >= 1")
        for name, values in (
            ("q_sizes", self.q_sizes),
            ("agent_counts", self.agent_counts),
            ("variants", self.variants),
        ):
            if not values:
                raise InvalidConfig(f"{name} must be non-empty")


def config_from_json(doc: dict) -> ExperimentConfig:
    try:
        gen = GenConfig(**{**doc["generator"], "kind": GenKind(doc["generator"]["kind"])})
        return ExperimentConfig(
            generator=gen,
            solution_mode=doc["solution_mode"],
            query_mode=doc["query_mode"],
            q_sizes=tuple(doc["q_sizes"]),
            agent_counts=tuple(doc["agent_counts"]),
            variants=tuple(doc["variants"]),
            repetitions=doc.get("repetitions", DEFAULT_REPETITIONS),
            master_seed=doc.get("master_seed", 0),
            node_budget=doc.get("node_budget", DEFAULT_NODE_BUDGET),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidConfig(f"bad experiment config: {exc}") from exc


def config_to_json(cfg: ExperimentConfig) -> dict:
    return {
        "generator": {
            "kind": cfg.generator.kind.value,
            "num_agents": cfg.generator.num_agents,
            "density": cfg.generator.density,
            "domain_size": cfg.generator.domain_size,
            "cost_min": cfg.generator.cost_min,
            "cost_max": cfg.generator.cost_max,
            "num_slots": cfg.generator.num_slots,
            "seed": cfg.generator.seed,
        },
        "solution_mode": cfg.solution_mode.value,
        "query_mode": cfg.query_mode.value,
        "q_sizes": list(cfg.q_sizes),
        "agent_counts": list(cfg.agent_counts),
        "variants": [v.value for v in cfg.variants],
        "repetitions": cfg.repetitions,
        "master_seed": cfg.master_seed,
        "node_budget": cfg.node_budget,
    }


_INSTANCE_TAG = 0
_SOLVE_TAG = 1
_QUERY_TAG = 2


def derive_seed(master_seed: int, *key: int) -> int:
    return int(np.random.SeedSequence([master_seed, *key]).generate_state(1, np.uint64)[0])


def _query_rngs(master_seed: int, agent_count: int, q_size: int, repetition: int):
    ss = np.random.SeedSequence([master_seed, _QUERY_TAG, agent_count, q_size, repetition])
    vars_ss, values_ss = ss.spawn(2)
    return np.random.Generator(np.random.PCG64(vars_ss)), np.random.Generator(
        np.random.PCG64(values_ss)
    )


def run_experiment(cfg: ExperimentConfig) -> tuple[list[dict], list[dict]]:
    """All raw rows (sorted by cell key) plus a log of skipped repetitions."""
    cfg.validate()
    rows: list[dict] = []
    skipped: list[dict] = []
    for agent_count in sorted(set(cfg.agent_counts)):
        for repetition in range(cfg.repetitions):
            inst_seed = derive_seed(cfg.master_seed, _INSTANCE_TAG, agent_count, repetition)
            inst = generate(replace(cfg.generator, num_agents=agent_count, seed=inst_seed))
            try:
                sigma, exclude = _solution_for(cfg, inst, agent_count, repetition)
            except BudgetExhausted:
                skipped.append(
                    {
                        "agent_count": agent_count,
                        "repetition": repetition,
                        "reason": "optimal solve exceeded the node budget",
                    }
                )
                continue
            for q_size in sorted(set(cfg.q_sizes)):
                vars_rng, values_rng = _query_rngs(
                    cfg.master_seed, agent_count, q_size, repetition
                )
                chosen = select_query_vars(inst, sigma, q_size, vars_rng)
                if cfg.query_mode is QueryMode.BEST_ALTERNATIVE:
                    query = best_alternative_query(
                        inst, sigma, chosen, values_rng, node_budget=cfg.node_budget
                    )
                else:
                    query = random_baseline_query(inst, sigma, chosen, exclude, values_rng)
                for variant in cfg.variants:
                    _, stats = run_explanation(variant, inst, sigma, query)
                    rows.append(
                        {
                            "solution_mode": cfg.solution_mode.value,
                            "query_mode": cfg.query_mode.value,
                            "agent_count": agent_count,
                            "q_size": q_size,
                            "variant": variant.value,
                            "repetition": repetition,
                            "valid": int(stats.valid),
                            "explanation_length": stats.length,
                            "nclo": stats.nclo,
                            "messages": stats.messages,
                        }
                    )
    rows.sort(
        key=lambda r: (r["agent_count"], r["q_size"], r["variant"], r["repetition"])
    )
    return rows, skipped


def _solution_for(cfg: ExperimentConfig, inst, agent_count: int, repetition: int):
    """The published solution plus per-variable exclusions for random queries.

    Random-baseline alternatives exclude the queried solution's value always;
    in one-opt runs they additionally exclude the optimal value whenever the
    exact solve fits the node budget (the mixed-regime protocol).
    """
    if cfg.solution_mode is SolutionMode.OPTIMAL:
        sigma = solve_optimal(inst, node_budget=cfg.node_budget).solution
        return sigma, {}
    one_opt_seed = derive_seed(cfg.master_seed, _SOLVE_TAG, agent_count, repetition)
    sigma = solve_1opt(inst, one_opt_seed).solution
    exclude: dict[int, set] = {}
    if cfg.query_mode is QueryMode.RANDOM_BASELINE:
        try:
            optimal = solve_optimal(inst, node_budget=cfg.node_budget).solution
            exclude = {x: {optimal[x]} for x in inst.variables}
        except BudgetExhausted:
            exclude = {}
    return sigma, exclude


def summarize(rows: Iterable[dict]) -> list[dict]:
    """Per-cell count, validity percentage, and mean/sd of each metric."""
    rows = list(rows)
    if not rows:
        raise EmptyInput("no rows to summarize")
    cells: dict[tuple, list[dict]] = {}
    for row in rows:
        key = (
            row["solution_mode"],
            row["query_mode"],
            row["agent_count"],
            row["q_size"],
            row["variant"],
        )
        cells.setdefault(key, []).append(row)
    out: list[dict] = []
    for key in sorted(cells):
        group = cells[key]
        n = len(group)
        summary = {
            "solution_mode": key[0],
            "query_mode": key[1],
            "agent_count": key[2],
            "q_size": key[3],
            "variant": key[4],
            "runs": n,
            "pct_valid": 100.0 * sum(r["valid"] for r in group) / n,
        }
        for metric, column in (
            ("explanation_length", "length"),
            ("nclo", "nclo"),
            ("messages", "messages"),
        ):
            values = [r[metric] for r in group]
            mean = sum(values) / n
            sd = math.sqrt(sum((v - mean) ** 2 for v in values) / n)
            summary[f"mean_{column}"] = mean
            summary[f"sd_{column}"] = sd
        out.append(summary)
    return out


def _write_csv(path: Path, columns: list[str], rows: Iterable[dict]) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


def run_experiment_to_dir(cfg: ExperimentConfig, out_dir: "str | Path") -> dict:
    """Run, then write raw.csv, summary.csv, and meta.json under ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows, skipped = run_experiment(cfg)
    _write_csv(out / "raw.csv", RAW_COLUMNS, rows)
    if rows:
        _write_csv(out / "summary.csv", SUMMARY_COLUMNS, summarize(rows))
    else:
        _write_csv(out / "summary.csv", SUMMARY_COLUMNS, [])
    meta = {
        "schema_version": SCHEMA_VERSION,
        "package_version": __version__,
        "config": config_to_json(cfg),
        "seed_scheme": {
            "instance": "[master, 0, agent_count, repetition]",
            "one_opt_start": "[master, 1, agent_count, repetition]",
            "query": "[master, 2, agent_count, q_size, repetition] -> spawn(vars, values)",
        },
        "skipped": skipped,
        "runs": len(rows),
    }
    (out / "meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return meta
