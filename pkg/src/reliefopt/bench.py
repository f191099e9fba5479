"""Benchmark sweeps comparing the exact method against NSGA-II.

Each (instance, algorithm, seed) cell collects a front and its wall time;
exact runs that exceed the time limit are recorded as timed out with empty
metrics, mirroring how oversized rows are reported in the literature tables.
Metric normalization bounds are taken per instance over the union of all
fronts collected for it, and SAW is computed per instance across rows.
"""
from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .exact import BudgetExceededError, SolveTimeout, epsilon_constraint_front
from .generate import GenSpec, generate, table6_ladder, table7_ladder
from .metrics import MetricReport, NormalizationBounds, compute_report, saw_score
from .model import ProblemInstance
from .nsga2 import NsgaConfig, run_nsga2
from .pareto import ParetoFront


@dataclass
class BenchmarkPlan:
    instances: list          # (name, ProblemInstance) pairs
    algorithms: list[str] = field(default_factory=lambda: ["exact", "nsga2"])
    time_limit: float = 300.0
    grid_n: int = 10
    seeds: list[int] = field(default_factory=lambda: [1])
    nsga: NsgaConfig = field(default_factory=NsgaConfig)
    node_limit: int = 10 ** 6

    def validate(self) -> None:
        if self.time_limit <= 0:
            raise ValueError("time limit must be positive")
        for algo in self.algorithms:
            if algo not in ("exact", "nsga2"):
                raise ValueError(f"unknown algorithm {algo!r}")


@dataclass
class BenchResult:
    metric_rows: list[MetricReport] = field(default_factory=list)
    runtime_rows: list[dict] = field(default_factory=list)
    fronts: dict = field(default_factory=dict)   # (instance, algo, seed) -> ParetoFront
    errors: list[str] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return 2 if self.errors else 0


def resolve_instances(entries) -> tuple[list[tuple[str, ProblemInstance]], list[str]]:
    """Turn plan entries (paths, ladder refs, inline specs) into instances."""
    out: list[tuple[str, ProblemInstance]] = []
    errors: list[str] = []
    t7, t6 = table7_ladder(), table6_ladder()
    for entry in entries:
        try:
            if isinstance(entry, tuple):
                out.append(entry)
            elif isinstance(entry, str):
                out.append((Path(entry).stem, ProblemInstance.load(entry)))
            elif isinstance(entry, dict) and "table7" in entry:
                spec = t7[int(entry["table7"])]
                out.append((spec.name, generate(spec)))
            elif isinstance(entry, dict) and "table6" in entry:
                spec = t6[int(entry["table6"])]
                out.append((spec.name, generate(spec)))
            elif isinstance(entry, dict):
                spec = GenSpec(dims=tuple(entry["dims"]), seed=int(entry.get("seed", 0)),
                               name=entry.get("name", ""))
                out.append((spec.name or f"gen-{spec.seed}", generate(spec)))
            else:
                raise ValueError(f"bad instance entry {entry!r}")
        except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
            errors.append(f"instance {entry!r}: {exc}")
    return out, errors


def _bench_cell(inst: ProblemInstance, algo: str, seed: int, plan: BenchmarkPlan,
                clock) -> tuple[str, float, ParetoFront | None]:
    """Run one cell; returns (status, seconds, front or None)."""
    t0 = clock()
    try:
        if algo == "exact":
            front = epsilon_constraint_front(
                inst, n=plan.grid_n, node_limit=plan.node_limit,
                time_limit=plan.time_limit, clock=clock)
        else:
            cfg = NsgaConfig(population=plan.nsga.population,
                             generations=plan.nsga.generations,
                             crossover_rate=plan.nsga.crossover_rate,
                             mutation_rate=plan.nsga.mutation_rate, seed=seed)
            front, _ = run_nsga2(inst, cfg, clock=clock)
        return "ok", clock() - t0, front
    except SolveTimeout:
        return "timeout", clock() - t0, None
    except BudgetExceededError:
        return "budget-exceeded", clock() - t0, None


def _cell_worker(args):
    inst, algo, seed, plan = args
    return _bench_cell(inst, algo, seed, plan, time.perf_counter)


def worker_count(default: int = 1) -> int:
    raw = os.environ.get("RELIEFOPT_WORKERS", "")
    try:
        return max(1, int(raw)) if raw else default
    except ValueError:
        return default


def run_benchmark(plan: BenchmarkPlan, workers: int | None = None,
                  clock=time.perf_counter) -> BenchResult:
    """Run every (instance, algorithm, seed) cell and aggregate metrics.

    Timeouts never abort the sweep.  With ``workers`` > 1 the cells run in a
    process pool (wall clock only); aggregation sorts rows so the output is
    order independent.
    """
    plan.validate()
    result = BenchResult()
    instances, errors = resolve_instances(plan.instances)
    result.errors.extend(errors)
    if workers is None:
        workers = worker_count()

    cells = []
    for name, inst in instances:
        for algo in plan.algorithms:
            seeds = plan.seeds if algo == "nsga2" else [plan.seeds[0]]
            for seed in seeds:
                cells.append((name, inst, algo, seed))

    outcomes: dict[tuple, tuple[str, float, ParetoFront | None]] = {}
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for (name, _, algo, seed), res in zip(
                    cells, pool.map(_cell_worker,
                                    [(inst, algo, seed, plan) for _, inst, algo, seed in cells])):
                outcomes[(name, algo, seed)] = res
    else:
        for name, inst, algo, seed in cells:
            outcomes[(name, algo, seed)] = _bench_cell(inst, algo, seed, plan, clock)

    for name, inst in instances:
        keys = sorted(k for k in outcomes if k[0] == name)
        fronts = {}
        for key in keys:
            status, seconds, front = outcomes[key]
            result.runtime_rows.append({
                "instance": key[0], "algo": key[1], "seed": key[2],
                "seconds": seconds, "status": status,
            })
            if front is not None:
                fronts[key] = front
                result.fronts[key] = front
        reports = []
        for key in keys:
            status, seconds, front = outcomes[key]
            if front is None or len(front) == 0:
                reports.append(MetricReport(
                    mid=float("nan"), sm=float("nan"), dm=float("nan"),
                    cpu_seconds=seconds, n_points=0, sm_defined=False,
                    algo=key[1], instance=name, timed_out=True))
            else:
                reports.append(None)   # placeholder, filled below
        live = [key for key in keys if outcomes[key][2] is not None
                and len(outcomes[key][2]) > 0]
        if live:
            bounds = NormalizationBounds.from_fronts([fronts[k] for k in live])
            live_reports = []
            for pos, key in enumerate(keys):
                if key in live:
                    rep = compute_report(fronts[key], bounds, outcomes[key][1],
                                         algo=key[1], instance=name)
                    reports[pos] = rep
                    live_reports.append(rep)
            saw_score(live_reports)
        result.metric_rows.extend(r for r in reports if r is not None)

    result.runtime_rows.sort(key=lambda r: (r["instance"], r["algo"], r["seed"]))
    result.metric_rows.sort(key=lambda r: (r.instance, r.algo))
    return result
