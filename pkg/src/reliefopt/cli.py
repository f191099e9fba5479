"""Command-line experiment runner.

Subcommands: generate, solve-exact, solve-nsga2, tune, bench, report.
Exit codes: 0 success, 2 partial per-row failures, 1 fatal errors.
Set RELIEFOPT_WORKERS to run benchmark cells in parallel.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import BenchmarkPlan, BenchResult, resolve_instances, run_benchmark, worker_count
from .exact import epsilon_constraint_front
from .generate import GenSpec, generate, table6_ladder, table7_ladder
from .model import ProblemInstance, validate_instance
from .nsga2 import NsgaConfig, run_nsga2, write_run_log
from .report import emit_report, load_result, save_result
from .taguchi import TaguchiDesign, taguchi_tune


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reliefopt",
        description="Relief-supply location-distribution solvers and benchmarks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a random instance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dims", type=int, nargs=4, metavar=("I", "J", "K", "M"))
    p.add_argument("--table7", type=int, metavar="ROW",
                   help="ladder row index (0-based) of the 5-spec ladder")
    p.add_argument("--table6", type=int, metavar="ROW",
                   help="ladder row index (0-based) of the 22-spec ladder")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("solve-exact", help="epsilon-constraint Pareto front")
    p.add_argument("instance")
    p.add_argument("--grid", type=int, default=10)
    p.add_argument("--time-limit", type=float, default=None)
    p.add_argument("--node-limit", type=int, default=10 ** 6)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--csv", default=None)

    p = sub.add_parser("solve-nsga2", help="NSGA-II approximate front")
    p.add_argument("instance")
    p.add_argument("--pop", type=int, default=150)
    p.add_argument("--gens", type=int, default=50)
    p.add_argument("--cx", type=float, default=0.9)
    p.add_argument("--mut", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--csv", default=None)
    p.add_argument("--log", default=None, help="per-generation JSONL run log")

    p = sub.add_parser("tune", help="Taguchi parameter tuning")
    p.add_argument("--instances", nargs="+", required=True)
    p.add_argument("--design", choices=["full", "l9"], default="full")
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--gens", type=int, default=50)

    p = sub.add_parser("bench", help="run a benchmark plan")
    p.add_argument("--plan", required=True)
    p.add_argument("-o", "--outdir", required=True)
    p.add_argument("--workers", type=int, default=None)

    p = sub.add_parser("report", help="re-render tables/plots from bench output")
    p.add_argument("--results", required=True, help="bench output directory")
    p.add_argument("--format", choices=["csv", "svg"], default="csv")
    return parser


def _cmd_generate(args) -> int:
    if args.table7 is not None:
        spec = table7_ladder()[args.table7]
    elif args.table6 is not None:
        spec = table6_ladder()[args.table6]
    elif args.dims:
        spec = GenSpec(dims=tuple(args.dims), seed=args.seed)
    else:
        print("generate: need --dims, --table7 or --table6", file=sys.stderr)
        return 1
    if args.seed and (args.table7 is not None or args.table6 is not None):
        spec = GenSpec(dims=spec.dims, ranges=spec.ranges, seed=args.seed,
                       name=spec.name)
    inst = generate(spec)
    report = validate_instance(inst)
    if not report.feasible:
        print(f"generated instance failed validation:\n{report}", file=sys.stderr)
        return 1
    inst.save(args.output)
    print(f"wrote {args.output}")
    return 0


def _cmd_solve_exact(args) -> int:
    inst = ProblemInstance.load(args.instance)
    front = epsilon_constraint_front(inst, n=args.grid,
                                     node_limit=args.node_limit,
                                     time_limit=args.time_limit)
    front.save_json(args.output, note="epsilon-constraint")
    if args.csv:
        front.save_csv(args.csv)
    print(f"{len(front)} Pareto points -> {args.output}")
    return 0


def _cmd_solve_nsga2(args) -> int:
    inst = ProblemInstance.load(args.instance)
    cfg = NsgaConfig(population=args.pop, generations=args.gens,
                     crossover_rate=args.cx, mutation_rate=args.mut,
                     seed=args.seed)
    front, stats = run_nsga2(inst, cfg)
    front.save_json(args.output, note="nsga2")
    if args.csv:
        front.save_csv(args.csv)
    if args.log:
        write_run_log(stats, args.log)
    print(f"{len(front)} Pareto points in {stats.wall_seconds:.2f}s "
          f"({stats.evaluations} evaluations) -> {args.output}")
    return 0


def _cmd_tune(args) -> int:
    instances, errors = resolve_instances(list(args.instances))
    for err in errors:
        print(err, file=sys.stderr)
    if not instances:
        return 1
    design = TaguchiDesign(design="L9" if args.design == "l9" else "full",
                           replications=args.reps)
    base = NsgaConfig(generations=args.gens)
    cfg, effects = taguchi_tune(design, [inst for _, inst in instances],
                                base_config=base, seed=args.seed)
    print("main effects (mean S/N per level):")
    for name, means in effects.items():
        print(f"  {name}: " + ", ".join(f"{m:.3f}" for m in means))
    print(f"tuned config: population={cfg.population} "
          f"crossover={cfg.crossover_rate} mutation={cfg.mutation_rate} "
          f"generations={cfg.generations}")
    return 2 if errors else 0


def _load_plan(path: str) -> BenchmarkPlan:
    doc = json.loads(Path(path).read_text())
    nsga = NsgaConfig(**doc.get("nsga", {}))
    return BenchmarkPlan(
        instances=doc["instances"],
        algorithms=doc.get("algorithms", ["exact", "nsga2"]),
        time_limit=float(doc.get("time_limit", 300.0)),
        grid_n=int(doc.get("grid_n", 10)),
        seeds=[int(s) for s in doc.get("seeds", [1])],
        nsga=nsga,
        node_limit=int(doc.get("node_limit", 10 ** 6)),
    )


def _cmd_bench(args) -> int:
    plan = _load_plan(args.plan)
    workers = args.workers if args.workers else worker_count()
    result = run_benchmark(plan, workers=workers)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    save_result(result, outdir / "results.json")
    emit_report(result, outdir, formats=("csv",))
    for err in result.errors:
        print(f"error: {err}", file=sys.stderr)
    print(f"bench complete: {len(result.metric_rows)} metric rows -> {outdir}")
    return result.exit_code


def _cmd_report(args) -> int:
    outdir = Path(args.results)
    result = load_result(outdir / "results.json")
    written = emit_report(result, outdir, formats=(args.format,))
    print(f"wrote {len(written)} file(s) to {outdir}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "generate": _cmd_generate,
        "solve-exact": _cmd_solve_exact,
        "solve-nsga2": _cmd_solve_nsga2,
        "tune": _cmd_tune,
        "bench": _cmd_bench,
        "report": _cmd_report,
    }
    try:
        return handlers[args.command](args)
    except (OSError, ValueError, KeyError) as exc:
        print(f"fatal: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
