import json
from pathlib import Path

import numpy as np
import pytest

from conftest import integral_instance
from reliefopt.cli import main


def run_cli(args):
    return main([str(a) for a in args])


def test_generate_and_solve_roundtrip(tmp_path, capsys):
    inst_path = tmp_path / "inst.json"
    assert run_cli(["generate", "--dims", 2, 2, 2, 1, "--seed", 3,
                    "-o", inst_path]) == 0
    doc = json.loads(inst_path.read_text())
    assert doc["schema_version"] == 1
    assert doc["dims"] == {"I": 2, "J": 2, "K": 2, "M": 1}

    front_path = tmp_path / "front.json"
    csv_path = tmp_path / "front.csv"
    assert run_cli(["solve-exact", inst_path, "--grid", 2,
                    "-o", front_path, "--csv", csv_path]) == 0
    records = json.loads(front_path.read_text())
    assert records and {"f1", "f2", "f3", "open", "note"} == set(records[0])
    assert csv_path.read_text().startswith("f1,f2,f3")


def test_generate_table7(tmp_path):
    out = tmp_path / "t7.json"
    assert run_cli(["generate", "--table7", 0, "-o", out]) == 0
    doc = json.loads(out.read_text())
    assert doc["dims"] == {"I": 1, "J": 1, "K": 2, "M": 2}


def test_solve_nsga2_with_log(tmp_path):
    inst_path = tmp_path / "inst.json"
    run_cli(["generate", "--dims", 2, 2, 2, 1, "--seed", 3, "-o", inst_path])
    front_path = tmp_path / "front.json"
    log_path = tmp_path / "run.jsonl"
    assert run_cli(["solve-nsga2", inst_path, "--pop", 12, "--gens", 3,
                    "--seed", 1, "-o", front_path, "--log", log_path]) == 0
    assert len(log_path.read_text().strip().split("\n")) == 3


def test_bench_and_report(tmp_path, rng):
    inst_path = tmp_path / "inst.json"
    integral_instance(rng, 2, 2, 2, 1).save(inst_path)
    plan = {
        "instances": [str(inst_path)],
        "algorithms": ["exact", "nsga2"],
        "time_limit": 60,
        "grid_n": 2,
        "seeds": [1],
        "nsga": {"population": 12, "generations": 3},
    }
    plan_path = tmp_path / "plan.json"
    plan_path.write_text(json.dumps(plan))
    outdir = tmp_path / "out"
    assert run_cli(["bench", "--plan", plan_path, "-o", outdir]) == 0
    assert (outdir / "metrics.csv").exists()
    assert (outdir / "runtimes.csv").exists()
    assert (outdir / "results.json").exists()
    assert run_cli(["report", "--results", outdir, "--format", "svg"]) == 0
    assert list(outdir.glob("scatter_*.svg"))


def test_bench_partial_failure_exit_2(tmp_path, rng):
    inst_path = tmp_path / "inst.json"
    integral_instance(rng, 2, 2, 2, 1).save(inst_path)
    plan = {
        "instances": [str(tmp_path / "nope.json"), str(inst_path)],
        "algorithms": ["nsga2"],
        "time_limit": 60,
        "grid_n": 2,
        "nsga": {"population": 12, "generations": 2},
    }
    plan_path = tmp_path / "plan.json"
    plan_path.write_text(json.dumps(plan))
    assert run_cli(["bench", "--plan", plan_path, "-o", tmp_path / "out"]) == 2


def test_fatal_error_exit_1(tmp_path):
    assert run_cli(["solve-exact", tmp_path / "missing.json",
                    "-o", tmp_path / "x.json"]) == 1


def test_tune_smoke(tmp_path, rng, capsys):
    inst_path = tmp_path / "inst.json"
    integral_instance(rng, 2, 2, 2, 1).save(inst_path)
    code = run_cli(["tune", "--instances", inst_path, "--design", "l9",
                    "--reps", 1, "--gens", 2])
    assert code == 0
    out = capsys.readouterr().out
    assert "tuned config" in out
    assert "main effects" in out
