import json
from pathlib import Path

import numpy as np
import pytest

from conftest import integral_instance
from reliefopt.bench import BenchmarkPlan, resolve_instances, run_benchmark
from reliefopt.nsga2 import NsgaConfig
from reliefopt.report import emit_report, load_result, save_result, scatter_svg


class FakeClock:
    """Deterministic monotone clock for byte-reproducible benchmark output."""

    def __init__(self, step=0.001):
        self.t = 0.0
        self.step = step

    def __call__(self):
        self.t += self.step
        return self.t


def small_plan(instances, **kw):
    defaults = dict(
        instances=instances,
        algorithms=["exact", "nsga2"],
        time_limit=60.0,
        grid_n=2,
        seeds=[1],
        nsga=NsgaConfig(population=12, generations=3),
    )
    defaults.update(kw)
    return BenchmarkPlan(**defaults)


@pytest.fixture
def two_instances(rng):
    return [("a", integral_instance(rng, 2, 2, 2, 1)),
            ("b", integral_instance(rng, 2, 2, 2, 1))]


def test_bench_produces_rows_and_fronts(two_instances):
    result = run_benchmark(small_plan(two_instances), workers=1)
    assert len(result.metric_rows) == 4          # 2 instances x 2 algorithms
    assert len(result.runtime_rows) == 4
    assert set(result.fronts) == {("a", "exact", 1), ("a", "nsga2", 1),
                                  ("b", "exact", 1), ("b", "nsga2", 1)}
    assert result.exit_code == 0
    for row in result.metric_rows:
        assert not row.timed_out
        assert row.saw > 0


def test_bench_timeout_recorded_not_aborted(two_instances):
    # coarse fake clock makes any exact solve blow through the limit instantly
    clock = FakeClock(step=10.0)
    plan = small_plan(two_instances, time_limit=5.0, algorithms=["exact", "nsga2"])
    result = run_benchmark(plan, workers=1, clock=clock)
    exact_rows = [r for r in result.runtime_rows if r["algo"] == "exact"]
    assert all(r["status"] == "timeout" for r in exact_rows)
    timed = [r for r in result.metric_rows if r.algo == "exact"]
    assert all(r.timed_out for r in timed)
    nsga_rows = [r for r in result.metric_rows if r.algo == "nsga2"]
    assert all(not r.timed_out for r in nsga_rows)


def test_bench_unreadable_instance_continues(tmp_path, rng):
    good = tmp_path / "good.json"
    integral_instance(rng, 2, 2, 2, 1).save(good)
    plan = small_plan([str(tmp_path / "missing.json"), str(good)])
    result = run_benchmark(plan, workers=1)
    assert result.exit_code == 2
    assert len(result.errors) == 1
    assert any(r.instance == "good" for r in result.metric_rows)


def test_bench_deterministic_csv_bytes(tmp_path, two_instances):
    outs = []
    for run in range(2):
        result = run_benchmark(small_plan(two_instances), workers=1,
                               clock=FakeClock())
        outdir = tmp_path / f"run{run}"
        emit_report(result, outdir, formats=("csv",))
        outs.append(sorted(p for p in outdir.iterdir()))
    for p0, p1 in zip(*outs):
        assert p0.name == p1.name
        assert p0.read_bytes() == p1.read_bytes(), p0.name


def test_metrics_csv_schema(tmp_path, two_instances):
    result = run_benchmark(small_plan(two_instances), workers=1)
    emit_report(result, tmp_path, formats=("csv",))
    lines = (tmp_path / "metrics.csv").read_text().strip().split("\n")
    assert lines[0] == "algo,instance,mid,sm,dm,cpu_seconds,saw,n_points"
    assert len(lines) == 5


def test_timed_out_rows_render_dashes(tmp_path, two_instances):
    clock = FakeClock(step=10.0)
    plan = small_plan(two_instances, time_limit=5.0)
    result = run_benchmark(plan, workers=1, clock=clock)
    emit_report(result, tmp_path, formats=("csv",))
    rows = (tmp_path / "metrics.csv").read_text().strip().split("\n")[1:]
    exact = [r for r in rows if r.startswith("exact")]
    assert exact and all(",-,-,-," in r for r in exact)


def test_svg_marker_count(tmp_path):
    pts = np.array([[float(i), float(i % 3), 1.0] for i in range(9)])
    svg = scatter_svg([("exact", pts[:, :2])], "f1", "f2", "t")
    # 9 data markers plus 1 legend marker
    assert svg.count('class="pt"') == 10


def test_emit_svg_three_per_instance(tmp_path, two_instances):
    result = run_benchmark(small_plan(two_instances), workers=1)
    written = emit_report(result, tmp_path, formats=("svg",))
    svgs = [p for p in written if p.suffix == ".svg"]
    assert len(svgs) == 6      # 2 instances x 3 objective pairs
    names = {p.name for p in svgs}
    assert "scatter_a_f1_f2.svg" in names
    assert "scatter_a_f1_f3.svg" in names
    assert "scatter_a_f2_f3.svg" in names


def test_result_roundtrip(tmp_path, two_instances):
    result = run_benchmark(small_plan(two_instances), workers=1)
    save_result(result, tmp_path / "results.json")
    back = load_result(tmp_path / "results.json")
    assert len(back.metric_rows) == len(result.metric_rows)
    assert set(back.fronts) == set(result.fronts)
    a = result.fronts[("a", "exact", 1)].vectors()
    b = back.fronts[("a", "exact", 1)].vectors()
    assert np.allclose(a, b)


def test_resolve_ladder_entries():
    instances, errors = resolve_instances([{"table7": 0}])
    assert not errors
    name, inst = instances[0]
    assert name.startswith("T7-")
    assert inst.dims == (1, 1, 2, 2)


def test_empty_results_header_only(tmp_path):
    from reliefopt.bench import BenchResult
    emit_report(BenchResult(), tmp_path, formats=("csv",))
    lines = (tmp_path / "metrics.csv").read_text().strip().split("\n")
    assert lines == ["algo,instance,mid,sm,dm,cpu_seconds,saw,n_points"]
