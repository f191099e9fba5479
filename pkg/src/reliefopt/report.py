"""CSV tables and SVG scatter plots for benchmark results.

Output is deterministic: fixed column orders, repr-based float formatting in
CSVs, fixed-precision coordinates in SVGs.  Each front comparison yields one
scatter per objective pair with one marker shape per algorithm.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .bench import BenchResult
from .metrics import MetricReport

_METRIC_HEADER = ["algo", "instance", "mid", "sm", "dm", "cpu_seconds", "saw", "n_points"]
_PAIRS = [(0, 1, "f1", "f2"), (0, 2, "f1", "f3"), (1, 2, "f2", "f3")]
_MARKERS = ("circle", "rect", "diamond")


def _fmt(value: float) -> str:
    if isinstance(value, float) and np.isnan(value):
        return "-"
    return repr(value)


def write_metrics_csv(rows: list[MetricReport], path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_METRIC_HEADER)
        for r in rows:
            if r.timed_out:
                writer.writerow([r.algo, r.instance, "-", "-", "-",
                                 _fmt(r.cpu_seconds), "-", 0])
            else:
                writer.writerow([r.algo, r.instance, _fmt(r.mid), _fmt(r.sm),
                                 _fmt(r.dm), _fmt(r.cpu_seconds), _fmt(r.saw),
                                 r.n_points])


def write_runtime_csv(rows: list[dict], path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["instance", "algo", "seed", "seconds", "status"])
        for r in rows:
            writer.writerow([r["instance"], r["algo"], r["seed"],
                             _fmt(r["seconds"]), r["status"]])


def _svg_marker(shape: str, x: float, y: float, color: str) -> str:
    if shape == "circle":
        return (f'<circle class="pt" cx="{x:.2f}" cy="{y:.2f}" r="4" '
                f'fill="{color}" fill-opacity="0.75"/>')
    if shape == "rect":
        return (f'<rect class="pt" x="{x - 3.5:.2f}" y="{y - 3.5:.2f}" '
                f'width="7" height="7" fill="{color}" fill-opacity="0.75"/>')
    d = f"M {x:.2f} {y - 5:.2f} L {x + 5:.2f} {y:.2f} L {x:.2f} {y + 5:.2f} L {x - 5:.2f} {y:.2f} Z"
    return f'<path class="pt" d="{d}" fill="{color}" fill-opacity="0.75"/>'


def scatter_svg(series: list[tuple[str, np.ndarray]], xlabel: str, ylabel: str,
                title: str) -> str:
    """Deterministic SVG scatter; one marker shape per named series."""
    width, height, margin = 640, 480, 56
    pts = np.vstack([s for _, s in series if len(s)]) if series else np.empty((0, 2))
    if len(pts):
        lo = pts.min(axis=0)
        hi = pts.max(axis=0)
    else:
        lo = np.zeros(2)
        hi = np.ones(2)
    span = np.where(hi - lo > 0, hi - lo, 1.0)

    def sx(v):
        return margin + (v - lo[0]) / span[0] * (width - 2 * margin)

    def sy(v):
        return height - margin - (v - lo[1]) / span[1] * (height - 2 * margin)

    colors = ("#1f77b4", "#d62728", "#2ca02c")
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.0f}" y="20" text-anchor="middle" font-size="14">{title}</text>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>',
        f'<text x="{width / 2:.0f}" y="{height - 12}" text-anchor="middle" '
        f'font-size="12">{xlabel}</text>',
        f'<text x="16" y="{height / 2:.0f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 16 {height / 2:.0f})">{ylabel}</text>',
    ]
    for si, (name, mat) in enumerate(series):
        shape = _MARKERS[si % len(_MARKERS)]
        color = colors[si % len(colors)]
        lx = width - margin - 150
        ly = margin + 18 * si
        out.append(_svg_marker(shape, lx, ly, color))
        out.append(f'<text x="{lx + 10}" y="{ly + 4}" font-size="12">{name}</text>')
        for row in mat:
            out.append(_svg_marker(shape, sx(row[0]), sy(row[1]), color))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_report(result: BenchResult, outdir: str | Path,
                formats=("csv", "svg")) -> list[Path]:
    """Write benchmark tables and plots; returns the created files."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    if "csv" in formats:
        p = outdir / "metrics.csv"
        write_metrics_csv(result.metric_rows, p)
        written.append(p)
        p = outdir / "runtimes.csv"
        write_runtime_csv(result.runtime_rows, p)
        written.append(p)
        for (inst, algo, seed), front in sorted(result.fronts.items()):
            p = outdir / f"front_{inst}_{algo}_{seed}.csv"
            front.save_csv(p)
            written.append(p)
    if "svg" in formats:
        by_instance: dict[str, list] = {}
        for (inst, algo, seed), front in sorted(result.fronts.items()):
            by_instance.setdefault(inst, []).append((f"{algo}-{seed}", front.vectors()))
        for inst, series in sorted(by_instance.items()):
            for ix, iy, nx, ny in _PAIRS:
                proj = [(name, mat[:, (ix, iy)]) for name, mat in series]
                p = outdir / f"scatter_{inst}_{nx}_{ny}.svg"
                p.write_text(scatter_svg(proj, nx, ny, f"{inst}: {nx} vs {ny}"))
                written.append(p)
    return written


def save_result(result: BenchResult, path: str | Path) -> None:
    """Raw benchmark payload (fronts, rows) for later re-rendering."""
    doc = {
        "metric_rows": [
            {"algo": r.algo, "instance": r.instance, "mid": r.mid, "sm": r.sm,
             "dm": r.dm, "cpu_seconds": r.cpu_seconds, "saw": r.saw,
             "n_points": r.n_points, "timed_out": r.timed_out}
            for r in result.metric_rows
        ],
        "runtime_rows": result.runtime_rows,
        "fronts": {
            f"{inst}|{algo}|{seed}": front.to_records()
            for (inst, algo, seed), front in sorted(result.fronts.items())
        },
        "errors": result.errors,
    }
    Path(path).write_text(json.dumps(doc, indent=1, allow_nan=True) + "\n")


def load_result(path: str | Path) -> BenchResult:
    from .model import ObjectiveVector, Solution
    from .pareto import ParetoFront

    doc = json.loads(Path(path).read_text())
    result = BenchResult()
    for r in doc["metric_rows"]:
        result.metric_rows.append(MetricReport(
            mid=r["mid"], sm=r["sm"], dm=r["dm"], cpu_seconds=r["cpu_seconds"],
            saw=r["saw"], n_points=r["n_points"], algo=r["algo"],
            instance=r["instance"], timed_out=r["timed_out"]))
    result.runtime_rows = doc["runtime_rows"]
    for key, records in doc["fronts"].items():
        inst, algo, seed = key.rsplit("|", 2)
        points = []
        for rec in records:
            vec = ObjectiveVector(rec["f1"], rec["f2"], rec["f3"])
            opens = np.array(rec["open"], dtype=bool)
            sol = Solution(opens, np.zeros((1, 1, len(opens))),
                           np.zeros((1, len(opens), 1)))
            points.append((vec, sol))
        result.fronts[(inst, algo, int(seed))] = ParetoFront(points)
    result.errors = doc["errors"]
    return result
