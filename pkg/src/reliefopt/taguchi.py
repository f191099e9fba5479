"""Taguchi parameter tuning driven by signal-to-noise ratios.

Each design row is a candidate parameter combination; its response (smaller
is better) is aggregated over training instances and replications into
S/N = -10 log10(mean(response^2)), and each factor takes the level with the
highest mean S/N across the rows containing it.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .metrics import NormalizationBounds, compute_report, saw_score
from .nsga2 import NsgaConfig, run_nsga2

#: factor ranges used for tuning (three levels each)
DEFAULT_FACTORS: list[tuple[str, list[float]]] = [
    ("crossover_rate", [0.9, 0.75, 0.65]),
    ("mutation_rate", [0.30, 0.20, 0.10]),
    ("population", [150, 100, 50]),
]

#: standard L9 orthogonal array, 1-based levels, first three columns
_L9 = [
    (1, 1, 1), (1, 2, 2), (1, 3, 3),
    (2, 1, 2), (2, 2, 3), (2, 3, 1),
    (3, 1, 3), (3, 2, 1), (3, 3, 2),
]


@dataclass
class TaguchiDesign:
    factors: list[tuple[str, list]] = field(
        default_factory=lambda: [(n, list(v)) for n, v in DEFAULT_FACTORS])
    design: str = "full"          # "full" factorial or "L9"
    replications: int = 3

    def validate(self) -> None:
        if not self.factors:
            raise ValueError("empty design")
        for name, levels in self.factors:
            if len(levels) != 3:
                raise ValueError(f"factor {name} must have exactly 3 levels")
        if self.design == "L9" and len(self.factors) > 4:
            raise ValueError("L9 supports at most 4 factors")
        if self.replications < 1:
            raise ValueError("replications must be >= 1")

    def rows(self) -> list[dict]:
        self.validate()
        names = [n for n, _ in self.factors]
        levels = [v for _, v in self.factors]
        combos: list[tuple[int, ...]]
        if self.design == "full":
            combos = [()]
            for k in range(len(names)):
                combos = [c + (lv,) for c in combos for lv in (1, 2, 3)]
        elif self.design == "L9":
            combos = [row[:len(names)] for row in _L9]
        else:
            raise ValueError(f"unknown design {self.design!r}")
        return [{names[f]: levels[f][c[f] - 1] for f in range(len(names))}
                for c in combos]


def snr(responses) -> float:
    """Smaller-is-better signal-to-noise ratio: -10 log10(mean(y^2))."""
    arr = np.asarray(responses, dtype=float)
    mean_sq = float(np.mean(arr * arr))
    if mean_sq <= 0.0:
        return float("inf")
    return -10.0 * np.log10(mean_sq)


def _config_for(row: dict, base: NsgaConfig, seed: int) -> NsgaConfig:
    kwargs = dict(row)
    if "population" in kwargs:
        kwargs["population"] = int(kwargs["population"])
    return replace(base, seed=seed, **kwargs)


def taguchi_tune(design: TaguchiDesign, instances, *,
                 base_config: NsgaConfig | None = None, seed: int = 0,
                 evaluator=None, clock=time.perf_counter):
    """Pick the best level per factor by mean S/N over the design rows.

    Returns (tuned NsgaConfig, main-effects table).  The default response of
    a row is one minus its SAW score over (MID, SM, DM) computed against the
    other rows on the same instance and replication seed, so lower is better.
    ``evaluator(config, instance, rep_seed) -> float`` overrides the response
    (used with synthetic landscapes).
    """
    design.validate()
    if not evaluator and not instances:
        raise ValueError("at least one training instance required")
    base = base_config or NsgaConfig()
    rows = design.rows()
    responses: list[list[float]] = [[] for _ in rows]

    instances = list(instances) if instances else [None]
    for inst_idx, inst in enumerate(instances):
        for rep in range(design.replications):
            rep_seed = seed + 9973 * inst_idx + 101 * rep
            if evaluator is not None:
                for ri, row in enumerate(rows):
                    cfg = _config_for(row, base, rep_seed)
                    responses[ri].append(float(evaluator(cfg, inst, rep_seed)))
                continue
            fronts = []
            times = []
            for row in rows:
                cfg = _config_for(row, base, rep_seed)
                front, stats = run_nsga2(inst, cfg, clock=clock)
                fronts.append(front)
                times.append(stats.wall_seconds)
            bounds = NormalizationBounds.from_fronts(fronts)
            reports = [compute_report(f, bounds, t) for f, t in zip(fronts, times)]
            scores = saw_score(reports)
            for ri, s in enumerate(scores):
                responses[ri].append(1.0 - s)

    row_snr = np.array([snr(r) for r in responses])
    effects: dict[str, list[float]] = {}
    chosen: dict[str, object] = {}
    for f, (name, levels) in enumerate(design.factors):
        means = []
        for li, level in enumerate(levels):
            sel = [ri for ri, row in enumerate(rows) if row[name] == level]
            means.append(float(np.mean(row_snr[sel])) if sel else -np.inf)
        effects[name] = means
        chosen[name] = levels[int(np.argmax(means))]
    tuned = _config_for(chosen, base, base.seed)
    return tuned, effects
