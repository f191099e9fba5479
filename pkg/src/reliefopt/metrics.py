"""Pareto front quality metrics and SAW aggregation.

All metrics operate in objective space normalized by bounds taken over the
union of the fronts being compared, which keeps cross-algorithm scores fair.
MID and SM are lower-better, DM is higher-better; SAW converts the three
(plus optionally CPU time) into a single higher-better score.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .pareto import ParetoFront, dominates  # noqa: F401  (dominates re-exported)


@dataclass
class NormalizationBounds:
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        self.lo = np.asarray(self.lo, dtype=float)
        self.hi = np.asarray(self.hi, dtype=float)
        if np.any(self.hi < self.lo):
            raise ValueError("bounds require hi >= lo per objective")

    @classmethod
    def from_fronts(cls, fronts) -> "NormalizationBounds":
        mats = [f.vectors() if isinstance(f, ParetoFront) else np.asarray(f, dtype=float)
                for f in fronts]
        mats = [m for m in mats if m.size]
        if not mats:
            raise ValueError("empty")
        stacked = np.vstack(mats)
        return cls(stacked.min(axis=0), stacked.max(axis=0))

    def normalize(self, vectors: np.ndarray) -> np.ndarray:
        span = self.hi - self.lo
        safe = np.where(span > 0, span, 1.0)
        out = (np.asarray(vectors, dtype=float) - self.lo) / safe
        return np.where(span > 0, out, 0.0)


def _as_matrix(front) -> np.ndarray:
    if isinstance(front, ParetoFront):
        return front.vectors()
    return np.atleast_2d(np.asarray(front, dtype=float))


def mid(front, bounds: NormalizationBounds, ideal=None) -> float:
    """Mean normalized Euclidean distance from the ideal point (lower better).

    ``ideal`` defaults to the per-objective minimum over the compared fronts
    (the bounds' lower corner); pass ``"origin"`` to measure from zero.
    """
    mat = _as_matrix(front)
    if mat.shape[0] == 0:
        raise ValueError("empty")
    if ideal is None:
        ideal_arr = bounds.lo
    elif isinstance(ideal, str) and ideal == "origin":
        ideal_arr = np.zeros(mat.shape[1])
    else:
        ideal_arr = np.asarray(ideal, dtype=float)
    span = bounds.hi - bounds.lo
    safe = np.where(span > 0, span, 1.0)
    dev = (mat - ideal_arr) / safe
    dev = np.where(span > 0, dev, 0.0)
    return float(np.mean(np.linalg.norm(dev, axis=1)))


def spacing(front, bounds: NormalizationBounds | None = None) -> float:
    """Dispersion of nearest-neighbor gaps along the front (lower better).

    Defined for fronts of three or more points; smaller fronts score 0 (use
    ``spacing_defined`` to tell the two cases apart).
    """
    mat = _as_matrix(front)
    n = mat.shape[0]
    if n < 3:
        return 0.0
    if bounds is not None:
        mat = bounds.normalize(mat)
    diff = mat[:, None, :] - mat[None, :, :]
    dist = np.linalg.norm(diff, axis=2)
    np.fill_diagonal(dist, np.inf)
    d = dist.min(axis=1)
    dbar = float(d.mean())
    if dbar <= 0:
        return 0.0
    return float(np.abs(dbar - d).sum() / ((n - 1) * dbar))


def spacing_defined(n_points: int) -> bool:
    return n_points >= 3


def diversification(front, bounds: NormalizationBounds) -> float:
    """Normalized extent of the front (higher better)."""
    mat = _as_matrix(front)
    if mat.shape[0] == 0:
        raise ValueError("empty")
    span = bounds.hi - bounds.lo
    safe = np.where(span > 0, span, 1.0)
    ranges = (mat.max(axis=0) - mat.min(axis=0)) / safe
    ranges = np.where(span > 0, ranges, 0.0)
    return float(np.linalg.norm(ranges))


@dataclass
class MetricReport:
    mid: float
    sm: float
    dm: float
    cpu_seconds: float
    saw: float = 0.0
    n_points: int = 1
    sm_defined: bool = True
    algo: str = ""
    instance: str = ""
    timed_out: bool = False


def compute_report(front, bounds: NormalizationBounds, cpu_seconds: float,
                   ideal=None, algo: str = "", instance: str = "") -> MetricReport:
    mat = _as_matrix(front)
    n = mat.shape[0]
    return MetricReport(
        mid=mid(mat, bounds, ideal),
        sm=spacing(mat, bounds),
        dm=diversification(mat, bounds),
        cpu_seconds=float(cpu_seconds),
        n_points=n,
        sm_defined=spacing_defined(n),
        algo=algo,
        instance=instance,
    )


_LOWER_BETTER = ("mid", "sm", "cpu_seconds")


def saw_score(reports: list[MetricReport], weights: dict[str, float] | None = None,
              include_time: bool = False) -> list[float]:
    """Simple additive weighting across compared reports (higher better).

    Lower-better metrics are normalized benefit-style as column-min / value,
    DM as value / column-max; a constant-zero column contributes its weight
    equally to every report.  Scores are written back into each report.
    """
    if not reports:
        raise ValueError("empty")
    names = ["mid", "sm", "dm"] + (["cpu_seconds"] if include_time else [])
    if weights is None:
        weights = {name: 1.0 / len(names) for name in names}
    scores = np.zeros(len(reports))
    for name in names:
        w = weights.get(name, 0.0)
        col = np.array([getattr(r, name) for r in reports], dtype=float)
        if name in _LOWER_BETTER:
            cmin = col.min()
            with np.errstate(divide="ignore", invalid="ignore"):
                norm = np.where(col > 0, cmin / np.where(col > 0, col, 1.0), 1.0)
        else:
            cmax = col.max()
            norm = col / cmax if cmax > 0 else np.ones_like(col)
        scores += w * norm
    for r, s in zip(reports, scores):
        r.saw = float(s)
    return [float(s) for s in scores]
