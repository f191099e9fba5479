"""Pareto front container and non-dominance filtering shared by solvers."""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .model import ObjectiveVector, Solution


def dominates(a: ObjectiveVector | tuple, b: ObjectiveVector | tuple) -> bool:
    """True iff a is no worse than b in every objective and better in one."""
    if isinstance(a, ObjectiveVector):
        a = a.as_tuple()
    if isinstance(b, ObjectiveVector):
        b = b.as_tuple()
    return all(x <= y for x, y in zip(a, b)) and any(x < y for x, y in zip(a, b))


def nondominated_indices(vectors: np.ndarray) -> list[int]:
    """Indices of the non-dominated rows of an (n, d) objective matrix.

    Equal duplicate rows are all kept; callers deduplicate separately.
    """
    vectors = np.asarray(vectors, dtype=float)
    n = vectors.shape[0]
    if n == 0:
        return []
    order = np.lexsort(vectors.T[::-1])   # ascending by (col0, col1, ...)
    kept_rows: list[np.ndarray] = []
    kept_idx: list[int] = []
    for pos in order:
        v = vectors[pos]
        dominated = False
        if kept_rows:
            kmat = np.array(kept_rows)
            dominated = bool(np.any(np.all(kmat <= v, axis=1) & np.any(kmat < v, axis=1)))
        if not dominated:
            kept_rows.append(v)
            kept_idx.append(int(pos))
    return sorted(kept_idx)


@dataclass
class ParetoFront:
    """Mutually non-dominated (objective vector, solution) pairs.

    Points are stored sorted lexicographically by (f1, f2, f3) and with equal
    vectors deduplicated, so construction from the same candidate multiset is
    deterministic.
    """

    points: list[tuple[ObjectiveVector, Solution]] = field(default_factory=list)

    @classmethod
    def from_candidates(cls, candidates) -> "ParetoFront":
        items = [(v.as_tuple() if isinstance(v, ObjectiveVector) else tuple(v), s)
                 for v, s in candidates]
        if not items:
            return cls([])
        items.sort(key=lambda p: p[0])
        dedup = [items[0]]
        for vec, sol in items[1:]:
            if vec != dedup[-1][0]:
                dedup.append((vec, sol))
        mat = np.array([vec for vec, _ in dedup])
        keep = nondominated_indices(mat)
        return cls([(ObjectiveVector(*dedup[i][0]), dedup[i][1]) for i in keep])

    def __len__(self) -> int:
        return len(self.points)

    def vectors(self) -> np.ndarray:
        if not self.points:
            return np.empty((0, 3))
        return np.array([v.as_tuple() for v, _ in self.points])

    def vector_set(self, decimals: int = 9) -> set[tuple]:
        return {tuple(np.round(v.as_tuple(), decimals)) for v, _ in self.points}

    def to_records(self, note: str = "") -> list[dict]:
        return [
            {"f1": v.f1, "f2": v.f2, "f3": v.f3,
             "open": [int(b) for b in s.open], "note": note}
            for v, s in self.points
        ]

    def save_json(self, path: str | Path, note: str = "") -> None:
        Path(path).write_text(json.dumps(self.to_records(note), indent=1) + "\n")

    def save_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["f1", "f2", "f3"])
            for v, _ in self.points:
                writer.writerow([repr(v.f1), repr(v.f2), repr(v.f3)])
