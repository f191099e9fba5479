"""Canonical deterministic location-distribution model.

A problem instance couples supply points i, candidate distribution centers j,
affected points k and vehicle classes m.  A solution opens a subset of centers
and routes goods over inbound arcs (m,i,j) and outbound arcs (m,j,k).  Three
objectives are evaluated:

    f1  shortage cost        sum_k penalty * unmet demand
    f2  money cost           inbound + outbound transport + center setup
    f3  response time        sum of arc times over arcs that carry flow

Flow volume does not affect f3; only arc activation does.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._kernels import evaluate_flows

SCHEMA_VERSION = 1

#: a flow below this many goods units does not activate an arc for f3
ACTIVATION_TOL = 1e-9

#: default feasibility tolerance for constraint checks
FEAS_TOL = 1e-6


class ShapeError(ValueError):
    """Raised when solution array dimensions do not match the instance."""


@dataclass(frozen=True)
class ProblemInstance:
    """Immutable container for all sets and parameters of the model.

    Array shapes (I = supply points, J = centers, K = affected points,
    M = vehicle classes):

    ==================  =========
    setup_cost          (J,)
    shortage_penalty    (K,)
    demand              (M, K)
    supply              (M, I)
    cost_in             (I, J)
    cost_out            (J, K)
    cap_in              (I, J)
    cap_out             (J, K)
    vehicle_capacity    (M,)
    time_in             (M, I, J)
    time_out            (M, J, K)
    dist_out            (J, K)
    coverage_radius     (M,)
    speed               (M,)
    ==================  =========
    """

    num_supply: int
    num_centers: int
    num_affected: int
    num_vehicles: int
    setup_cost: np.ndarray
    shortage_penalty: np.ndarray
    demand: np.ndarray
    supply: np.ndarray
    cost_in: np.ndarray
    cost_out: np.ndarray
    cap_in: np.ndarray
    cap_out: np.ndarray
    vehicle_capacity: np.ndarray
    time_in: np.ndarray
    time_out: np.ndarray
    dist_out: np.ndarray
    coverage_radius: np.ndarray
    speed: np.ndarray
    max_open_centers: int
    seed: int | None = None

    def __post_init__(self):
        for name in _ARRAY_FIELDS:
            arr = np.ascontiguousarray(np.asarray(getattr(self, name), dtype=float))
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def dims(self) -> tuple[int, int, int, int]:
        return (self.num_supply, self.num_centers, self.num_affected, self.num_vehicles)

    def admissible_mask(self) -> np.ndarray:
        """Boolean (M, J, K) mask of outbound arcs within coverage radius."""
        return self.dist_out[None, :, :] <= self.coverage_radius[:, None, None]

    def total_shortage_cost(self) -> float:
        """f1 of the zero solution: every unit of demand unmet."""
        return float(np.sum(self.shortage_penalty[None, :] * self.demand))

    def to_dict(self) -> dict:
        i, j, k, m = self.dims
        out = {
            "schema_version": SCHEMA_VERSION,
            "dims": {"I": i, "J": j, "K": k, "M": m},
        }
        for name in _ARRAY_FIELDS:
            out[name] = getattr(self, name).tolist()
        out["max_open_centers"] = self.max_open_centers
        if self.seed is not None:
            out["seed"] = self.seed
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ProblemInstance":
        dims = data["dims"]
        kwargs = {name: np.asarray(data[name], dtype=float) for name in _ARRAY_FIELDS}
        return cls(
            num_supply=int(dims["I"]),
            num_centers=int(dims["J"]),
            num_affected=int(dims["K"]),
            num_vehicles=int(dims["M"]),
            max_open_centers=int(data["max_open_centers"]),
            seed=data.get("seed"),
            **kwargs,
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "ProblemInstance":
        return cls.from_dict(json.loads(Path(path).read_text()))


_ARRAY_FIELDS = (
    "setup_cost", "shortage_penalty", "demand", "supply", "cost_in", "cost_out",
    "cap_in", "cap_out", "vehicle_capacity", "time_in", "time_out", "dist_out",
    "coverage_radius", "speed",
)

_EXPECTED_SHAPES = {
    "setup_cost": ("J",),
    "shortage_penalty": ("K",),
    "demand": ("M", "K"),
    "supply": ("M", "I"),
    "cost_in": ("I", "J"),
    "cost_out": ("J", "K"),
    "cap_in": ("I", "J"),
    "cap_out": ("J", "K"),
    "vehicle_capacity": ("M",),
    "time_in": ("M", "I", "J"),
    "time_out": ("M", "J", "K"),
    "dist_out": ("J", "K"),
    "coverage_radius": ("M",),
    "speed": ("M",),
}


@dataclass(frozen=True)
class Solution:
    """Open-center vector plus vehicle-indexed flow tensors.

    ``open`` has shape (J,), ``flow_in`` (M, I, J) and ``flow_out`` (M, J, K).
    """

    open: np.ndarray
    flow_in: np.ndarray
    flow_out: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "open", np.ascontiguousarray(np.asarray(self.open, dtype=bool)))
        for name in ("flow_in", "flow_out"):
            arr = np.ascontiguousarray(np.asarray(getattr(self, name), dtype=float))
            object.__setattr__(self, name, arr)

    @classmethod
    def zero(cls, inst: ProblemInstance) -> "Solution":
        i, j, k, m = inst.dims
        return cls(np.zeros(j, dtype=bool), np.zeros((m, i, j)), np.zeros((m, j, k)))

    def copy(self) -> "Solution":
        return Solution(self.open.copy(), self.flow_in.copy(), self.flow_out.copy())


@dataclass(frozen=True)
class ObjectiveVector:
    f1: float
    f2: float
    f3: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.f1, self.f2, self.f3)

    def as_array(self) -> np.ndarray:
        return np.array([self.f1, self.f2, self.f3])


@dataclass
class FeasibilityReport:
    """Outcome of a validation or feasibility check.

    ``violations`` holds (constraint id, index tuple, slack magnitude) triples;
    the report is feasible exactly when the list is empty.
    """

    violations: list[tuple[str, tuple, float]] = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return not self.violations

    def add(self, constraint: str, index: tuple, magnitude: float) -> None:
        self.violations.append((constraint, index, float(magnitude)))

    def __str__(self) -> str:
        if self.feasible:
            return "feasible"
        lines = [f"{len(self.violations)} violation(s):"]
        lines += [f"  {c} at {i}: {m:g}" for c, i, m in self.violations[:20]]
        if len(self.violations) > 20:
            lines.append(f"  ... and {len(self.violations) - 20} more")
        return "\n".join(lines)


def validate_instance(inst: ProblemInstance) -> FeasibilityReport:
    """Check that an instance is well formed.

    Reports every dimension mismatch, negative parameter and NaN in-band;
    nothing raises.
    """
    rep = FeasibilityReport()
    sizes = {"I": inst.num_supply, "J": inst.num_centers,
             "K": inst.num_affected, "M": inst.num_vehicles}
    for dim, n in sizes.items():
        if n < 1:
            rep.add(f"dim:{dim}", (n,), abs(n - 1))
    if inst.max_open_centers < 1:
        rep.add("sign:max_open_centers", (), abs(inst.max_open_centers - 1))
    for name in _ARRAY_FIELDS:
        arr = getattr(inst, name)
        expected = tuple(sizes[d] for d in _EXPECTED_SHAPES[name])
        if arr.shape != expected:
            rep.add(f"dim:{name}", arr.shape, 0.0)
            continue
        bad = np.isnan(arr)
        for idx in np.argwhere(bad):
            rep.add(f"nan:{name}", tuple(int(x) for x in idx), 0.0)
        neg = arr < 0
        for idx in np.argwhere(neg):
            rep.add(f"sign:{name}", tuple(int(x) for x in idx), abs(float(arr[tuple(idx)])))
    return rep


def _require_shapes(inst: ProblemInstance, sol: Solution) -> None:
    i, j, k, m = inst.dims
    if sol.open.shape != (j,) or sol.flow_in.shape != (m, i, j) or sol.flow_out.shape != (m, j, k):
        raise ShapeError(
            f"solution shapes {sol.open.shape}/{sol.flow_in.shape}/{sol.flow_out.shape} "
            f"do not match instance dims I={i} J={j} K={k} M={m}"
        )


def evaluate_objectives(inst: ProblemInstance, sol: Solution,
                        tol: float = ACTIVATION_TOL) -> ObjectiveVector:
    """Evaluate the three objectives of a candidate solution.

    Shortage is clamped at zero so over-delivery never earns negative cost.
    An arc contributes its time to f3 when its flow exceeds ``tol``.
    """
    _require_shapes(inst, sol)
    f1, f2, f3 = evaluate_flows(
        np.ascontiguousarray(sol.open, dtype=np.uint8),
        sol.flow_in, sol.flow_out,
        inst.setup_cost, inst.shortage_penalty, inst.demand,
        inst.cost_in, inst.cost_out, inst.time_in, inst.time_out, tol,
    )
    return ObjectiveVector(f1, f2, f3)


def check_feasibility(inst: ProblemInstance, sol: Solution,
                      tol: float = FEAS_TOL) -> FeasibilityReport:
    """Check every model constraint of a candidate solution within ``tol``.

    Constraint ids follow the reconciled equation numbering: Eq4 vehicle
    capacity, Eq6 coverage, Eq12 conservation, Eq13 supply, Eq14 demand
    ceiling, Eq15/Eq16 arc capacities gated by openness, Eq17/Eq18
    non-negativity, Eq20 facility budget.
    """
    _require_shapes(inst, sol)
    rep = FeasibilityReport()
    q, y = sol.flow_in, sol.flow_out
    open_f = sol.open.astype(float)

    for idx in np.argwhere(~np.isfinite(q) | (q < -tol)):
        rep.add("Eq17", tuple(int(x) for x in idx), abs(float(q[tuple(idx)])))
    for idx in np.argwhere(~np.isfinite(y) | (y < -tol)):
        rep.add("Eq18", tuple(int(x) for x in idx), abs(float(y[tuple(idx)])))

    # per-(m,j) flow conservation
    imbalance = q.sum(axis=1) - y.sum(axis=2)
    for idx in np.argwhere(np.abs(imbalance) > tol):
        rep.add("Eq12", tuple(int(x) for x in idx), abs(float(imbalance[tuple(idx)])))

    # per-(m,i) supply limit
    over = q.sum(axis=2) - inst.supply
    for idx in np.argwhere(over > tol):
        rep.add("Eq13", tuple(int(x) for x in idx), float(over[tuple(idx)]))

    # per-(m,k) demand ceiling
    over = y.sum(axis=1) - inst.demand
    for idx in np.argwhere(over > tol):
        rep.add("Eq14", tuple(int(x) for x in idx), float(over[tuple(idx)]))

    # arc capacities gated by openness
    over = q - inst.cap_in[None, :, :] * open_f[None, None, :]
    for idx in np.argwhere(over > tol):
        rep.add("Eq15", tuple(int(x) for x in idx), float(over[tuple(idx)]))
    over = y - inst.cap_out[None, :, :] * open_f[None, :, None]
    for idx in np.argwhere(over > tol):
        rep.add("Eq16", tuple(int(x) for x in idx), float(over[tuple(idx)]))

    # per-m vehicle capacity on outbound volume
    over = y.sum(axis=(1, 2)) - inst.vehicle_capacity
    for idx in np.argwhere(over > tol):
        rep.add("Eq4", tuple(int(x) for x in idx), float(over[tuple(idx)]))

    # coverage admissibility
    bad = (y > tol) & ~inst.admissible_mask()
    for idx in np.argwhere(bad):
        rep.add("Eq6", tuple(int(x) for x in idx), float(y[tuple(idx)]))

    n_open = int(sol.open.sum())
    if n_open > inst.max_open_centers:
        rep.add("Eq20", (), n_open - inst.max_open_centers)

    return rep
