"""Trapezoidal-fuzzy parameters and the robust-possibilistic transformation.

Ambiguous costs, demands, supplies and capacities are 4-point trapezoids.
The crisp counterpart prices costs at their expected value, turns fuzzy
right-hand sides into chance-constrained convex combinations of their outer
points, and augments the cost objective with an optimality-robustness term
(worst minus best cost spread) plus feasibility-violation penalties.  The
bilinear products (confidence level x open decision) of the level-optimizing
variant are linearized by an exact envelope for binary variables.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .model import ProblemInstance, Solution

_LEVEL_LO = 0.5
_LEVEL_HI = 1.0


class NotLinearizableError(ValueError):
    """Raised for products that are not (binary x continuous)."""


@dataclass(frozen=True)
class TrapezoidalFuzzyNumber:
    """Possibility distribution given by four ordered points."""

    p1: float
    p2: float
    p3: float
    p4: float

    def __post_init__(self):
        pts = (self.p1, self.p2, self.p3, self.p4)
        if not all(np.isfinite(pts)):
            raise ValueError("trapezoid points must be finite")
        if not (self.p1 <= self.p2 <= self.p3 <= self.p4):
            raise ValueError(f"trapezoid points must be ordered, got {pts}")

    @classmethod
    def crisp(cls, v: float) -> "TrapezoidalFuzzyNumber":
        return cls(v, v, v, v)

    @classmethod
    def two_point(cls, low: float, high: float) -> "TrapezoidalFuzzyNumber":
        return cls(low, low, high, high)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p1, self.p2, self.p3, self.p4)


def expected_value(t: TrapezoidalFuzzyNumber) -> float:
    """Expected value of a trapezoid: the mean of its four points."""
    return (t.p1 + t.p2 + t.p3 + t.p4) / 4.0


@dataclass(frozen=True)
class RppWeights:
    """Robustness weight, violation penalty weights and confidence levels.

    Weights must be non-negative; confidence levels live in [0.5, 1].  The
    second demand/supply pairs mirror the duplicated penalty terms of the
    crisp objective and default to zero weight.
    """

    robustness_weight: float = 0.0
    supply_weight: float = 0.0
    demand_weight: float = 0.0
    cap_in_weight: float = 0.0
    cap_out_weight: float = 0.0
    demand_weight_2: float = 0.0
    supply_weight_2: float = 0.0
    supply_level: float = 0.5
    demand_level: float = 0.5
    cap_in_level: float = 0.5
    cap_out_level: float = 0.5
    demand_level_2: float = 0.5
    supply_level_2: float = 0.5

    def validate(self) -> None:
        for name in ("robustness_weight", "supply_weight", "demand_weight",
                     "cap_in_weight", "cap_out_weight", "demand_weight_2",
                     "supply_weight_2"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        for name in ("supply_level", "demand_level", "cap_in_level",
                     "cap_out_level", "demand_level_2", "supply_level_2"):
            v = getattr(self, name)
            if not (_LEVEL_LO <= v <= _LEVEL_HI):
                raise ValueError(f"{name} must be in [0.5, 1], got {v}")

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}

    @classmethod
    def from_dict(cls, d: dict) -> "RppWeights":
        w = cls(**d)
        w.validate()
        return w


#: instance fields that become 4-point trapezoids, with array shape suffix
_FUZZY_FIELDS = ("setup_cost", "shortage_penalty", "demand", "supply",
                 "cost_in", "cost_out", "cap_in", "cap_out")
_CRISP_FIELDS = ("vehicle_capacity", "time_in", "time_out", "dist_out",
                 "coverage_radius", "speed")


@dataclass(frozen=True)
class FuzzyInstance:
    """ProblemInstance skeleton whose ambiguous entries carry 4 points each.

    Fuzzy arrays append a trailing axis of length 4 to the crisp shape.
    Two-point parameters are stored as degenerate trapezoids p1=p2, p3=p4.
    """

    num_supply: int
    num_centers: int
    num_affected: int
    num_vehicles: int
    setup_cost: np.ndarray        # (J, 4)
    shortage_penalty: np.ndarray  # (K, 4)
    demand: np.ndarray            # (M, K, 4)
    supply: np.ndarray            # (M, I, 4)
    cost_in: np.ndarray           # (I, J, 4)
    cost_out: np.ndarray          # (J, K, 4)
    cap_in: np.ndarray            # (I, J, 4)
    cap_out: np.ndarray           # (J, K, 4)
    vehicle_capacity: np.ndarray
    time_in: np.ndarray
    time_out: np.ndarray
    dist_out: np.ndarray
    coverage_radius: np.ndarray
    speed: np.ndarray
    max_open_centers: int
    seed: int | None = None

    def __post_init__(self):
        for name in _FUZZY_FIELDS + _CRISP_FIELDS:
            arr = np.ascontiguousarray(np.asarray(getattr(self, name), dtype=float))
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        for name in _FUZZY_FIELDS:
            arr = getattr(self, name)
            if arr.shape[-1] != 4:
                raise ValueError(f"{name} must have a trailing axis of 4 points")
            if np.any(np.diff(arr, axis=-1) < 0):
                raise ValueError(f"{name} has unordered trapezoid points")

    @property
    def dims(self):
        return (self.num_supply, self.num_centers, self.num_affected, self.num_vehicles)

    @classmethod
    def from_crisp(cls, inst: ProblemInstance) -> "FuzzyInstance":
        """Degenerate fuzzy instance whose every trapezoid is a single point."""
        kw = {name: np.repeat(getattr(inst, name)[..., None], 4, axis=-1)
              for name in _FUZZY_FIELDS}
        for name in _CRISP_FIELDS:
            kw[name] = getattr(inst, name)
        return cls(num_supply=inst.num_supply, num_centers=inst.num_centers,
                   num_affected=inst.num_affected, num_vehicles=inst.num_vehicles,
                   max_open_centers=inst.max_open_centers, seed=inst.seed, **kw)

    def to_dict(self) -> dict:
        i, j, k, m = self.dims
        out = {"schema_version": 1, "fuzzy": True,
               "dims": {"I": i, "J": j, "K": k, "M": m}}
        for name in _FUZZY_FIELDS + _CRISP_FIELDS:
            out[name] = getattr(self, name).tolist()
        out["max_open_centers"] = self.max_open_centers
        if self.seed is not None:
            out["seed"] = self.seed
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "FuzzyInstance":
        dims = data["dims"]
        kw = {name: np.asarray(data[name], dtype=float)
              for name in _FUZZY_FIELDS + _CRISP_FIELDS}
        return cls(num_supply=int(dims["I"]), num_centers=int(dims["J"]),
                   num_affected=int(dims["K"]), num_vehicles=int(dims["M"]),
                   max_open_centers=int(data["max_open_centers"]),
                   seed=data.get("seed"), **kw)


def save_fuzzy(path: str | Path, inst: FuzzyInstance,
               weights: RppWeights | None = None) -> None:
    doc = inst.to_dict()
    if weights is not None:
        doc["weights"] = weights.to_dict()
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def load_fuzzy(path: str | Path) -> tuple[FuzzyInstance, RppWeights | None]:
    data = json.loads(Path(path).read_text())
    weights = RppWeights.from_dict(data["weights"]) if "weights" in data else None
    return FuzzyInstance.from_dict(data), weights


def _cost_form(fz: FuzzyInstance, sol: Solution, point: int) -> float:
    """Money objective with every fuzzy cost coefficient at one point index."""
    open_f = sol.open.astype(float)
    return float(
        np.sum(fz.cost_in[..., point] * sol.flow_in.sum(axis=0))
        + np.sum(fz.cost_out[..., point] * sol.flow_out.sum(axis=0))
        + fz.setup_cost[..., point] @ open_f
    )


def z_extremes(fz: FuzzyInstance, sol: Solution) -> tuple[float, float]:
    """(Zmin, Zmax): the money objective at the best and worst cost points."""
    return _cost_form(fz, sol, 0), _cost_form(fz, sol, 3)


def _expected(arr: np.ndarray) -> np.ndarray:
    return arr.mean(axis=-1)


def _chance_rhs(arr: np.ndarray, level: float) -> np.ndarray:
    """(1-level) * highest point + level * lowest point."""
    return (1.0 - level) * arr[..., 3] + level * arr[..., 0]


def _violation_gap(arr: np.ndarray, level: float) -> float:
    """Sum of (chance-constrained RHS minus the best-case point)."""
    return float(np.sum(_chance_rhs(arr, level) - arr[..., 0]))


def rpp_objective(fz: FuzzyInstance, sol: Solution, w: RppWeights) -> float:
    """Robust-possibilistic money objective of a solution (pure evaluation).

    Expected-value cost, plus the weighted worst-best cost gap, plus one
    violation penalty per fuzzy right-hand-side family; the inbound-capacity
    penalty is gated by the open decision of its center.
    """
    w.validate()
    expected_cost = float(
        np.sum(_expected(fz.cost_in) * sol.flow_in.sum(axis=0))
        + np.sum(_expected(fz.cost_out) * sol.flow_out.sum(axis=0))
        + _expected(fz.setup_cost) @ sol.open.astype(float)
    )
    zmin, zmax = z_extremes(fz, sol)
    value = expected_cost + w.robustness_weight * (zmax - zmin)
    value += w.supply_weight * _violation_gap(fz.supply, w.supply_level)
    value += w.demand_weight * _violation_gap(fz.demand, w.demand_level)
    gap_in = _chance_rhs(fz.cap_in, w.cap_in_level) - fz.cap_in[..., 0]   # (I, J)
    value += w.cap_in_weight * float(gap_in.sum(axis=0) @ sol.open.astype(float))
    value += w.cap_out_weight * _violation_gap(fz.cap_out, w.cap_out_level)
    value += w.demand_weight_2 * _violation_gap(fz.demand, w.demand_level_2)
    value += w.supply_weight_2 * _violation_gap(fz.supply, w.supply_level_2)
    return value


def expected_shortage_cost(fz: FuzzyInstance, sol: Solution) -> float:
    """Shortage objective with demand and penalty at their expected values."""
    delivered = sol.flow_out.sum(axis=1)
    gap = np.clip(_expected(fz.demand) - delivered, 0.0, None)
    return float(np.sum(_expected(fz.shortage_penalty)[None, :] * gap))


@dataclass
class RppDescriptor:
    """Extended-objective pieces that a crisp instance cannot carry.

    ``constant`` collects the solution-independent penalty terms;
    ``cost_in_extra``/``cost_out_extra``/``setup_extra`` are the per-unit and
    per-center addenda (robustness spread and open-gated penalties) that make
    the money objective of the folded instance equal the full robust
    objective minus ``constant``.
    """

    constant: float
    cost_in_extra: np.ndarray
    cost_out_extra: np.ndarray
    setup_extra: np.ndarray
    expected_demand: np.ndarray
    expected_penalty: np.ndarray

    def rpp_value(self, crisp: ProblemInstance, sol: Solution) -> float:
        open_f = sol.open.astype(float)
        base = float(
            np.sum(crisp.cost_in * sol.flow_in.sum(axis=0))
            + np.sum(crisp.cost_out * sol.flow_out.sum(axis=0))
            + crisp.setup_cost @ open_f
        )
        extra = float(
            np.sum(self.cost_in_extra * sol.flow_in.sum(axis=0))
            + np.sum(self.cost_out_extra * sol.flow_out.sum(axis=0))
            + self.setup_extra @ open_f
        )
        return base + extra + self.constant

    def folded_instance(self, crisp: ProblemInstance) -> ProblemInstance:
        """Crisp instance whose money objective is the robust objective."""
        return ProblemInstance(
            num_supply=crisp.num_supply, num_centers=crisp.num_centers,
            num_affected=crisp.num_affected, num_vehicles=crisp.num_vehicles,
            setup_cost=crisp.setup_cost + self.setup_extra,
            shortage_penalty=crisp.shortage_penalty,
            demand=crisp.demand, supply=crisp.supply,
            cost_in=crisp.cost_in + self.cost_in_extra,
            cost_out=crisp.cost_out + self.cost_out_extra,
            cap_in=crisp.cap_in, cap_out=crisp.cap_out,
            vehicle_capacity=crisp.vehicle_capacity,
            time_in=crisp.time_in, time_out=crisp.time_out,
            dist_out=crisp.dist_out, coverage_radius=crisp.coverage_radius,
            speed=crisp.speed, max_open_centers=crisp.max_open_centers,
            seed=crisp.seed,
        )


def build_crisp_instance(fz: FuzzyInstance, w: RppWeights) -> tuple[ProblemInstance, RppDescriptor]:
    """Crisp counterpart of a fuzzy instance plus its extended objective.

    Costs are priced at expected value; fuzzy right-hand sides become their
    chance-constrained combinations.  The descriptor carries the robustness
    and penalty terms so that solvers can optimize the full robust objective.
    """
    w.validate()
    crisp = ProblemInstance(
        num_supply=fz.num_supply, num_centers=fz.num_centers,
        num_affected=fz.num_affected, num_vehicles=fz.num_vehicles,
        setup_cost=_expected(fz.setup_cost),
        shortage_penalty=_expected(fz.shortage_penalty),
        demand=_chance_rhs(fz.demand, w.demand_level),
        supply=_chance_rhs(fz.supply, w.supply_level),
        cost_in=_expected(fz.cost_in),
        cost_out=_expected(fz.cost_out),
        cap_in=_chance_rhs(fz.cap_in, w.cap_in_level),
        cap_out=_chance_rhs(fz.cap_out, w.cap_out_level),
        vehicle_capacity=fz.vehicle_capacity,
        time_in=fz.time_in, time_out=fz.time_out,
        dist_out=fz.dist_out, coverage_radius=fz.coverage_radius,
        speed=fz.speed, max_open_centers=fz.max_open_centers, seed=fz.seed,
    )
    dv = w.robustness_weight
    constant = (
        w.supply_weight * _violation_gap(fz.supply, w.supply_level)
        + w.demand_weight * _violation_gap(fz.demand, w.demand_level)
        + w.cap_out_weight * _violation_gap(fz.cap_out, w.cap_out_level)
        + w.demand_weight_2 * _violation_gap(fz.demand, w.demand_level_2)
        + w.supply_weight_2 * _violation_gap(fz.supply, w.supply_level_2)
    )
    gap_in = _chance_rhs(fz.cap_in, w.cap_in_level) - fz.cap_in[..., 0]
    desc = RppDescriptor(
        constant=constant,
        cost_in_extra=dv * (fz.cost_in[..., 3] - fz.cost_in[..., 0]),
        cost_out_extra=dv * (fz.cost_out[..., 3] - fz.cost_out[..., 0]),
        setup_extra=dv * (fz.setup_cost[..., 3] - fz.setup_cost[..., 0])
        + w.cap_in_weight * gap_in.sum(axis=0),
        expected_demand=_expected(fz.demand),
        expected_penalty=_expected(fz.shortage_penalty),
    )
    return crisp, desc


# ---------------------------------------------------------------------------
# Exact linearization of (confidence level x binary) products
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Variable:
    name: str
    kind: str                    # "binary" or "continuous"
    lower: float = 0.0
    upper: float = 1.0


@dataclass
class Constraint:
    coeffs: dict[str, float]
    rhs: float                   # sum(coeffs * vars) <= rhs


@dataclass
class ProductTerm:
    """A bilinear objective term coeff * factor_a * factor_b."""

    factor_a: str
    factor_b: str
    coeff: float


@dataclass
class LevelModel:
    """Tiny symbolic model: linear terms, bilinear products, constraints."""

    variables: dict[str, Variable] = field(default_factory=dict)
    linear: dict[str, float] = field(default_factory=dict)
    products: list[ProductTerm] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)

    def add_variable(self, name, kind, lower=0.0, upper=1.0):
        self.variables[name] = Variable(name, kind, lower, upper)

    def add_linear(self, name, coeff):
        self.linear[name] = self.linear.get(name, 0.0) + coeff


def linearize_products(model: LevelModel) -> LevelModel:
    """Replace each (level x binary) product by an exact envelope variable.

    For binary z and level mu in [0.5, 1], the auxiliary v satisfies

        v <= z,   v >= 0.5 z,   v <= mu - 0.5 (1 - z),   v >= mu - (1 - z)

    which admits exactly v = mu * z at every binary point.
    """
    out = LevelModel(dict(model.variables), dict(model.linear),
                     [], [Constraint(dict(c.coeffs), c.rhs) for c in model.constraints])
    for idx, term in enumerate(model.products):
        va = model.variables[term.factor_a]
        vb = model.variables[term.factor_b]
        if va.kind == "binary" and vb.kind == "continuous":
            z, mu = va, vb
        elif vb.kind == "binary" and va.kind == "continuous":
            z, mu = vb, va
        else:
            raise NotLinearizableError(
                f"not-linearizable: {term.factor_a} * {term.factor_b}")
        if not (mu.lower >= _LEVEL_LO - 1e-12 and mu.upper <= _LEVEL_HI + 1e-12):
            raise NotLinearizableError(
                f"not-linearizable: level {mu.name} outside [0.5, 1]")
        aux = f"_prod{idx}_{mu.name}_{z.name}"
        out.add_variable(aux, "continuous", 0.0, 1.0)
        out.add_linear(aux, term.coeff)
        out.constraints.append(Constraint({aux: 1.0, z.name: -1.0}, 0.0))
        out.constraints.append(Constraint({z.name: _LEVEL_LO, aux: -1.0}, 0.0))
        out.constraints.append(Constraint(
            {aux: 1.0, mu.name: -1.0, z.name: -_LEVEL_LO}, -_LEVEL_LO))
        out.constraints.append(Constraint(
            {mu.name: 1.0, z.name: 1.0, aux: -1.0}, 1.0))
    return out


def envelope_bounds(model: LevelModel, assignment: dict[str, float],
                    aux: str) -> tuple[float, float]:
    """Feasible interval of one auxiliary variable given all other values."""
    lo, hi = model.variables[aux].lower, model.variables[aux].upper
    for con in model.constraints:
        if aux not in con.coeffs:
            continue
        a = con.coeffs[aux]
        rest = sum(c * assignment[v] for v, c in con.coeffs.items() if v != aux)
        bound = (con.rhs - rest) / a
        if a > 0:
            hi = min(hi, bound)
        else:
            lo = max(lo, bound)
    return lo, hi


def capacity_level_model(fz: FuzzyInstance, w: RppWeights) -> LevelModel:
    """Level-optimizing penalty block with its (level x open) bilinear terms.

    Builds the inbound and outbound capacity penalty terms with the
    confidence levels as decision variables, which is the nonlinear block
    the envelope linearization applies to.
    """
    model = LevelModel()
    model.add_variable("cap_in_level", "continuous", _LEVEL_LO, _LEVEL_HI)
    model.add_variable("cap_out_level", "continuous", _LEVEL_LO, _LEVEL_HI)
    span_in = (fz.cap_in[..., 3] - fz.cap_in[..., 0]).sum(axis=0)    # per j
    span_out = (fz.cap_out[..., 3] - fz.cap_out[..., 0]).sum(axis=1)  # per j
    for j in range(fz.num_centers):
        zname = f"open_{j}"
        model.add_variable(zname, "binary")
        # (1 - level) * span * z  ==  span * z - span * (level * z)
        model.add_linear(zname, w.cap_in_weight * span_in[j]
                         + w.cap_out_weight * span_out[j])
        model.products.append(ProductTerm("cap_in_level", zname,
                                          -w.cap_in_weight * span_in[j]))
        model.products.append(ProductTerm("cap_out_level", zname,
                                          -w.cap_out_weight * span_out[j]))
    return model
