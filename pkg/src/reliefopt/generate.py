"""Seeded random instance generation.

Every parameter is drawn i.i.d. uniform from a per-parameter range (see
``DEFAULT_RANGES``); arc times are derived as distance over vehicle speed.
The generator uses numpy's PCG64 stream seeded per spec, with a fixed draw
order, so a (dims, ranges, seed) triple reproduces an instance exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import ProblemInstance

DEFAULT_RANGES: dict[str, tuple[float, float]] = {
    "setup_cost": (5.0, 7.0),
    "demand": (5.0, 7.0),
    "supply": (5.0, 7.0),
    "cost_in": (5.0, 7.0),
    "cost_out": (5.0, 7.0),
    "shortage_penalty": (5.0, 7.0),
    "cap_in": (50.0, 80.0),
    "cap_out": (50.0, 80.0),
    "vehicle_capacity": (20.0, 26.0),
    "dist_out": (20.0, 26.0),
    "dist_in": (20.0, 26.0),
    "coverage_radius": (20.0, 26.0),
    "speed": (20.0, 26.0),
    "budget": (20.0, 26.0),
}

#: unexplained distribution rows kept for forward compatibility, unused by
#: the canonical model
AUX_RANGES: dict[str, tuple[float, float]] = {
    "x_dk": (1.0, 2.0),
    "x_jj": (2.0, 3.0),
    "e_ks": (4.0, 8.0),
    "T_d": (20.0, 26.0),
    "r_dh": (20.0, 26.0),
}


@dataclass(frozen=True)
class GenSpec:
    dims: tuple[int, int, int, int]          # (I, J, K, M)
    ranges: dict[str, tuple[float, float]] = field(default_factory=dict)
    seed: int = 0
    integral: bool = False
    name: str = ""

    def validate(self) -> None:
        if any(d < 1 for d in self.dims):
            raise ValueError("range: all dimensions must be >= 1")
        for key, (lo, hi) in self.effective_ranges().items():
            if lo > hi:
                raise ValueError(f"range: {key} has low > high")

    def effective_ranges(self) -> dict[str, tuple[float, float]]:
        merged = dict(DEFAULT_RANGES)
        merged.update(self.ranges)
        return merged


def generate(spec: GenSpec, with_aux: bool = False):
    """Draw a ProblemInstance (optionally plus the auxiliary parameter bag).

    Fixed draw order: setup_cost, shortage_penalty, demand, supply, cost_in,
    cost_out, cap_in, cap_out, vehicle_capacity, dist_out, dist_in,
    coverage_radius, speed, facility budget, then the auxiliary bag.
    """
    spec.validate()
    i_n, j_n, k_n, m_n = spec.dims
    rng = np.random.default_rng(spec.seed)
    r = spec.effective_ranges()

    def draw(key, shape):
        lo, hi = r[key]
        arr = rng.uniform(lo, hi, size=shape)
        return np.round(arr) if spec.integral else arr

    setup_cost = draw("setup_cost", j_n)
    shortage_penalty = draw("shortage_penalty", k_n)
    demand = draw("demand", (m_n, k_n))
    supply = draw("supply", (m_n, i_n))
    cost_in = draw("cost_in", (i_n, j_n))
    cost_out = draw("cost_out", (j_n, k_n))
    cap_in = draw("cap_in", (i_n, j_n))
    cap_out = draw("cap_out", (j_n, k_n))
    vehicle_capacity = draw("vehicle_capacity", m_n)
    dist_out = draw("dist_out", (j_n, k_n))
    dist_in = draw("dist_in", (i_n, j_n))
    coverage_radius = draw("coverage_radius", m_n)
    lo, hi = r["speed"]
    speed = rng.uniform(lo, hi, size=m_n)     # never rounded: divisor for times
    lo, hi = r["budget"]
    budget = int(np.clip(np.rint(rng.uniform(lo, hi)), 1, j_n))

    inst = ProblemInstance(
        num_supply=i_n, num_centers=j_n, num_affected=k_n, num_vehicles=m_n,
        setup_cost=setup_cost, shortage_penalty=shortage_penalty,
        demand=demand, supply=supply, cost_in=cost_in, cost_out=cost_out,
        cap_in=cap_in, cap_out=cap_out, vehicle_capacity=vehicle_capacity,
        time_in=dist_in[None, :, :] / speed[:, None, None],
        time_out=dist_out[None, :, :] / speed[:, None, None],
        dist_out=dist_out, coverage_radius=coverage_radius, speed=speed,
        max_open_centers=budget, seed=spec.seed,
    )
    if not with_aux:
        return inst
    aux = {
        "x_dk": rng.uniform(*AUX_RANGES["x_dk"], size=k_n),
        "x_jj": rng.uniform(*AUX_RANGES["x_jj"], size=(j_n, j_n)),
        "e_ks": rng.uniform(*AUX_RANGES["e_ks"], size=k_n),
        "T_d": rng.uniform(*AUX_RANGES["T_d"], size=k_n),
        "r_dh": rng.uniform(*AUX_RANGES["r_dh"], size=k_n),
    }
    return inst, aux


#: benchmark ladder dims (I, J, K, M); ordered by flow-variable count so the
#: runtime scaling pattern is well defined
_TABLE7_DIMS = [(1, 1, 2, 2), (2, 3, 2, 2), (3, 4, 5, 3), (5, 2, 1, 5), (2, 12, 12, 2)]
_TABLE7_SEEDS = [701, 702, 703, 704, 705]

_TABLE6_DIMS = [
    (3, 1, 2, 3), (3, 2, 3, 3), (4, 2, 2, 2), (4, 2, 3, 3), (5, 2, 3, 2),
    (5, 3, 3, 3), (5, 3, 4, 4), (8, 4, 5, 3), (8, 4, 6, 4), (10, 4, 5, 3),
    (10, 5, 6, 3), (15, 7, 9, 3), (15, 8, 11, 3), (15, 9, 12, 4),
    (25, 12, 15, 4), (50, 25, 20, 4), (80, 30, 40, 4), (100, 40, 55, 4),
    (150, 60, 90, 4), (250, 100, 140, 4), (400, 150, 250, 4), (500, 200, 300, 4),
]


def _flow_vars(dims) -> int:
    i, j, k, m = dims
    return m * (i * j + j * k)


def table7_ladder() -> list[GenSpec]:
    """Five desk-scale specs, smallest model first."""
    specs = [GenSpec(dims=d, seed=s, name=f"T7-{r + 1}")
             for r, (d, s) in enumerate(zip(_TABLE7_DIMS, _TABLE7_SEEDS))]
    return sorted(specs, key=lambda sp: _flow_vars(sp.dims))


def table6_ladder() -> list[GenSpec]:
    """22 scaling specs from desk scale up to (500, 200, 300)."""
    return [GenSpec(dims=d, seed=600 + r + 1, name=f"T6-{r + 1}")
            for r, d in enumerate(_TABLE6_DIMS)]


def paper_ladder() -> list[GenSpec]:
    return table7_ladder() + table6_ladder()
