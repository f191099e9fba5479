"""Elitist non-dominated-sorting genetic algorithm over chromosome decoding.

A chromosome is a center open/close bit string plus a priority key in [0, 1]
per outbound arc.  Decoding truncates the open set to the facility budget,
saturates outbound arcs greedily in decreasing key order, then backs every
center with a minimum-cost inbound assignment, so every decoded solution is
feasible by construction.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from ._kernels import domination_matrix, greedy_fill
from .model import ObjectiveVector, ProblemInstance, Solution, evaluate_objectives
from .pareto import ParetoFront
from .simplex import solve_lp


class ConfigError(ValueError):
    """Invalid NSGA-II configuration."""


#: arcs whose priority key falls below this are left unused by the decoder,
#: so sparse activation patterns stay reachable
SKIP_KEY = 0.25


@dataclass(frozen=True)
class NsgaConfig:
    population: int = 150
    generations: int = 50
    crossover_rate: float = 0.9
    mutation_rate: float = 0.2
    seed: int = 0

    def validate(self) -> None:
        if self.population < 4 or self.population % 2:
            raise ConfigError("config: population must be even and >= 4")
        if not (0.0 <= self.crossover_rate <= 1.0 and 0.0 <= self.mutation_rate <= 1.0):
            raise ConfigError("config: rates must be in [0, 1]")
        if self.generations < 1:
            raise ConfigError("config: generations must be >= 1")


@dataclass
class Chromosome:
    open_bits: np.ndarray          # (J,) bool
    priority_keys: np.ndarray      # (M, J, K) in [0, 1]


@dataclass
class Individual:
    chromosome: Chromosome
    solution: Solution | None = None
    objectives: tuple[float, float, float] | None = None
    rank: int = 0
    crowding: float = 0.0


@dataclass
class RunStats:
    wall_seconds: float = 0.0
    evaluations: int = 0
    gen_records: list[dict] = field(default_factory=list)


def _supplier_order(inst: ProblemInstance) -> np.ndarray:
    """(J, I) supplier indices per center, cheapest inbound cost first."""
    return np.argsort(inst.cost_in.T, axis=1, kind="stable").astype(np.int64)


def decode(chrom: Chromosome, inst: ProblemInstance,
           supplier_order: np.ndarray | None = None) -> Solution:
    """Decode a chromosome into a feasible solution (the decoder is total).

    Outbound arcs are visited in decreasing key order and saturated; arcs
    with a key below SKIP_KEY are not used at all, which lets chromosomes
    express sparse activation patterns.
    """
    i_n, j_n, k_n, m_n = inst.dims
    if chrom.open_bits.shape != (j_n,) or chrom.priority_keys.shape != (m_n, j_n, k_n):
        raise ValueError("chromosome dimensions do not match the instance")
    open_mask = chrom.open_bits.astype(bool).copy()
    extra = int(open_mask.sum()) - inst.max_open_centers
    if extra > 0:
        open_idx = np.flatnonzero(open_mask)
        open_mask[open_idx[inst.max_open_centers:]] = False   # keep lowest indices
    if supplier_order is None:
        supplier_order = _supplier_order(inst)

    keys = chrom.priority_keys.reshape(-1)
    arc_order = np.argsort(-keys, kind="stable").astype(np.int64)
    arc_order = arc_order[keys[arc_order] >= SKIP_KEY]
    flow_in = np.zeros((m_n, i_n, j_n))
    flow_out = np.zeros((m_n, j_n, k_n))
    greedy_fill(
        arc_order,
        np.ascontiguousarray(open_mask, dtype=np.uint8),
        np.ascontiguousarray(inst.admissible_mask(), dtype=np.uint8),
        inst.demand, inst.supply, inst.cap_in, inst.cap_out,
        inst.vehicle_capacity, supplier_order, flow_in, flow_out,
    )
    _rebuild_inbound_min_cost(inst, open_mask, flow_in, flow_out)
    return Solution(open_mask, flow_in, flow_out)


def _rebuild_inbound_min_cost(inst, open_mask, flow_in, flow_out) -> None:
    """Replace the greedy inbound flows by a min-cost assignment per vehicle.

    The greedy construction guarantees the per-center totals are reachable,
    so the transportation LP is always feasible.
    """
    i_n = inst.num_supply
    open_js = np.flatnonzero(open_mask)
    for m in range(inst.num_vehicles):
        totals = flow_out[m].sum(axis=1)
        active = [int(j) for j in open_js if totals[j] > 1e-12]
        if not active:
            flow_in[m, :, :] = 0.0
            continue
        if i_n == 1:
            flow_in[m, 0, :] = 0.0
            flow_in[m, 0, active] = totals[active]
            continue
        nv = i_n * len(active)
        cost = np.empty(nv)
        upper = np.empty(nv)
        A_eq = np.zeros((len(active), nv))
        for a, j in enumerate(active):
            cols = slice(a * i_n, (a + 1) * i_n)
            cost[cols] = inst.cost_in[:, j]
            upper[cols] = inst.cap_in[:, j]
            A_eq[a, cols] = 1.0
        b_eq = totals[active]
        A_ub = np.zeros((i_n, nv))
        for i in range(i_n):
            A_ub[i, i::i_n] = 1.0
        res = solve_lp(cost, A_ub, inst.supply[m], A_eq, b_eq,
                       np.zeros(nv), upper)
        if res.status != "optimal":      # greedy witness exists; keep it
            continue
        flow_in[m, :, :] = 0.0
        for a, j in enumerate(active):
            flow_in[m, :, j] = res.x[a * i_n:(a + 1) * i_n]


def fast_nondominated_sort(population: list[Individual]) -> list[list[Individual]]:
    """Partition a population into fronts and assign 1-based ranks."""
    if not population:
        return []
    objs = np.array([ind.objectives for ind in population], dtype=float)
    fronts_idx = nondominated_sort_indices(objs)
    fronts = []
    for r, idxs in enumerate(fronts_idx, start=1):
        frnt = []
        for i in idxs:
            population[i].rank = r
            frnt.append(population[i])
        fronts.append(frnt)
    return fronts


def nondominated_sort_indices(objs: np.ndarray) -> list[list[int]]:
    n = objs.shape[0]
    if n == 0:
        return []
    dom = domination_matrix(np.ascontiguousarray(objs, dtype=float))
    n_dom = dom.sum(axis=0).astype(np.int64)
    assigned = np.zeros(n, dtype=bool)
    fronts = []
    current = np.flatnonzero(n_dom == 0)
    while current.size:
        assigned[current] = True
        fronts.append([int(i) for i in current])
        n_dom = n_dom - dom[current].sum(axis=0)
        current = np.flatnonzero((n_dom == 0) & ~assigned)
    return fronts


def crowding_distance(front: list[Individual]) -> np.ndarray:
    """Assign crowding distances within one front (boundaries get +inf)."""
    objs = np.array([ind.objectives for ind in front], dtype=float)
    dist = crowding_from_objectives(objs)
    for ind, d in zip(front, dist):
        ind.crowding = float(d)
    return dist


def crowding_from_objectives(objs: np.ndarray) -> np.ndarray:
    n = objs.shape[0]
    dist = np.zeros(n)
    if n == 0:
        return dist
    for c in range(objs.shape[1]):
        order = np.argsort(objs[:, c], kind="stable")
        dist[order[0]] = np.inf
        dist[order[-1]] = np.inf
        span = objs[order[-1], c] - objs[order[0], c]
        if span <= 0 or n < 3:
            continue
        gaps = (objs[order[2:], c] - objs[order[:-2], c]) / span
        dist[order[1:-1]] += gaps
    return dist


def run_nsga2(inst: ProblemInstance, config: NsgaConfig | None = None, *,
              clock=time.perf_counter) -> tuple[ParetoFront, RunStats]:
    """Seeded NSGA-II run returning the final rank-1 front and run stats."""
    config = config or NsgaConfig()
    config.validate()
    rng = np.random.default_rng(config.seed)
    i_n, j_n, k_n, m_n = inst.dims
    sup_order = _supplier_order(inst)
    stats = RunStats()
    t_start = clock()

    def new_individual(bits, keys) -> Individual:
        return Individual(Chromosome(bits, keys))

    def evaluate(ind: Individual) -> None:
        sol = decode(ind.chromosome, inst, sup_order)
        vec = evaluate_objectives(inst, sol)
        ind.solution = sol
        ind.objectives = vec.as_tuple()
        stats.evaluations += 1

    pop = [
        new_individual(rng.random(j_n) < 0.5, rng.random((m_n, j_n, k_n)))
        for _ in range(config.population)
    ]
    for ind in pop:
        evaluate(ind)

    def tournament(ranked: list[Individual]) -> Individual:
        a, b = rng.integers(0, len(ranked), size=2)
        ia, ib = ranked[int(a)], ranked[int(b)]
        if ia.rank != ib.rank:
            return ia if ia.rank < ib.rank else ib
        if ia.crowding != ib.crowding:
            return ia if ia.crowding > ib.crowding else ib
        return ia if int(a) <= int(b) else ib

    for gen in range(1, config.generations + 1):
        for front in fast_nondominated_sort(pop):
            crowding_distance(front)
        children: list[Individual] = []
        while len(children) < config.population:
            p1, p2 = tournament(pop), tournament(pop)
            b1 = p1.chromosome.open_bits.copy()
            b2 = p2.chromosome.open_bits.copy()
            k1 = p1.chromosome.priority_keys.copy()
            k2 = p2.chromosome.priority_keys.copy()
            if rng.random() < config.crossover_rate:
                swap = rng.random(j_n) < 0.5
                b1[swap], b2[swap] = b2[swap], b1[swap]
                lam = rng.random((m_n, j_n, k_n))
                k1, k2 = lam * k1 + (1 - lam) * k2, lam * k2 + (1 - lam) * k1
            for bits, keys in ((b1, k1), (b2, k2)):
                flip = rng.random(j_n) < config.mutation_rate
                bits[flip] = ~bits[flip]
                perturb = rng.normal(0.0, 0.15, size=(m_n, j_n, k_n))
                mask = rng.random((m_n, j_n, k_n)) < config.mutation_rate
                keys = np.clip(keys + perturb * mask, 0.0, 1.0)
                children.append(new_individual(bits, keys))
        children = children[:config.population]
        for ind in children:
            evaluate(ind)

        combined = pop + children
        fronts = fast_nondominated_sort(combined)
        survivors: list[Individual] = []
        for front in fronts:
            crowding_distance(front)
            if len(survivors) + len(front) <= config.population:
                survivors.extend(front)
            else:
                room = config.population - len(survivors)
                order = sorted(range(len(front)),
                               key=lambda i: (-front[i].crowding, i))
                survivors.extend(front[i] for i in order[:room])
                break
        pop = survivors

        best = np.array([ind.objectives for ind in pop]).min(axis=0)
        front_size = sum(1 for ind in pop if ind.rank == 1)
        stats.gen_records.append({
            "gen": gen,
            "best_f1": float(best[0]),
            "best_f2": float(best[1]),
            "best_f3": float(best[2]),
            "front_size": front_size,
            "elapsed_ms": (clock() - t_start) * 1000.0,
        })

    stats.wall_seconds = clock() - t_start
    final = [ind for ind in pop if ind.rank == 1]
    front = ParetoFront.from_candidates(
        (ObjectiveVector(*ind.objectives), ind.solution) for ind in final)
    return front, stats


def write_run_log(stats: RunStats, path) -> None:
    import json
    with open(path, "w") as fh:
        for rec in stats.gen_records:
            fh.write(json.dumps(rec) + "\n")
