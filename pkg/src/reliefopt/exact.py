"""Exact Pareto enumeration via the epsilon-constraint method.

The single-objective subproblem (minimize one objective subject to bounds on
the others) is solved exactly by enumerating open-center subsets within the
facility budget and, inside each subset, running branch and bound over arc
activations and flow integrality with bounds from a bounded-variable simplex
relaxation.  ``brute_force_front`` is an independent enumeration oracle used
to validate the sweep on desk-scale instances.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

import numpy as np

from .model import ACTIVATION_TOL, ObjectiveVector, ProblemInstance, Solution, evaluate_objectives
from .pareto import ParetoFront, nondominated_indices
from .simplex import solve_lp

INF = float("inf")

_EPS_TOL = 1e-9          # slack when comparing against epsilon bounds
_INT_TOL = 1e-6          # integrality tolerance on LP vertices
_PRUNE_TOL = 1e-12


class SolveTimeout(Exception):
    """Deadline exceeded inside an exact solve."""


class BudgetExceededError(RuntimeError):
    """Node budget exhausted; no exact answer is returned."""


class TooLargeError(RuntimeError):
    """Brute-force enumeration would exceed its combination budget."""


class InfeasibleError(RuntimeError):
    """No feasible point exists (malformed instance)."""


@dataclass
class PayoffTable:
    """Row r holds the full objective vector at the minimizer of objective r."""

    rows: list[ObjectiveVector]
    solutions: list[Solution] | None = None

    def column(self, q: int) -> list[float]:
        return [row.as_tuple()[q - 1] for row in self.rows]

    def diagonal(self, q: int) -> float:
        return self.rows[q - 1].as_tuple()[q - 1]


@dataclass
class EpsilonGrid:
    eps2: list[float]
    eps3: list[float]


def epsilon_grid(payoff: PayoffTable, n: int) -> EpsilonGrid:
    """Evenly spaced epsilon breakpoints between each column's min and max.

    eps_q[k] = q_min + k * (q_anti - q_min) / (n + 1) for k = 1..n, where
    q_min is the payoff diagonal and q_anti the column maximum.  A degenerate
    column collapses to the single breakpoint [q_min].
    """
    if n < 1:
        raise ValueError("n >= 1 required")
    out = []
    for q in (2, 3):
        qmin = payoff.diagonal(q)
        qanti = max(payoff.column(q))
        if qanti - qmin <= 0:
            out.append([qmin])
        else:
            step = (qanti - qmin) / (n + 1)
            out.append([qmin + k * step for k in range(1, n + 1)])
    return EpsilonGrid(eps2=out[0], eps3=out[1])


# ---------------------------------------------------------------------------
# LP system for one open-center subset
# ---------------------------------------------------------------------------

class _ArcSystem:
    """Flow LP of one open subset: variables, static rows and objectives.

    Variables are the usable inbound arcs (m,i,j) followed by the usable
    outbound arcs (m,j,k).  The epsilon rows are always present, with their
    right-hand sides patched per solve, so one system serves every grid cell
    and branch-and-bound nodes only move variable bounds.
    """

    def __init__(self, inst: ProblemInstance, open_mask: np.ndarray):
        self.inst = inst
        self.open_mask = open_mask
        self.setup = float(inst.setup_cost @ open_mask)
        self.total_shortage = inst.total_shortage_cost()
        i_n, j_n, k_n, m_n = inst.dims

        adm = inst.admissible_mask()
        in_vars = []
        for m in range(m_n):
            for i in range(i_n):
                for j in range(j_n):
                    if not open_mask[j]:
                        continue
                    ub = min(inst.cap_in[i, j], inst.supply[m, i])
                    if ub > ACTIVATION_TOL:
                        in_vars.append((m, i, j, ub))
        out_vars = []
        for m in range(m_n):
            for j in range(j_n):
                for k in range(k_n):
                    if not open_mask[j] or not adm[m, j, k]:
                        continue
                    ub = min(inst.cap_out[j, k], inst.demand[m, k],
                             inst.vehicle_capacity[m])
                    if ub > ACTIVATION_TOL:
                        out_vars.append((m, j, k, ub))
        self.n_in = len(in_vars)
        self.n_out = len(out_vars)
        self.nv = self.n_in + self.n_out
        if self.nv == 0:
            return

        self.in_idx = np.array([v[:3] for v in in_vars], dtype=int).reshape(self.n_in, 3)
        self.out_idx = np.array([v[:3] for v in out_vars], dtype=int).reshape(self.n_out, 3)
        self.ub0 = np.array([v[3] for v in in_vars] + [v[3] for v in out_vars])
        cost = np.concatenate([
            inst.cost_in[self.in_idx[:, 1], self.in_idx[:, 2]] if self.n_in else np.empty(0),
            inst.cost_out[self.out_idx[:, 1], self.out_idx[:, 2]] if self.n_out else np.empty(0),
        ])
        times = np.concatenate([
            inst.time_in[self.in_idx[:, 0], self.in_idx[:, 1], self.in_idx[:, 2]]
            if self.n_in else np.empty(0),
            inst.time_out[self.out_idx[:, 0], self.out_idx[:, 1], self.out_idx[:, 2]]
            if self.n_out else np.empty(0),
        ])
        self.cost = cost
        self.times = times
        pen = np.zeros(self.nv)
        if self.n_out:
            pen[self.n_in:] = inst.shortage_penalty[self.out_idx[:, 2]]
        self.pen = pen

        eq_rows, eq_rhs = [], []
        for m in range(m_n):
            for j in np.flatnonzero(open_mask):
                row = np.zeros(self.nv)
                if self.n_in:
                    sel = (self.in_idx[:, 0] == m) & (self.in_idx[:, 2] == j)
                    row[:self.n_in][sel] = 1.0
                if self.n_out:
                    sel = (self.out_idx[:, 0] == m) & (self.out_idx[:, 1] == j)
                    row[self.n_in:][sel] = -1.0
                if np.any(row):
                    eq_rows.append(row)
                    eq_rhs.append(0.0)
        ub_rows, ub_rhs = [], []
        if self.n_in:
            for m in range(m_n):
                for i in range(i_n):
                    sel = (self.in_idx[:, 0] == m) & (self.in_idx[:, 1] == i)
                    if np.any(sel):
                        row = np.zeros(self.nv)
                        row[:self.n_in][sel] = 1.0
                        ub_rows.append(row)
                        ub_rhs.append(inst.supply[m, i])
        if self.n_out:
            for m in range(m_n):
                for k in range(k_n):
                    sel = (self.out_idx[:, 0] == m) & (self.out_idx[:, 2] == k)
                    if np.any(sel):
                        row = np.zeros(self.nv)
                        row[self.n_in:][sel] = 1.0
                        ub_rows.append(row)
                        ub_rhs.append(inst.demand[m, k])
            for m in range(m_n):
                sel = self.out_idx[:, 0] == m
                if np.any(sel):
                    row = np.zeros(self.nv)
                    row[self.n_in:][sel] = 1.0
                    ub_rows.append(row)
                    ub_rhs.append(inst.vehicle_capacity[m])
        # epsilon rows, always last three: f1 bound, f2 bound, f3 relaxation
        ub_rows.append(-pen)                                     # -sum(pi*y)
        ub_rhs.append(0.0)
        ub_rows.append(cost.copy())
        ub_rhs.append(0.0)
        ub_rows.append(np.where(times > 0, times / self.ub0, 0.0))
        ub_rhs.append(0.0)
        self.A_eq = np.array(eq_rows) if eq_rows else None
        self.b_eq = np.array(eq_rhs) if eq_rhs else None
        self.A_ub = np.array(ub_rows)
        self.b_ub_base = np.array(ub_rhs)
        self.fixed_charge_obj = np.where(times > 0, times / self.ub0, 0.0)

    def rhs_for(self, eps1: float, eps2: float, eps3: float) -> np.ndarray:
        """Right-hand sides with the epsilon bounds patched in."""
        big = 1e18
        b = self.b_ub_base.copy()
        b[-3] = (eps1 - self.total_shortage) if np.isfinite(eps1) else big
        b[-2] = (eps2 - self.setup) if np.isfinite(eps2) else big
        b[-1] = eps3 if np.isfinite(eps3) else big
        return b

    def objective_for(self, primary: int) -> tuple[np.ndarray, float]:
        if primary == 1:
            return -self.pen, self.total_shortage
        if primary == 2:
            return self.cost, self.setup
        return self.fixed_charge_obj, 0.0

    def solution_from(self, x: np.ndarray) -> Solution:
        sol = Solution.zero(self.inst)
        sol.open[:] = self.open_mask
        if self.n_in:
            sol.flow_in[self.in_idx[:, 0], self.in_idx[:, 1], self.in_idx[:, 2]] = x[:self.n_in]
        if self.n_out:
            sol.flow_out[self.out_idx[:, 0], self.out_idx[:, 1], self.out_idx[:, 2]] = x[self.n_in:]
        return sol

    def vector_from(self, x: np.ndarray) -> tuple[float, float, float]:
        y = x[self.n_in:]
        f1 = self.total_shortage - float(self.pen[self.n_in:] @ y) if self.n_out else self.total_shortage
        f2 = float(self.cost @ x) + self.setup
        f3 = float(self.times[x > ACTIVATION_TOL].sum())
        return (max(f1, 0.0), f2, f3)


@dataclass
class _Incumbent:
    value: float = INF
    sol: Solution | None = None
    vec: tuple[float, float, float] | None = None


class _Budget:
    def __init__(self, node_limit: int, deadline: float | None, clock):
        self.left = node_limit
        self.deadline = deadline
        self.clock = clock

    def tick(self) -> None:
        self.left -= 1
        if self.left < 0:
            raise BudgetExceededError("budget-exceeded")
        if self.deadline is not None and self.clock() > self.deadline:
            raise SolveTimeout("time limit exceeded")


def _solve_subset(sys: _ArcSystem, primary: int,
                  eps1: float, eps2: float, eps3: float,
                  integral: bool, best: _Incumbent, budget: _Budget) -> None:
    nv = sys.nv
    base_obj, base_const = sys.objective_for(primary)
    b_ub = sys.rhs_for(eps1, eps2, eps3)
    times = sys.times
    stack = [(np.zeros(nv), sys.ub0.copy(), np.zeros(nv, dtype=bool))]
    while stack:
        budget.tick()
        lo, up, on = stack.pop()
        forced_on = on | (lo > ACTIVATION_TOL)
        f3_forced = float(times[forced_on].sum())
        if f3_forced > eps3 + _EPS_TOL:
            continue
        # per-node fixed-charge relaxation over the shrunken bounds:
        # sum (t/ub) x over undecided time-bearing arcs <= eps3 - committed time
        sel = np.flatnonzero(up > ACTIVATION_TOL)
        relax = np.zeros(nv)
        undecided = (times > 0) & ~forced_on & (up > ACTIVATION_TOL)
        relax[undecided] = times[undecided] / up[undecided]
        A_ub = sys.A_ub[:, sel].copy()
        A_ub[-1] = relax[sel]
        b_node = b_ub.copy()
        if np.isfinite(eps3):
            b_node[-1] = eps3 - f3_forced
        if primary == 3:
            obj = relax                      # strengthened per-node bound
            const = f3_forced
        else:
            obj = base_obj
            const = base_const
        A_eq = sys.A_eq[:, sel] if sys.A_eq is not None else None
        res = solve_lp(obj[sel], A_ub, b_node, A_eq, sys.b_eq, lo[sel], up[sel])
        if res.status != "optimal":
            continue
        bound = const + res.objective
        if bound >= best.value - _PRUNE_TOL:
            continue
        x = np.zeros(nv)
        x[sel] = res.x
        if integral:
            frac = np.abs(x - np.round(x))
            jf = int(np.argmax(frac))
            if frac[jf] > _INT_TOL:
                lo_c, up_c = lo.copy(), up.copy()
                up_c[jf] = np.floor(x[jf])
                lo2, up2 = lo.copy(), up.copy()
                lo2[jf] = np.ceil(x[jf])
                stack.append((lo2, up2, on.copy()))
                stack.append((lo_c, up_c, on.copy()))
                continue
            x = np.round(x)
            x = np.clip(x, lo, np.where(np.isfinite(up), up, x))
        vec = sys.vector_from(x)
        if (vec[0] <= eps1 + 1e-6 and vec[1] <= eps2 + 1e-6
                and vec[2] <= eps3 + _EPS_TOL):
            value = vec[primary - 1]
            if value < best.value - _PRUNE_TOL:
                best.value = value
                best.sol = sys.solution_from(x)
                best.vec = vec
        need_branch = vec[2] > eps3 + _EPS_TOL or (
            primary == 3 and vec[2] > bound + _EPS_TOL)
        if not need_branch:
            continue
        support = (x > ACTIVATION_TOL) & (times > 0) & ~forced_on
        if not np.any(support):
            continue
        # branch on the support arc whose activation time is most understated
        cand = np.flatnonzero(support)
        cheat = times[cand] * (1.0 - x[cand] / np.maximum(up[cand], 1e-12))
        a = int(cand[np.argmax(cheat)])
        on_child = on.copy()
        on_child[a] = True
        up_off = up.copy()
        up_off[a] = 0.0
        stack.append((lo.copy(), up.copy(), on_child))
        stack.append((lo.copy(), up_off, on.copy()))


def _open_subsets(n_centers: int, max_open: int, largest_first: bool = False):
    sizes = range(min(max_open, n_centers), -1, -1) if largest_first \
        else range(0, min(max_open, n_centers) + 1)
    for size in sizes:
        for combo in itertools.combinations(range(n_centers), size):
            mask = np.zeros(n_centers, dtype=bool)
            mask[list(combo)] = True
            yield mask


def _exact_solve(inst: ProblemInstance, primary: int,
                 eps1: float, eps2: float, eps3: float,
                 integral: bool, budget: _Budget,
                 sys_cache: dict | None = None,
                 hint: _Incumbent | None = None) -> _Incumbent | None:
    best = _Incumbent()
    if hint is not None and hint.sol is not None:
        # a known feasible solution primes the pruning bound
        best.value, best.sol, best.vec = hint.value, hint.sol, hint.vec
    # visit strong-incumbent subsets first: for the shortage objective more
    # open centers only help, for the others fewer centers cost less
    for mask in _open_subsets(inst.num_centers, inst.max_open_centers,
                              largest_first=(primary == 1)):
        budget.tick()
        setup = float(inst.setup_cost @ mask)
        if setup > eps2 + _EPS_TOL:
            continue
        if primary == 2 and setup >= best.value - _PRUNE_TOL:
            continue
        key = mask.tobytes()
        if sys_cache is not None and key in sys_cache:
            sys = sys_cache[key]
        else:
            sys = _ArcSystem(inst, mask)
            if sys_cache is not None:
                sys_cache[key] = sys
        if sys.nv == 0:
            vec = (inst.total_shortage_cost(), setup, 0.0)
            if vec[0] <= eps1 + 1e-6 and vec[1] <= eps2 + 1e-6:
                value = vec[primary - 1]
                if value < best.value - _PRUNE_TOL:
                    best.value = value
                    best.sol = Solution.zero(inst)
                    best.sol.open[:] = mask
                    best.vec = vec
            continue
        _solve_subset(sys, primary, eps1, eps2, eps3, integral, best, budget)
    if best.sol is None:
        return None
    return best


def solve_single_objective(inst: ProblemInstance, primary: int,
                           eps2: float = INF, eps3: float = INF, *,
                           eps1: float = INF, integral: bool = True,
                           node_limit: int = 10 ** 6,
                           deadline: float | None = None,
                           clock=time.perf_counter) -> Solution | None:
    """Exact minimizer of one objective under epsilon bounds on the others.

    Returns None when no feasible point meets the bounds, which sweeps treat
    as a skippable cell.  Raises BudgetExceededError or SolveTimeout instead
    of ever returning a non-exact answer.
    """
    if primary not in (1, 2, 3):
        raise ValueError("primary objective id must be 1, 2 or 3")
    budget = _Budget(node_limit, deadline, clock)
    best = _exact_solve(inst, primary, eps1, eps2, eps3, integral, budget, {})
    return None if best is None else best.sol


def payoff_table(inst: ProblemInstance, *, integral: bool = True,
                 node_limit: int = 10 ** 6, deadline: float | None = None,
                 clock=time.perf_counter) -> PayoffTable:
    """Objective vectors at each single-objective optimum.

    Ties are broken by lexicographic minimization of the remaining objectives
    in ascending index order.
    """
    budget = _Budget(node_limit, deadline, clock)
    sys_cache: dict = {}
    rows = []
    sols = []
    for r in (1, 2, 3):
        eps = [INF, INF, INF]
        best = None
        for p in [r] + [q for q in (1, 2, 3) if q != r]:
            best = _exact_solve(inst, p, eps[0], eps[1], eps[2], integral,
                                budget, sys_cache)
            if best is None:
                raise InfeasibleError("infeasible")
            eps[p - 1] = best.vec[p - 1] + 1e-9 * (1.0 + abs(best.vec[p - 1]))
        rows.append(ObjectiveVector(*best.vec))
        sols.append(best.sol)
    return PayoffTable(rows, sols)


def min_cost_transport(inst: ProblemInstance, open_set, active_arcs=None,
                       objective_weights=None) -> Solution:
    """Continuous-flow optimum of a linear objective over the flow polytope.

    ``open_set`` is an iterable of open center indices (or a boolean mask),
    ``active_arcs`` an optional (in_mask, out_mask) pair restricting which
    arcs may carry flow, and ``objective_weights`` an optional (w_in, w_out)
    pair of per-arc cost arrays (defaults to the instance transport costs).
    Zero flow is always feasible, so a solution always exists.
    """
    j_n = inst.num_centers
    open_set = np.asarray(open_set)
    if open_set.dtype == bool:
        mask = open_set.copy()
    else:
        mask = np.zeros(j_n, dtype=bool)
        if open_set.size:
            mask[open_set.astype(int)] = True
    if int(mask.sum()) > inst.max_open_centers:
        raise ValueError("open set exceeds the facility budget")
    sys = _ArcSystem(inst, mask)
    sol = Solution.zero(inst)
    sol.open[:] = mask
    if sys.nv == 0:
        return sol
    lo = np.zeros(sys.nv)
    up = sys.ub0.copy()
    if active_arcs is not None:
        in_mask, out_mask = active_arcs
        if sys.n_in:
            act = np.asarray(in_mask, dtype=bool)[
                sys.in_idx[:, 0], sys.in_idx[:, 1], sys.in_idx[:, 2]]
            up[:sys.n_in][~act] = 0.0
        if sys.n_out:
            act = np.asarray(out_mask, dtype=bool)[
                sys.out_idx[:, 0], sys.out_idx[:, 1], sys.out_idx[:, 2]]
            up[sys.n_in:][~act] = 0.0
    if objective_weights is None:
        obj = sys.cost
    else:
        w_in, w_out = objective_weights
        obj = np.concatenate([
            np.asarray(w_in, dtype=float)[sys.in_idx[:, 0], sys.in_idx[:, 1], sys.in_idx[:, 2]]
            if sys.n_in else np.empty(0),
            np.asarray(w_out, dtype=float)[sys.out_idx[:, 0], sys.out_idx[:, 1], sys.out_idx[:, 2]]
            if sys.n_out else np.empty(0),
        ])
    res = solve_lp(obj, sys.A_ub, sys.rhs_for(INF, INF, INF),
                   sys.A_eq, sys.b_eq, lo, up)
    if res.status != "optimal":
        raise InfeasibleError("transport subproblem infeasible")
    return sys.solution_from(res.x)


def epsilon_constraint_front(inst: ProblemInstance, n: int = 10, *,
                             grid: EpsilonGrid | None = None,
                             integral: bool = True,
                             node_limit: int = 10 ** 6,
                             time_limit: float | None = None,
                             clock=time.perf_counter) -> ParetoFront:
    """Sweep the epsilon grid with f1 as the primary objective.

    Cells whose bounds are implied by an already-solved looser cell reuse its
    solution, which keeps refined grids cheap.  Infeasible cells are skipped.
    """
    deadline = None if time_limit is None else clock() + time_limit
    payoff = payoff_table(inst, integral=integral, node_limit=node_limit,
                          deadline=deadline, clock=clock)
    if grid is None:
        grid = epsilon_grid(payoff, n)
    cells = [(e2, e3) for e2 in grid.eps2 for e3 in grid.eps3]
    cells.append((INF, INF))
    cells = sorted(set(cells), key=lambda c: (-c[0], -c[1]))

    budget = _Budget(node_limit, deadline, clock)
    sys_cache: dict = {}
    solved: list[tuple[float, float, tuple, Solution]] = []
    if payoff.solutions is not None:
        # the lexicographic f1 minimizer solves every cell that contains it
        solved.append((INF, INF, payoff.rows[0].as_tuple(), payoff.solutions[0]))
    infeasible: list[tuple[float, float]] = []
    candidates = []
    for e2, e3 in cells:
        hit = None
        hint = _Incumbent()
        for s2, s3, vec, sol in solved:
            feas_here = vec[1] <= e2 + _EPS_TOL and vec[2] <= e3 + _EPS_TOL
            if feas_here and s2 >= e2 - _EPS_TOL and s3 >= e3 - _EPS_TOL:
                hit = (vec, sol)
                break
            if feas_here and vec[0] < hint.value:
                hint.value, hint.vec, hint.sol = vec[0], vec, sol
        if hit is not None:
            candidates.append(hit)
            continue
        if any(i2 >= e2 - _EPS_TOL and i3 >= e3 - _EPS_TOL for i2, i3 in infeasible):
            continue
        best = _exact_solve(inst, 1, INF, e2, e3, integral, budget, sys_cache,
                            hint=hint)
        if best is None:
            infeasible.append((e2, e3))
            continue
        solved.append((e2, e3, best.vec, best.sol))
        candidates.append((best.vec, best.sol))
    return ParetoFront.from_candidates(
        (ObjectiveVector(*vec), sol) for vec, sol in candidates)


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------

def brute_force_front(inst: ProblemInstance, budget: int = 10 ** 7,
                      deadline: float | None = None,
                      clock=time.perf_counter) -> ParetoFront:
    """Enumerate every open set and integer flow tensor; keep the front.

    Independent of the LP/branch-and-bound path: plain enumeration with a
    conservation join between inbound and outbound flows.  Raises
    TooLargeError when the combination count exceeds ``budget``.
    """
    i_n, j_n, k_n, m_n = inst.dims
    adm = inst.admissible_mask()
    masks = list(_open_subsets(j_n, inst.max_open_centers))

    total = 0
    mask_plans = []
    for mask in masks:
        in_ub, in_pos = [], []
        for m in range(m_n):
            for i in range(i_n):
                for j in range(j_n):
                    if mask[j]:
                        u = int(np.floor(min(inst.cap_in[i, j], inst.supply[m, i]) + 1e-9))
                        if u >= 1:
                            in_ub.append(u)
                            in_pos.append((m, i, j))
        out_ub, out_pos = [], []
        for m in range(m_n):
            for j in range(j_n):
                for k in range(k_n):
                    if mask[j] and adm[m, j, k]:
                        u = int(np.floor(min(inst.cap_out[j, k], inst.demand[m, k],
                                             inst.vehicle_capacity[m]) + 1e-9))
                        if u >= 1:
                            out_ub.append(u)
                            out_pos.append((m, j, k))
        n_in = int(np.prod([u + 1 for u in in_ub], dtype=np.float64)) if in_ub else 1
        n_out = int(np.prod([u + 1 for u in out_ub], dtype=np.float64)) if out_ub else 1
        total += n_in * n_out
        if total > budget or n_in > 1 << 22 or n_out > 1 << 22:
            raise TooLargeError("too-large")
        mask_plans.append((mask, in_pos, in_ub, out_pos, out_ub))

    all_vecs = []
    all_meta = []   # (mask index, out combo id, in combo id)
    for mi, (mask, in_pos, in_ub, out_pos, out_ub) in enumerate(mask_plans):
        if deadline is not None and clock() > deadline:
            raise SolveTimeout("time limit exceeded")
        setup = float(inst.setup_cost @ mask)
        open_js = [int(j) for j in np.flatnonzero(mask)]
        out = _enumerate_side(inst, out_pos, out_ub, open_js, side="out")
        inn = _enumerate_side(inst, in_pos, in_ub, open_js, side="in")
        if out is None or inn is None:
            continue
        ids_o, f1o, f2o, f3o, sig_o = out
        ids_i, f2i, f3i, sig_i = inn
        groups_o = _group_rows(sig_o)
        groups_i = _group_rows(sig_i)
        for key, rows_o in groups_o.items():
            rows_i = groups_i.get(key)
            if rows_i is None:
                continue
            reps = rows_i[_pareto_2d(f2i[rows_i], f3i[rows_i])]
            for r in reps:
                vec = np.column_stack([
                    f1o[rows_o],
                    f2o[rows_o] + f2i[r] + setup,
                    f3o[rows_o] + f3i[r],
                ])
                all_vecs.append(vec)
                all_meta.extend(
                    (mi, int(ids_o[o]), int(ids_i[r])) for o in rows_o)

    if not all_vecs:
        zero = Solution.zero(inst)
        return ParetoFront.from_candidates([(evaluate_objectives(inst, zero), zero)])
    vecs = np.vstack(all_vecs)
    rounded = np.round(vecs, 9)
    _, first = np.unique(rounded, axis=0, return_index=True)
    first = np.sort(first)
    vecs = vecs[first]
    meta = [all_meta[i] for i in first]
    keep = nondominated_indices(vecs)

    candidates = []
    for idx in keep:
        mi, o_row, i_row = meta[idx]
        mask, in_pos, in_ub, out_pos, out_ub = mask_plans[mi]
        sol = Solution.zero(inst)
        sol.open[:] = mask
        for val, (m, i, j) in zip(_digits_of(i_row, in_ub), in_pos):
            sol.flow_in[m, i, j] = float(val)
        for val, (m, j, k) in zip(_digits_of(o_row, out_ub), out_pos):
            sol.flow_out[m, j, k] = float(val)
        candidates.append((evaluate_objectives(inst, sol), sol))
    return ParetoFront.from_candidates(candidates)


def _digits_of(row: int, ubs: list[int]) -> list[int]:
    digits = []
    for u in reversed(ubs):
        digits.append(row % (u + 1))
        row //= (u + 1)
    return list(reversed(digits))


def _mixed_radix(ubs: list[int]) -> np.ndarray:
    """(prod(ub+1), len(ubs)) matrix of all digit combinations."""
    n = int(np.prod([u + 1 for u in ubs])) if ubs else 1
    if not ubs:
        return np.zeros((1, 0), dtype=np.int64)
    idx = np.arange(n, dtype=np.int64)
    out = np.empty((n, len(ubs)), dtype=np.int64)
    for pos in range(len(ubs) - 1, -1, -1):
        base = ubs[pos] + 1
        out[:, pos] = idx % base
        idx //= base
    return out


def _enumerate_side(inst: ProblemInstance, pos, ubs, open_js, side: str):
    digits = _mixed_radix(ubs)
    nvar = len(pos)
    m_n = inst.num_vehicles
    j_open = open_js
    if side == "out":
        pen = np.array([inst.shortage_penalty[k] for _, _, k in pos])
        cost = np.array([inst.cost_out[j, k] for _, j, k in pos])
        times = np.array([inst.time_out[m, j, k] for m, j, k in pos])
        ok = np.ones(len(digits), dtype=bool)
        for m in range(m_n):
            for k in range(inst.num_affected):
                sel = [v for v in range(nvar) if pos[v][0] == m and pos[v][2] == k]
                if sel:
                    ok &= digits[:, sel].sum(axis=1) <= inst.demand[m, k] + 1e-9
            sel = [v for v in range(nvar) if pos[v][0] == m]
            if sel:
                ok &= digits[:, sel].sum(axis=1) <= inst.vehicle_capacity[m] + 1e-9
        rows = np.flatnonzero(ok)
        if rows.size == 0:
            return None
        d = digits[rows]
        f1 = inst.total_shortage_cost() - d @ pen if nvar else \
            np.full(rows.size, inst.total_shortage_cost())
        f2 = d @ cost if nvar else np.zeros(rows.size)
        f3 = (d > 0) @ times if nvar else np.zeros(rows.size)
        sig = _signatures(d, pos, j_open, m_n, axis=1)
        return rows, np.maximum(f1, 0.0), f2, f3, sig
    else:
        cost = np.array([inst.cost_in[i, j] for _, i, j in pos]) if nvar else np.empty(0)
        times = np.array([inst.time_in[m, i, j] for m, i, j in pos]) if nvar else np.empty(0)
        ok = np.ones(len(digits), dtype=bool)
        for m in range(m_n):
            for i in range(inst.num_supply):
                sel = [v for v in range(nvar) if pos[v][0] == m and pos[v][1] == i]
                if sel:
                    ok &= digits[:, sel].sum(axis=1) <= inst.supply[m, i] + 1e-9
        rows = np.flatnonzero(ok)
        if rows.size == 0:
            return None
        d = digits[rows]
        f2 = d @ cost if nvar else np.zeros(rows.size)
        f3 = (d > 0) @ times if nvar else np.zeros(rows.size)
        sig = _signatures(d, pos, j_open, m_n, axis=2)
        return rows, f2, f3, sig


def _signatures(digits: np.ndarray, pos, j_open, m_n: int, axis: int) -> np.ndarray:
    """Per-(m, open j) flow totals used for the conservation join."""
    cols = []
    for m in range(m_n):
        for j in j_open:
            sel = [v for v in range(len(pos))
                   if pos[v][0] == m and pos[v][axis] == j]
            if sel:
                cols.append(digits[:, sel].sum(axis=1))
            else:
                cols.append(np.zeros(len(digits), dtype=np.int64))
    if not cols:
        return np.zeros((len(digits), 0), dtype=np.int64)
    return np.column_stack(cols)


def _group_rows(sig: np.ndarray) -> dict[bytes, np.ndarray]:
    out: dict[bytes, np.ndarray] = {}
    if sig.shape[0] == 0:
        return out
    if sig.shape[1] == 0:
        return {b"": np.arange(sig.shape[0])}
    uniq, inv = np.unique(sig, axis=0, return_inverse=True)
    order = np.argsort(inv, kind="stable")
    bounds = np.searchsorted(inv[order], np.arange(len(uniq)))
    bounds = np.append(bounds, len(inv))
    for g in range(len(uniq)):
        out[uniq[g].tobytes()] = order[bounds[g]:bounds[g + 1]]
    return out


def _pareto_2d(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Indices of the 2-D minimization front of (a, b), deterministic."""
    order = np.lexsort((b, a))
    keep = []
    best_b = INF
    for idx in order:
        if b[idx] < best_b - 1e-12:
            keep.append(int(idx))
            best_b = b[idx]
    return np.array(sorted(keep), dtype=int)
