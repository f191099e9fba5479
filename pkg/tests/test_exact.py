import dataclasses

import numpy as np
import pytest

from conftest import integral_instance, unit_instance, zero_demand_instance
from reliefopt.exact import (
    EpsilonGrid, PayoffTable, TooLargeError, brute_force_front,
    epsilon_constraint_front, epsilon_grid, min_cost_transport, payoff_table,
    solve_single_objective,
)
from reliefopt.model import ObjectiveVector, Solution, check_feasibility, evaluate_objectives


def oracle_grid(front) -> EpsilonGrid:
    vecs = front.vectors()
    return EpsilonGrid(eps2=sorted(set(vecs[:, 1])), eps3=sorted(set(vecs[:, 2])))


# ---------------------------------------------------------------- payoff table

def test_payoff_zero_demand_all_zero():
    payoff = payoff_table(zero_demand_instance())
    for row in payoff.rows:
        assert row.as_tuple() == (0.0, 0.0, 0.0)


def test_payoff_unit_instance_min_f1_row():
    # brute force over integer flows 0..5: delivering everything is the only
    # f1 minimizer, lexicographic cleanup keeps (0, 30, 10)
    payoff = payoff_table(unit_instance())
    assert payoff.rows[0].as_tuple() == pytest.approx((0.0, 30.0, 10.0))


def test_payoff_diagonal_dominance(rng):
    for _ in range(5):
        inst = integral_instance(rng, 2, 2, 2, 1)
        payoff = payoff_table(inst)
        for q in (1, 2, 3):
            col = payoff.column(q)
            assert payoff.diagonal(q) <= min(col) + 1e-9


# ---------------------------------------------------------------- epsilon grid

def test_epsilon_grid_arithmetic_progression():
    payoff = PayoffTable(rows=[
        ObjectiveVector(1.0, 0.0, 11.0),
        ObjectiveVector(2.0, 0.0, 11.0),
        ObjectiveVector(3.0, 0.0, 0.0),
    ])
    grid = epsilon_grid(payoff, 10)
    assert grid.eps3 == pytest.approx(list(range(1, 11)))
    assert grid.eps2 == [0.0]          # degenerate column collapses


def test_epsilon_grid_reported_spacing():
    # spacing pattern of the published desk example: min 854.407, step 7.5103
    payoff = PayoffTable(rows=[
        ObjectiveVector(164.0, 0.0, 937.0203),
        ObjectiveVector(178.0, 1.0, 929.0),
        ObjectiveVector(923.0, 0.0, 854.407),
    ])
    grid = epsilon_grid(payoff, 10)
    assert grid.eps3[0] == pytest.approx(861.9173, abs=1e-4)
    assert grid.eps3[1] == pytest.approx(869.4276, abs=1e-4)
    steps = np.diff(grid.eps3)
    assert np.allclose(steps, 7.5103, atol=1e-4)


def test_epsilon_grid_strictly_increasing(rng):
    inst = integral_instance(rng, 2, 2, 2, 1)
    grid = epsilon_grid(payoff_table(inst), 10)
    for eps in (grid.eps2, grid.eps3):
        assert all(b > a for a, b in zip(eps, eps[1:])) or len(eps) == 1


# ---------------------------------------------------------- min cost transport

def test_min_cost_transport_no_active_arcs():
    inst = unit_instance()
    sol = min_cost_transport(inst, [0], active_arcs=(np.zeros((1, 1, 1), bool),
                                                     np.zeros((1, 1, 1), bool)))
    assert sol.flow_in.sum() == 0 and sol.flow_out.sum() == 0


def test_min_cost_transport_single_chain_bottleneck():
    inst = unit_instance(cap_in=[[10.0]], cap_out=[[10.0]], supply=[[7.0]],
                         demand=[[5.0]])
    # maximize delivery: negative weight on outbound flow
    w_in = np.zeros((1, 1, 1))
    w_out = -np.ones((1, 1, 1))
    sol = min_cost_transport(inst, [0], objective_weights=(w_in, w_out))
    assert sol.flow_out[0, 0, 0] == pytest.approx(5.0)
    assert sol.flow_in[0, 0, 0] == pytest.approx(5.0)


def test_min_cost_transport_matches_integer_enumeration():
    # 2 centers, 1 supply, 2 affected; asymmetric outbound costs
    inst = ProblemInstanceFactory()
    best = None
    cap = 3
    for y00 in range(cap + 1):
        for y01 in range(cap + 1):
            for y10 in range(cap + 1):
                for y11 in range(cap + 1):
                    y = np.array([[[y00, y01], [y10, y11]]], dtype=float)
                    tot = y.sum(axis=2)
                    q = np.zeros((1, 1, 2))
                    q[0, 0, :] = tot[0]
                    sol = Solution([True, True], q, y)
                    if not check_feasibility(inst, sol).feasible:
                        continue
                    # maximize total delivery, then cheapest transport
                    key = (-y.sum(), float(np.sum(inst.cost_in * q.sum(axis=0))
                                           + np.sum(inst.cost_out * y.sum(axis=0))))
                    if best is None or key < best[0]:
                        best = (key, sol)
    w_in = np.tile(inst.cost_in, (1, 1, 1))
    w_out = np.tile(inst.cost_out, (1, 1, 1)) - 1000.0   # deliver first, cheap second
    lp_sol = min_cost_transport(inst, [0, 1], objective_weights=(w_in, w_out))
    assert lp_sol.flow_out.sum() == pytest.approx(best[1].flow_out.sum())
    lp_cost = float(np.sum(inst.cost_in * lp_sol.flow_in.sum(axis=0))
                    + np.sum(inst.cost_out * lp_sol.flow_out.sum(axis=0)))
    assert lp_cost == pytest.approx(best[0][1])


def ProblemInstanceFactory():
    return dataclasses.replace(
        zero_demand_instance(J=2),
        demand=np.array([[2.0, 3.0]]),
        supply=np.array([[4.0]]),
        cost_out=np.array([[1.0, 5.0], [4.0, 1.0]]),
        cap_in=np.array([[3.0, 3.0]]),
        cap_out=np.array([[3.0, 3.0], [3.0, 3.0]]),
    )


# ------------------------------------------------------- single objective solve

def test_unconstrained_equals_payoff_row(rng):
    inst = integral_instance(rng, 2, 2, 2, 1)
    payoff = payoff_table(inst)
    sol = solve_single_objective(inst, 1)
    assert evaluate_objectives(inst, sol).f1 == pytest.approx(payoff.rows[0].f1)


def test_eps3_zero_forces_zero_flow(rng):
    inst = integral_instance(rng, 2, 2, 2, 1)
    sol = solve_single_objective(inst, 1, eps3=0.0)
    vec = evaluate_objectives(inst, sol)
    assert vec.f1 == pytest.approx(inst.total_shortage_cost())
    assert sol.flow_out.sum() == 0.0


def test_cell_optimum_matches_brute_force(rng):
    # least f1 among oracle points meeting the bounds, at a mid-grid cell
    inst = integral_instance(rng, 2, 2, 2, 1)
    oracle = brute_force_front(inst)
    vecs = oracle.vectors()
    e2 = float(np.median(vecs[:, 1]))
    e3 = float(np.median(vecs[:, 2]))
    sol = solve_single_objective(inst, 1, eps2=e2, eps3=e3)
    ok = vecs[(vecs[:, 1] <= e2 + 1e-9) & (vecs[:, 2] <= e3 + 1e-9)]
    if sol is None:
        assert len(ok) == 0
    else:
        vec = evaluate_objectives(inst, sol)
        assert vec.f1 == pytest.approx(ok[:, 0].min())
        assert vec.f2 <= e2 + 1e-6 and vec.f3 <= e3 + 1e-6


def test_budget_exceeded_raises(rng):
    from reliefopt.exact import BudgetExceededError
    inst = integral_instance(rng, 2, 3, 2, 2)
    with pytest.raises(BudgetExceededError):
        solve_single_objective(inst, 1, node_limit=2)


def test_timeout_raises(rng):
    from reliefopt.exact import SolveTimeout
    inst = integral_instance(rng, 3, 3, 3, 2)
    fake = iter(np.arange(0.0, 1e6, 0.5))
    with pytest.raises(SolveTimeout):
        solve_single_objective(inst, 1, deadline=1.0, clock=lambda: next(fake))


# ------------------------------------------------------------------ brute force

def test_brute_force_zero_demand():
    front = brute_force_front(zero_demand_instance())
    assert front.vector_set() == {(0.0, 0.0, 0.0)}


def test_brute_force_capacity_zero_arcs():
    inst = unit_instance(cap_out=[[0.0]])
    front = brute_force_front(inst)
    assert front.vector_set() == {(10.0, 0.0, 0.0)}


def test_brute_force_unit_instance_trade_curve():
    # flows 0..5 trade shortage against transport; all six points with the
    # cheapest activation pattern are mutually non-dominated
    front = brute_force_front(unit_instance())
    vecs = sorted(front.vector_set())
    assert (0.0, 30.0, 10.0) in vecs
    assert (10.0, 0.0, 0.0) in vecs
    f1s = sorted(v[0] for v in vecs)
    assert f1s == [0.0, 2.0, 4.0, 6.0, 8.0, 10.0]


def test_brute_force_too_large():
    rng = np.random.default_rng(0)
    inst = integral_instance(rng, 3, 3, 3, 2, cap_hi=3)
    with pytest.raises(TooLargeError):
        brute_force_front(inst, budget=1000)


# -------------------------------------------------------------------- the sweep

def test_sweep_zero_demand():
    front = epsilon_constraint_front(zero_demand_instance(), n=3)
    assert front.vector_set() == {(0.0, 0.0, 0.0)}


def test_sweep_points_feasible_and_nondominated(rng):
    inst = integral_instance(rng, 2, 3, 3, 2)
    front = epsilon_constraint_front(inst, n=4)
    vecs = front.vectors()
    assert len(front) <= 17
    for v, sol in front.points:
        assert check_feasibility(inst, sol).feasible
    # pairwise non-dominance
    from reliefopt.pareto import dominates
    for i in range(len(vecs)):
        for j in range(len(vecs)):
            if i != j:
                assert not dominates(tuple(vecs[i]), tuple(vecs[j]))


def test_sweep_equals_oracle_with_refined_grid(rng):
    for _ in range(4):
        inst = integral_instance(rng, 2, 2, 2, 1, cap_hi=2)
        oracle = brute_force_front(inst)
        front = epsilon_constraint_front(inst, grid=oracle_grid(oracle))
        assert front.vector_set(6) == oracle.vector_set(6)


def test_sweep_monotone_in_eps3(rng):
    inst = integral_instance(rng, 2, 2, 2, 1)
    payoff = payoff_table(inst)
    grid = epsilon_grid(payoff, 5)
    e2 = grid.eps2[-1]
    prev = np.inf
    for e3 in grid.eps3:
        sol = solve_single_objective(inst, 1, eps2=e2, eps3=e3)
        if sol is None:
            continue
        f1 = evaluate_objectives(inst, sol).f1
        assert f1 <= prev + 1e-9
        prev = f1


def test_sweep_deterministic(rng):
    inst = integral_instance(rng, 2, 3, 2, 1)
    a = epsilon_constraint_front(inst, n=3)
    b = epsilon_constraint_front(inst, n=3)
    assert np.array_equal(a.vectors(), b.vectors())


def test_front_files_roundtrip(tmp_path, rng):
    inst = integral_instance(rng, 2, 2, 2, 1)
    front = epsilon_constraint_front(inst, n=3)
    front.save_json(tmp_path / "front.json")
    front.save_csv(tmp_path / "front.csv")
    import csv as csvmod
    import json
    records = json.loads((tmp_path / "front.json").read_text())
    assert len(records) == len(front)
    assert set(records[0]) == {"f1", "f2", "f3", "open", "note"}
    with open(tmp_path / "front.csv") as fh:
        rows = list(csvmod.reader(fh))
    assert rows[0] == ["f1", "f2", "f3"]
    assert len(rows) == len(front) + 1
