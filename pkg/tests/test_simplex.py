import numpy as np
import pytest

from reliefopt.simplex import LpResult, solve_lp

scipy = pytest.importorskip("scipy.optimize")


def test_simple_bounded_min():
    # min -x - y s.t. x + y <= 3, 0 <= x <= 2, 0 <= y <= 2
    res = solve_lp([-1.0, -1.0], A_ub=[[1.0, 1.0]], b_ub=[3.0],
                   lower=[0.0, 0.0], upper=[2.0, 2.0])
    assert res.status == "optimal"
    assert res.objective == pytest.approx(-3.0, abs=1e-9)


def test_equality_row():
    # min x + 2y s.t. x + y = 4, x <= 3
    res = solve_lp([1.0, 2.0], A_eq=[[1.0, 1.0]], b_eq=[4.0],
                   lower=[0.0, 0.0], upper=[3.0, np.inf])
    assert res.status == "optimal"
    assert res.objective == pytest.approx(5.0, abs=1e-9)
    assert np.allclose(res.x, [3.0, 1.0], atol=1e-9)


def test_infeasible_detected():
    res = solve_lp([1.0], A_eq=[[1.0]], b_eq=[5.0], lower=[0.0], upper=[2.0])
    assert res.status == "infeasible"


def test_raised_lower_bounds():
    # branching pattern: x >= 2 forces the more expensive route
    res = solve_lp([1.0, 10.0], A_eq=[[1.0, 1.0]], b_eq=[5.0],
                   lower=[2.0, 0.0], upper=[4.0, 5.0])
    assert res.status == "optimal"
    assert np.allclose(res.x, [4.0, 1.0], atol=1e-9)


def test_box_only_problem():
    res = solve_lp([1.0, -2.0], lower=[1.0, 0.0], upper=[3.0, 4.0])
    assert res.status == "optimal"
    assert np.allclose(res.x, [1.0, 4.0])


def test_degenerate_transport_polytope():
    # conservation with zero right-hand side starts fully degenerate
    A_eq = [[1.0, 1.0, -1.0, -1.0]]
    res = solve_lp([1.0, 2.0, 0.5, 0.5], A_eq=A_eq, b_eq=[0.0],
                   lower=np.zeros(4), upper=np.full(4, 2.0))
    assert res.status == "optimal"
    assert res.objective == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize("seed", range(8))
def test_random_against_scipy(seed):
    rng = np.random.default_rng(seed)
    for _ in range(40):
        n = int(rng.integers(2, 9))
        m_ub = int(rng.integers(0, 5))
        m_eq = int(rng.integers(0, 3))
        c = rng.normal(size=n).round(2)
        upper = rng.uniform(0.5, 5, size=n).round(2)
        lower = np.zeros(n)
        if rng.random() < 0.5:
            lower = (rng.uniform(0, 0.4, size=n) * upper).round(2)
        x_feas = lower + rng.random(n) * (upper - lower)
        A_ub = rng.normal(size=(m_ub, n)).round(2) if m_ub else None
        b_ub = (A_ub @ x_feas + rng.uniform(0, 2, size=m_ub)).round(2) if m_ub else None
        A_eq = rng.normal(size=(m_eq, n)).round(2) if m_eq else None
        b_eq = (A_eq @ x_feas).round(6) if m_eq else None
        res = solve_lp(c, A_ub, b_ub, A_eq, b_eq, lower, upper)
        ref = scipy.linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                            bounds=list(zip(lower, upper)), method="highs")
        if ref.status == 0:
            assert res.status == "optimal"
            assert res.objective == pytest.approx(ref.fun, abs=1e-6, rel=1e-6)
            # returned point must satisfy all constraints
            if A_ub is not None:
                assert np.all(A_ub @ res.x <= b_ub + 1e-7)
            if A_eq is not None:
                assert np.allclose(A_eq @ res.x, b_eq, atol=1e-7)
            assert np.all(res.x >= lower - 1e-9)
            assert np.all(res.x <= upper + 1e-9)
        else:
            assert res.status == "infeasible"


def test_determinism():
    rng = np.random.default_rng(99)
    n = 6
    c = rng.normal(size=n)
    A_ub = rng.normal(size=(3, n))
    b_ub = np.abs(rng.normal(size=3)) + 1
    results = [solve_lp(c, A_ub, b_ub, lower=np.zeros(n), upper=np.full(n, 2.0))
               for _ in range(3)]
    assert all(np.array_equal(results[0].x, r.x) for r in results[1:])
