import numpy as np
import pytest

from reliefopt._kernels import BACKEND, pure

native = pytest.importorskip("reliefopt._kernels._native",
                             reason="compiled kernels not built")


def random_flow_case(rng):
    M, I, J, K = (int(x) for x in rng.integers(1, 4, size=4))
    q = rng.random((M, I, J)) * 3
    y = rng.random((M, J, K)) * 3
    q[rng.random(q.shape) < 0.3] = 0.0
    y[rng.random(y.shape) < 0.3] = 0.0
    return dict(
        open_mask=(rng.random(J) < 0.7).astype(np.uint8),
        flow_in=q, flow_out=y,
        setup_cost=rng.random(J) * 5, penalty=rng.random(K) * 5,
        demand=rng.random((M, K)) * 5,
        cost_in=rng.random((I, J)), cost_out=rng.random((J, K)),
        time_in=rng.random((M, I, J)), time_out=rng.random((M, J, K)),
        tol=1e-9,
    )


def test_evaluate_twins_agree():
    rng = np.random.default_rng(0)
    for _ in range(100):
        case = random_flow_case(rng)
        a = pure.evaluate_flows(**case)
        b = native.evaluate_flows(**case)
        assert np.allclose(a, b, rtol=1e-12, atol=1e-12)


def test_domination_twins_bit_equal():
    rng = np.random.default_rng(1)
    for _ in range(50):
        objs = np.ascontiguousarray(rng.integers(0, 5, size=(40, 3)).astype(float))
        assert np.array_equal(pure.domination_matrix(objs),
                              native.domination_matrix(objs))


def test_greedy_fill_twins_bit_equal():
    rng = np.random.default_rng(2)
    for _ in range(100):
        M, I, J, K = (int(x) for x in rng.integers(1, 4, size=4))
        demand = rng.integers(0, 5, size=(M, K)).astype(float)
        supply = rng.integers(0, 5, size=(M, I)).astype(float)
        cap_in = rng.integers(0, 5, size=(I, J)).astype(float)
        cap_out = rng.integers(0, 5, size=(J, K)).astype(float)
        vcap = rng.integers(1, 9, size=M).astype(float)
        adm = (rng.random((M, J, K)) < 0.8).astype(np.uint8)
        open_mask = (rng.random(J) < 0.7).astype(np.uint8)
        order = np.argsort(-rng.random(M * J * K), kind="stable").astype(np.int64)
        sup_order = np.argsort(rng.random((J, I)), axis=1,
                               kind="stable").astype(np.int64)
        qa, ya = np.zeros((M, I, J)), np.zeros((M, J, K))
        qb, yb = np.zeros((M, I, J)), np.zeros((M, J, K))
        pure.greedy_fill(order, open_mask, adm, demand, supply, cap_in, cap_out,
                         vcap, sup_order, qa, ya)
        native.greedy_fill(order, open_mask, adm, demand, supply, cap_in, cap_out,
                           vcap, sup_order, qb, yb)
        assert np.array_equal(qa, qb)
        assert np.array_equal(ya, yb)


def test_backend_selection_env(monkeypatch):
    # the selector honors the pure-python override on a fresh import
    import importlib
    import reliefopt._kernels as pkg
    monkeypatch.setenv("RELIEFOPT_PURE_PYTHON", "1")
    reloaded = importlib.reload(pkg)
    assert reloaded.BACKEND == "python"
    monkeypatch.delenv("RELIEFOPT_PURE_PYTHON")
    reloaded = importlib.reload(pkg)
    assert reloaded.BACKEND in ("cython", "python")
