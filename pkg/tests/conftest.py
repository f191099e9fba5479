import numpy as np
import pytest

from reliefopt.model import ProblemInstance


def integral_instance(rng, I, J, K, M, cap_hi=3, dem_hi=4, cost_hi=4,
                      full_coverage=False):
    """Random integral instance small enough for the enumeration oracle."""
    dist = rng.integers(1, 10, size=(J, K)).astype(float)
    radius = (np.full(M, 10.0) if full_coverage
              else rng.integers(4, 10, size=M).astype(float))
    speed = np.ones(M)
    return ProblemInstance(
        num_supply=I, num_centers=J, num_affected=K, num_vehicles=M,
        setup_cost=rng.integers(1, 6, size=J).astype(float),
        shortage_penalty=rng.integers(1, 6, size=K).astype(float),
        demand=rng.integers(1, dem_hi, size=(M, K)).astype(float),
        supply=rng.integers(1, dem_hi + 1, size=(M, I)).astype(float),
        cost_in=rng.integers(1, cost_hi + 1, size=(I, J)).astype(float),
        cost_out=rng.integers(1, cost_hi + 1, size=(J, K)).astype(float),
        cap_in=rng.integers(1, cap_hi + 1, size=(I, J)).astype(float),
        cap_out=rng.integers(1, cap_hi + 1, size=(J, K)).astype(float),
        vehicle_capacity=rng.integers(2, 9, size=M).astype(float),
        time_in=rng.integers(1, 8, size=(M, I, J)).astype(float),
        time_out=(dist[None, :, :] / speed[:, None, None]) * np.ones((M, J, K)),
        dist_out=dist, coverage_radius=radius, speed=speed,
        max_open_centers=J,
    )


def unit_instance(**overrides):
    """The 1x1x1x1 hand example: d=5, pi=2, c_in=1, c_out=3, F=10, t=4/6."""
    fields = dict(
        num_supply=1, num_centers=1, num_affected=1, num_vehicles=1,
        setup_cost=[10.0], shortage_penalty=[2.0], demand=[[5.0]],
        supply=[[5.0]], cost_in=[[1.0]], cost_out=[[3.0]],
        cap_in=[[10.0]], cap_out=[[10.0]], vehicle_capacity=[10.0],
        time_in=[[[4.0]]], time_out=[[[6.0]]], dist_out=[[5.0]],
        coverage_radius=[10.0], speed=[1.0], max_open_centers=1,
    )
    fields.update(overrides)
    return ProblemInstance(**fields)


def zero_demand_instance(J=1):
    return ProblemInstance(
        num_supply=1, num_centers=J, num_affected=2, num_vehicles=1,
        setup_cost=[3.0] * J, shortage_penalty=[2.0, 1.0],
        demand=[[0.0, 0.0]], supply=[[4.0]],
        cost_in=[[1.0] * J], cost_out=[[1.0, 1.0]] * J,
        cap_in=[[5.0] * J], cap_out=[[5.0, 5.0]] * J,
        vehicle_capacity=[9.0], time_in=[[[1.0] * J]],
        time_out=[[[1.0, 1.0]] * J], dist_out=[[1.0, 1.0]] * J,
        coverage_radius=[9.0], speed=[1.0], max_open_centers=J,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def tiny_instance(rng):
    return integral_instance(rng, 2, 2, 2, 1)
