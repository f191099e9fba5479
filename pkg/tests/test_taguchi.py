import numpy as np
import pytest

from conftest import integral_instance
from reliefopt.nsga2 import NsgaConfig
from reliefopt.taguchi import DEFAULT_FACTORS, TaguchiDesign, snr, taguchi_tune


def test_snr_constant_two():
    assert snr([2.0, 2.0, 2.0]) == pytest.approx(-6.0206, abs=1e-3)


def test_snr_zero_response_infinite():
    assert snr([0.0, 0.0]) == float("inf")


def test_default_factors_are_tuning_ranges():
    names = [n for n, _ in DEFAULT_FACTORS]
    assert names == ["crossover_rate", "mutation_rate", "population"]
    levels = dict(DEFAULT_FACTORS)
    assert levels["crossover_rate"] == [0.9, 0.75, 0.65]
    assert levels["mutation_rate"] == [0.30, 0.20, 0.10]
    assert levels["population"] == [150, 100, 50]


def test_full_factorial_row_count():
    design = TaguchiDesign()
    rows = design.rows()
    assert len(rows) == 27
    assert len({tuple(sorted(r.items())) for r in rows}) == 27


def test_l9_row_count_and_balance():
    design = TaguchiDesign(design="L9")
    rows = design.rows()
    assert len(rows) == 9
    # each level of each factor appears exactly 3 times
    for name, levels in design.factors:
        for lv in levels:
            assert sum(1 for r in rows if r[name] == lv) == 3


def test_empty_design_rejected():
    with pytest.raises(ValueError):
        TaguchiDesign(factors=[]).validate()


def planted_response(best):
    def evaluator(cfg: NsgaConfig, inst, rep_seed):
        rng = np.random.default_rng(rep_seed)
        off = 0.0
        off += 0.0 if cfg.crossover_rate == best["crossover_rate"] else 1.0
        off += 0.0 if cfg.mutation_rate == best["mutation_rate"] else 1.0
        off += 0.0 if cfg.population == best["population"] else 1.0
        return 0.1 + off + 0.01 * rng.random()
    return evaluator


@pytest.mark.parametrize("trial", range(10))
def test_planted_optimum_recovered(trial):
    best = {"crossover_rate": 0.75, "mutation_rate": 0.1, "population": 100}
    design = TaguchiDesign(replications=2)
    cfg, effects = taguchi_tune(design, [object()], seed=trial,
                                evaluator=planted_response(best))
    assert cfg.crossover_rate == best["crossover_rate"]
    assert cfg.mutation_rate == best["mutation_rate"]
    assert cfg.population == best["population"]


def test_real_pipeline_smoke(rng):
    # one tiny instance, shrunken design: exercises the SAW-based response
    inst = integral_instance(rng, 2, 2, 2, 1)
    design = TaguchiDesign(design="L9", replications=1)
    base = NsgaConfig(population=12, generations=3)
    factors = [("crossover_rate", [0.9, 0.75, 0.65]),
               ("mutation_rate", [0.3, 0.2, 0.1]),
               ("population", [16, 12, 8])]
    design.factors = factors
    cfg, effects = taguchi_tune(design, [inst], base_config=base, seed=1)
    assert cfg.population in (16, 12, 8)
    assert set(effects) == {"crossover_rate", "mutation_rate", "population"}
    assert all(len(v) == 3 for v in effects.values())


def test_tune_requires_instances():
    with pytest.raises(ValueError):
        taguchi_tune(TaguchiDesign(), [])
