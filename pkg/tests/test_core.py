import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from r2rlmoea.core import (
    RunConfig,
    clip_to_bounds,
    concat,
    derive_seed,
    make_population,
    random_population,
    stream,
)
from r2rlmoea.problems import get_problem
from r2rlmoea.r2rank import refresh, weights_for


def test_clip_saturates():
    out = clip_to_bounds([1.5, -2.0], [0.0, -1.0], [1.0, 1.0])
    assert out.tolist() == [1.0, -1.0]


def test_clip_in_bounds_is_identity():
    x = np.array([0.25, -0.5])
    assert np.array_equal(clip_to_bounds(x, [0.0, -1.0], [1.0, 1.0]), x)


def test_clip_dimension_mismatch():
    with pytest.raises(ValueError, match="dimension"):
        clip_to_bounds([0.1, 0.2, 0.3], [0.0, 0.0], [1.0, 1.0])


def test_clip_rejects_inverted_box():
    with pytest.raises(ValueError):
        clip_to_bounds([0.1], [1.0], [0.0])


finite = st.floats(-1e6, 1e6, allow_nan=False)


@settings(max_examples=100, deadline=None)
@given(arrays(np.float64, (4, 3), elements=finite), arrays(np.float64, (4, 3), elements=finite))
def test_clip_idempotent_and_monotone(x, dx):
    lower, upper = np.array([-1.0, 0.0, -2.0]), np.array([1.0, 0.5, 2.0])
    once = clip_to_bounds(x, lower, upper)
    assert np.array_equal(clip_to_bounds(once, lower, upper), once)
    assert np.all((once >= lower) & (once <= upper))
    bigger = clip_to_bounds(x + np.abs(dx), lower, upper)
    assert np.all(bigger >= once)


def test_random_population_inside_box():
    problem = get_problem("UF3")  # [0, 1]^n
    pop = random_population(problem, 3, stream(7, "init"))
    assert len(pop) == 3
    assert np.all((pop.x >= 0.0) & (pop.x <= 1.0))
    assert pop.generation == 0


def test_random_population_deterministic():
    problem = get_problem("UF4")
    a = random_population(problem, 10, stream(11, "init"))
    b = random_population(problem, 10, stream(11, "init"))
    assert np.array_equal(a.x, b.x) and np.array_equal(a.f, b.f)


def test_random_population_finite_objectives():
    problem = get_problem("UF1")
    pop = random_population(problem, 100, stream(3, "init"))
    assert pop.f.shape == (100, 2)
    assert np.all(np.isfinite(pop.f))


def test_streams_are_independent_of_other_purposes():
    a = stream(5, "init").random(4)
    stream(5, "operators").random(1000)
    assert np.array_equal(stream(5, "init").random(4), a)
    assert not np.array_equal(stream(5, "policy").random(4), a)
    assert derive_seed(5, "run", 0) == derive_seed(5, "run", 0)
    assert derive_seed(5, "run", 0) != derive_seed(5, "run", 1)


def test_run_config_defaults():
    cfg = RunConfig()
    expected = dict(
        n_pop=100, g_max=100, gamma=0.9, replay_size=100_000, batch_size=64, hidden_nodes=100,
        hidden_layers=2, eps_initial=0.9, eps_final=1e-3, power_p=3, target_sync=1000, n_action=5, n_states=20,
    )
    for key, value in expected.items():
        assert getattr(cfg, key) == value, key
    assert cfg.layer_sizes == [20, 100, 100, 5]


@pytest.mark.parametrize(
    "changes",
    [dict(eps_final=0.0), dict(eps_final=0.95), dict(eps_initial=1.5), dict(gamma=1.2), dict(gamma=-0.1), dict(seed=-1)],
)
def test_run_config_validation(changes):
    with pytest.raises(ValueError):
        RunConfig(**changes)


def test_individual_fields_after_ranking():
    problem = get_problem("UF2")
    pop = random_population(problem, 20, stream(1, "init"))
    ranked = refresh(pop, weights_for(2, 20))
    for ind in ranked:
        assert ind.l2_norm == pytest.approx(np.linalg.norm(ind.f), rel=1e-12)
        assert ind.performance == pytest.approx(ind.r2_rank + ind.l2_norm, rel=1e-12)
    assert len(ranked.members) == 20


def test_population_is_immutable():
    pop = make_population(np.zeros((2, 2)), np.ones((2, 2)), 0.1)
    with pytest.raises(dataclasses.FrozenInstanceError):
        pop.generation = 3  # type: ignore[misc]
    with pytest.raises(ValueError):
        pop.x[0, 0] = 1.0


def test_concat_keeps_order():
    a = make_population(np.zeros((2, 1)), np.zeros((2, 2)), 0.1)
    b = make_population(np.ones((3, 1)), np.ones((3, 2)), 0.2)
    c = concat(a, b)
    assert len(c) == 5
    assert c.x[:, 0].tolist() == [0, 0, 1, 1, 1]
