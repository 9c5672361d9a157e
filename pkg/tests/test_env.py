import csv

import numpy as np
import pytest

import oracles
from r2rlmoea.agent import DDQNAgent
from r2rlmoea.core import RunConfig, make_population, random_population, stream
from r2rlmoea.env import (
    EpisodeStats,
    compute_reward,
    encode_state,
    quartiles,
    reward_scale,
    run_episode,
    update_success,
)
from r2rlmoea.operators import OperatorId
from r2rlmoea.problems import get_problem
from r2rlmoea.r2rank import refresh, weights_for

SMALL = RunConfig(n_pop=20, g_max=12, batch_size=8, replay_size=200, target_sync=10)


def ranked_pop(name="UF1", seed=0, n=20):
    p = get_problem(name)
    return refresh(random_population(p, n, stream(seed, "init")), weights_for(p.n_obj, n))


def test_degenerate_population_state_is_zero_not_nan():
    pop = make_population(np.full((10, 3), 0.5), np.full((10, 2), 1.0), 0.1)
    pop = refresh(pop, weights_for(2, 10))
    stats = EpisodeStats()
    stats.observe(pop)
    s = encode_state(pop, stats, 0, 100)
    assert not np.any(np.isnan(s))
    assert s[:5].tolist() == [0.0] * 5
    assert s[6:10].tolist() == [0.0] * 4


def test_s6_generation_fraction():
    pop = ranked_pop()
    stats = EpisodeStats()
    stats.observe(pop)
    assert encode_state(pop, stats, 25, 100)[5] == 0.75


def test_s11_and_s16_from_counts():
    pop = ranked_pop()
    stats = EpisodeStats()
    stats.observe(pop)
    stats.counts[OperatorId.EO] = 20
    assert encode_state(pop, stats, 30, 100)[10] == 0.2
    stats.counts[OperatorId.EO] = 4
    stats.successes[OperatorId.EO] = 3
    assert encode_state(pop, stats, 30, 100)[15] == pytest.approx(3 / (4 + 1e-6), rel=1e-15)
    assert encode_state(pop, stats, 30, 100)[15] == pytest.approx(0.74999981, abs=1e-8)


def test_quartile_features_match_sort_oracle():
    rng = np.random.default_rng(0)
    for seed in range(20):
        pop = ranked_pop("UF3", seed, n=int(rng.integers(5, 40)))
        stats = EpisodeStats(f_min=float(pop.performance.min()) - 0.5, f_max=float(pop.performance.max()) + 1.0)
        stats.x_min, stats.x_max = pop.x[0], pop.x[-1]
        q = oracles.quartiles(pop.performance.tolist())
        qm = sum(q) / 3
        expected = [(v - stats.f_min) / (stats.f_max - stats.f_min) for v in q + [qm]]
        s = encode_state(pop, stats, 0, 100)
        np.testing.assert_allclose(s[:4], expected, rtol=1e-12, atol=1e-12)
        np.testing.assert_allclose(quartiles(pop.performance)[:3], q, rtol=1e-12)


def test_s5_uses_half_min_half_max_spread():
    pop = ranked_pop()
    stats = EpisodeStats(f_min=0.0, f_max=10.0)
    stats.x_min, stats.x_max = pop.x[0], pop.x[-1]
    half = [0.0] * 10 + [10.0] * 10
    assert encode_state(pop, stats, 0, 100)[4] == pytest.approx(np.std(pop.performance) / np.std(half), rel=1e-12)


def test_reward_examples():
    cfg = RunConfig()
    assert compute_reward(1.0, 2.0, 0, 100, cfg) == 1.0
    assert compute_reward(1.0, 2.0, 100, 100, cfg) == 5.0
    assert compute_reward(1.0, 2.0, 50, 100, cfg) == 4.5
    assert compute_reward(2.0, 1.0, 50, 100, cfg) == 0.0
    assert compute_reward(1.0, 1.0, 50, 100, cfg) == 0.0


def test_reward_direction_switch():
    cfg = RunConfig(reward_direction="increase")
    assert compute_reward(2.0, 1.0, 100, 100, cfg) == 5.0
    assert compute_reward(1.0, 2.0, 100, 100, cfg) == 0.0


def test_reward_scale_strictly_increasing():
    values = [reward_scale(g, 100) for g in range(101)]
    assert values[0] == 1.0 and values[-1] == 5.0
    assert all(b > a for a, b in zip(values, values[1:]))


def test_update_success_branches():
    stats = EpisodeStats()
    update_success(stats, OperatorId.EO, 1.0, 2.0)
    assert stats.counts[0] == 1 and stats.successes[0] == 1
    update_success(stats, OperatorId.EO, 3.0, 2.0)
    assert stats.counts[0] == 2 and stats.successes[0] == 1
    with pytest.raises(ValueError):
        update_success(stats, 9, 1.0, 2.0)


def test_fixed_mode_uses_one_operator():
    log = run_episode(get_problem("UF1"), SMALL, "fixed", seed=1, fixed_op=OperatorId.GA)
    assert log.operators == [int(OperatorId.GA)] * SMALL.g_max
    assert len(log.records) == SMALL.g_max
    assert len(log.final_population) == SMALL.n_pop


@pytest.mark.parametrize("mode", ["random", "train", "eval"])
def test_episode_contract_and_state_bounds(mode):
    p = get_problem("UF8")
    agent = DDQNAgent.create(SMALL, stream(0, "agent")) if mode in ("train", "eval") else None
    log = run_episode(p, SMALL, mode, seed=2, agent=agent, epsilon=0.5)
    assert [r.generation for r in log.records] == list(range(1, SMALL.g_max + 1))
    assert len(log.final_population) == SMALL.n_pop
    states = np.array([r.state for r in log.records])
    assert np.all(np.isfinite(states))
    assert np.all((states[:, :6] >= 0) & (states[:, :6] <= 1))
    assert np.all((states[:, 10:] >= 0) & (states[:, 10:] <= 1))
    assert np.all(states[:, 6:10] >= 0)
    for r in log.records:
        assert r.reward == 0.0 or r.reward == reward_scale(r.generation, SMALL.g_max)
    if mode == "train":
        assert len(log.losses) == SMALL.g_max - SMALL.batch_size + 1


def test_training_marks_final_transition_terminal():
    agent = DDQNAgent.create(SMALL, stream(0, "agent"))
    run_episode(get_problem("UF2"), SMALL, "train", seed=0, agent=agent, epsilon=1.0)
    terminal = [t.terminal for t in agent.buffer.items()]
    assert terminal == [False] * (SMALL.g_max - 1) + [True]


def test_success_ratio_never_exceeds_one():
    log = run_episode(get_problem("UF4"), SMALL, "random", seed=5)
    for r in log.records:
        assert np.all(r.state[15:] <= 1.0)


def test_eval_episode_is_bit_identical():
    agent = DDQNAgent.create(SMALL, stream(4, "agent"))
    a = run_episode(get_problem("UF6"), SMALL, "eval", seed=9, agent=agent)
    b = run_episode(get_problem("UF6"), SMALL, "eval", seed=9, agent=agent)
    assert a.operators == b.operators
    assert [r.reward for r in a.records] == [r.reward for r in b.records]
    assert np.array_equal(np.array([r.state for r in a.records]), np.array([r.state for r in b.records]))
    assert np.array_equal(a.final_population.x, b.final_population.x)


def test_episode_extremes_are_monotone():
    pop = ranked_pop()
    stats = EpisodeStats()
    lows, highs = [], []
    rng = np.random.default_rng(0)
    for _ in range(10):
        shifted = pop.replace(performance=pop.performance + rng.normal(0.0, 1.0))
        stats.observe(shifted)
        lows.append(stats.f_min)
        highs.append(stats.f_max)
    assert all(b <= a for a, b in zip(lows, lows[1:]))
    assert all(b >= a for a, b in zip(highs, highs[1:]))


def test_mode_errors():
    p = get_problem("UF1")
    with pytest.raises(ValueError):
        run_episode(p, SMALL, "bogus")
    with pytest.raises(ValueError):
        run_episode(p, SMALL, "eval")
    with pytest.raises(ValueError):
        run_episode(p, SMALL, "fixed")


def test_episode_log_csv(tmp_path):
    log = run_episode(get_problem("UF1"), SMALL, "random", seed=0)
    path = log.write_csv(tmp_path / "log.csv")
    with path.open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["generation", "operator", "reward", "quartile_mean"] + [f"s{i}" for i in range(1, 21)]
    assert len(rows) == SMALL.g_max + 1
    assert rows[1][1] in {op.name for op in OperatorId}
