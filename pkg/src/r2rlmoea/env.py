"""Reinforcement-learning environment around the R2 MOEA.

One episode (a "game") is a full run of ``g_max`` generations. At each
generation the policy observes a 20-feature state, picks one of the five
operators, and is rewarded when the mean of the performance quartiles
improves.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .agent import DDQNAgent, Transition, epsilon_schedule, select_action
from .core import N_ACTION, N_STATES, Population, RunConfig, random_population, stream
from .operators import OperatorId, OperatorParams, random_select, step
from .r2rank import refresh, weights_for

SUCCESS_EPS = 1e-6
DEGENERATE = 1e-12
MODES = ("train", "eval", "fixed", "random")


@dataclass
class EpisodeStats:
    f_min: float = np.inf
    f_max: float = -np.inf
    x_min: np.ndarray | None = None
    x_max: np.ndarray | None = None
    counts: np.ndarray = field(default_factory=lambda: np.zeros(N_ACTION, dtype=np.int64))
    successes: np.ndarray = field(default_factory=lambda: np.zeros(N_ACTION, dtype=np.int64))
    q_mean_prev: float = np.nan

    def observe(self, pop: Population) -> None:
        """Fold the current population into the episode-wide extremes."""
        i = int(np.argmin(pop.performance))
        j = int(np.argmax(pop.performance))
        if pop.performance[i] < self.f_min:
            self.f_min = float(pop.performance[i])
            self.x_min = pop.x[i].copy()
        if pop.performance[j] > self.f_max:
            self.f_max = float(pop.performance[j])
            self.x_max = pop.x[j].copy()


def quartiles(perf: np.ndarray) -> tuple[float, float, float, float]:
    """Q1, Q2, Q3 by linear interpolation at ``q*(N-1)`` and their mean."""
    q1, q2, q3 = np.percentile(perf, [25.0, 50.0, 75.0])
    return float(q1), float(q2), float(q3), float((q1 + q2 + q3) / 3.0)


def improved(q_mean_t: float, q_mean_prev: float, direction: str = "decrease") -> bool:
    if direction == "decrease":
        return bool(q_mean_t < q_mean_prev)
    return bool(q_mean_t > q_mean_prev)


def reward_scale(g_t: int, g_max: int, power: int = 3, c_initial: float = 1.0, c_final: float = 5.0) -> float:
    return ((g_max - g_t) / g_max) ** power * (c_initial - c_final) + c_final


def compute_reward(q_mean_t: float, q_mean_prev: float, g_t: int, g_max: int, cfg: RunConfig) -> float:
    if not improved(q_mean_t, q_mean_prev, cfg.reward_direction):
        return 0.0
    return reward_scale(g_t, g_max, cfg.power_p, cfg.reward_c_initial, cfg.reward_c_final)


def update_success(stats: EpisodeStats, op_id, q_mean_t: float, q_mean_prev: float, direction: str = "decrease") -> EpisodeStats:
    op = int(OperatorId(int(op_id)))
    stats.counts[op] += 1
    if improved(q_mean_t, q_mean_prev, direction):
        stats.successes[op] += 1
    return stats


def encode_state(pop: Population, stats: EpisodeStats, g_t: int, g_max: int) -> np.ndarray:
    perf = pop.performance
    s = np.zeros(N_STATES)
    q1, q2, q3, qm = quartiles(perf)
    span = stats.f_max - stats.f_min
    if span >= DEGENERATE:
        s[0:4] = (np.array([q1, q2, q3, qm]) - stats.f_min) / span
        n = perf.size
        extremes = np.concatenate([np.full(n // 2, stats.f_min), np.full(n - n // 2, stats.f_max)])
        sd_max = np.std(extremes)
        s[4] = np.std(perf) / sd_max if sd_max >= DEGENERATE else 0.0
    s[5] = (g_max - g_t) / g_max
    if stats.x_min is not None and stats.x_max is not None:
        scale = np.linalg.norm(stats.x_max - stats.x_min)
        if scale >= DEGENERATE:
            for k, q in enumerate((q1, q2, q3, qm)):
                # first individual whose performance is nearest the quartile value
                i = int(np.argmin(np.abs(perf - q)))
                s[6 + k] = np.linalg.norm(pop.x[i] - stats.x_min) / scale
    s[10:15] = stats.counts / g_max
    s[15:20] = stats.successes / (stats.counts + SUCCESS_EPS)
    s[0:6] = np.clip(s[0:6], 0.0, 1.0)
    s[10:20] = np.clip(s[10:20], 0.0, 1.0)
    return s


@dataclass(frozen=True)
class GenerationRecord:
    generation: int
    operator: int
    reward: float
    quartile_mean: float
    state: np.ndarray


@dataclass
class EpisodeLog:
    records: list[GenerationRecord]
    final_population: Population
    losses: list[float] = field(default_factory=list)

    @property
    def total_reward(self) -> float:
        return float(sum(r.reward for r in self.records))

    @property
    def operators(self) -> list[int]:
        return [r.operator for r in self.records]

    def write_csv(self, path) -> Path:
        path = Path(path)
        with path.open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["generation", "operator", "reward", "quartile_mean"] + [f"s{i}" for i in range(1, 21)])
            for r in self.records:
                w.writerow(
                    [r.generation, OperatorId(r.operator).name, repr(r.reward), repr(r.quartile_mean)]
                    + [repr(float(v)) for v in r.state]
                )
        return path


def run_episode(
    problem,
    cfg: RunConfig,
    mode: str = "eval",
    seed: int = 0,
    agent: DDQNAgent | None = None,
    fixed_op: OperatorId | int | None = None,
    epsilon: float | None = None,
    params: OperatorParams | None = None,
    weights: np.ndarray | None = None,
) -> EpisodeLog:
    """Play one game of ``cfg.g_max`` generations.

    ``train`` acts epsilon-greedily and updates ``agent`` after every
    generation; ``eval`` acts greedily with a frozen agent; ``fixed``
    always applies ``fixed_op``; ``random`` draws operators uniformly.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if mode in ("train", "eval") and agent is None:
        raise ValueError(f"mode {mode!r} needs an agent")
    if mode == "fixed":
        if fixed_op is None:
            raise ValueError("mode 'fixed' needs fixed_op")
        fixed_op = OperatorId(int(fixed_op))
    params = params or OperatorParams(**{**cfg.operator_params, "epsilon_ref": cfg.epsilon_ref})
    if weights is None:
        weights = weights_for(problem.n_obj, cfg.n_pop)
    if epsilon is None:
        epsilon = 0.0 if mode == "eval" else cfg.eps_final
    g_max = cfg.g_max

    init_rng = stream(seed, "init")
    op_rng = stream(seed, "operators")
    policy_rng = stream(seed, "policy")
    replay_rng = stream(seed, "replay")

    pop = random_population(problem, cfg.n_pop, init_rng, params.es_sigma0)
    pop = refresh(pop, weights, params.epsilon_ref)
    stats = EpisodeStats()
    stats.observe(pop)
    stats.q_mean_prev = quartiles(pop.performance)[3]
    state = encode_state(pop, stats, 0, g_max)

    records: list[GenerationRecord] = []
    losses: list[float] = []
    for g in range(g_max):
        if mode == "fixed":
            op = fixed_op
        elif mode == "random":
            op = random_select(policy_rng)
        else:
            eps = epsilon if mode == "train" else 0.0
            op = OperatorId(select_action(agent.q_values(state), eps, policy_rng))
        pop = step(op, pop, problem, weights, params, op_rng, g_max)
        stats.observe(pop)
        q_mean = quartiles(pop.performance)[3]
        g_t = pop.generation
        reward = compute_reward(q_mean, stats.q_mean_prev, g_t, g_max, cfg)
        update_success(stats, op, q_mean, stats.q_mean_prev, cfg.reward_direction)
        stats.q_mean_prev = q_mean
        next_state = encode_state(pop, stats, g_t, g_max)
        if mode == "train":
            loss = agent.observe(Transition(state, int(op), reward, next_state, g_t == g_max), replay_rng)
            if loss is not None:
                losses.append(loss)
        records.append(GenerationRecord(g_t, int(op), reward, q_mean, state))
        state = next_state
    return EpisodeLog(records, pop, losses)


def training_epsilon(game_index: int, cfg: RunConfig) -> float:
    return epsilon_schedule(game_index, cfg.n_game, cfg.eps_initial, cfg.eps_final, cfg.power_p)
