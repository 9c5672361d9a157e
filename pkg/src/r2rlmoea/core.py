"""Shared domain types, bounds handling and seeded random streams."""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field, fields
from typing import Iterator

import numpy as np

N_ACTION = 5
N_STATES = 20


def stream(seed: int, *tags: int | str) -> np.random.Generator:
    """Return an independent generator for ``(seed, *tags)``.

    Each tag names a purpose ("init", "replay", a game index, ...). String
    tags are mapped to integers with CRC-32, so the stream for a given
    purpose never depends on how many draws other purposes made.
    """
    key = tuple(zlib.crc32(t.encode("utf-8")) if isinstance(t, str) else int(t) for t in tags)
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=key))


def derive_seed(seed: int, *tags: int | str) -> int:
    """Deterministic 63-bit child seed, used where a seed must be logged."""
    return int(stream(seed, *tags).integers(0, 2**63 - 1))


def clip_to_bounds(x, lower, upper) -> np.ndarray:
    """Saturate ``x`` (one vector or a batch of rows) into ``[lower, upper]``."""
    x = np.asarray(x, dtype=np.float64)
    lower = np.asarray(lower, dtype=np.float64)
    upper = np.asarray(upper, dtype=np.float64)
    if lower.shape != upper.shape or lower.ndim != 1:
        raise ValueError("lower and upper must be 1-D arrays of equal length")
    if x.shape[-1] != lower.shape[0]:
        raise ValueError(f"dimension mismatch: x has {x.shape[-1]} components, bounds have {lower.shape[0]}")
    if np.any(lower > upper):
        raise ValueError("every lower bound must be <= its upper bound")
    return np.minimum(upper, np.maximum(lower, x))


@dataclass(frozen=True)
class Individual:
    x: np.ndarray
    f: np.ndarray
    r2_rank: int = 0
    l2_norm: float = 0.0
    performance: float = 0.0


@dataclass(frozen=True)
class ReferencePoints:
    """Utopian/nadir state owned by one episode.

    ``ideal`` is the raw running minimum of every objective seen so far and
    ``worst`` the running maximum; ``z_star`` is ``ideal`` shifted down by
    the utopian offset.
    """

    ideal: np.ndarray
    worst: np.ndarray
    z_star: np.ndarray
    z_nad: np.ndarray


@dataclass(frozen=True)
class Population:
    """An ordered population stored column-wise as arrays.

    Rows of ``x``/``f`` are individuals. After ranking, rows are sorted by
    ``(r2_rank, l2_norm)``. ``sigma`` holds the per-individual mutation step
    size used by the ES operator.
    """

    x: np.ndarray
    f: np.ndarray
    r2_rank: np.ndarray
    l2_norm: np.ndarray
    performance: np.ndarray
    sigma: np.ndarray
    generation: int = 0
    refs: ReferencePoints | None = None

    def __post_init__(self) -> None:
        for name in ("x", "f", "r2_rank", "l2_norm", "performance", "sigma"):
            arr = getattr(self, name)
            if arr.flags.writeable:
                # private read-only copy so callers cannot mutate a population
                arr = arr.copy()
                arr.flags.writeable = False
                object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return self.x.shape[0]

    def __getitem__(self, i: int) -> Individual:
        return Individual(
            x=self.x[i],
            f=self.f[i],
            r2_rank=int(self.r2_rank[i]),
            l2_norm=float(self.l2_norm[i]),
            performance=float(self.performance[i]),
        )

    def __iter__(self) -> Iterator[Individual]:
        return (self[i] for i in range(len(self)))

    @property
    def members(self) -> list[Individual]:
        return list(self)

    @property
    def z_star(self) -> np.ndarray | None:
        return None if self.refs is None else self.refs.z_star

    @property
    def z_nad(self) -> np.ndarray | None:
        return None if self.refs is None else self.refs.z_nad

    def replace(self, **changes) -> "Population":
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values.update(changes)
        return Population(**values)

    def take(self, idx) -> "Population":
        idx = np.asarray(idx, dtype=np.intp)
        return self.replace(
            x=self.x[idx],
            f=self.f[idx],
            r2_rank=self.r2_rank[idx],
            l2_norm=self.l2_norm[idx],
            performance=self.performance[idx],
            sigma=self.sigma[idx],
        )


def make_population(x, f, sigma, generation: int = 0, refs: ReferencePoints | None = None) -> Population:
    """Build an unranked population (ranks 0, performance = norm)."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    f = np.ascontiguousarray(f, dtype=np.float64)
    n = x.shape[0]
    l2 = np.linalg.norm(f, axis=1)
    sigma = np.broadcast_to(np.asarray(sigma, dtype=np.float64), (n,)).copy()
    return Population(
        x=x,
        f=f,
        r2_rank=np.zeros(n, dtype=np.int64),
        l2_norm=l2,
        performance=l2.copy(),
        sigma=sigma,
        generation=generation,
        refs=refs,
    )


def concat(a: Population, b: Population) -> Population:
    """Parents first, then offspring; ranking fields are carried but stale."""
    return a.replace(
        x=np.vstack([a.x, b.x]),
        f=np.vstack([a.f, b.f]),
        r2_rank=np.concatenate([a.r2_rank, b.r2_rank]),
        l2_norm=np.concatenate([a.l2_norm, b.l2_norm]),
        performance=np.concatenate([a.performance, b.performance]),
        sigma=np.concatenate([a.sigma, b.sigma]),
    )


def random_population(problem, n_pop: int, rng: np.random.Generator, sigma0: float = 0.1) -> Population:
    """Uniform sample inside the problem box, evaluated, generation 0."""
    if n_pop <= 0:
        raise ValueError("n_pop must be positive")
    lower, upper = problem.lower, problem.upper
    x = lower + rng.random((n_pop, problem.dim)) * (upper - lower)
    return make_population(x, problem.evaluate(x), sigma0)


@dataclass
class RunConfig:
    """Run-wide hyperparameters; defaults follow the published settings."""

    n_pop: int = 100
    g_max: int = 100
    n_game: int = 2000
    gamma: float = 0.9
    replay_size: int = 100_000
    batch_size: int = 64
    hidden_nodes: int = 100
    hidden_layers: int = 2
    eps_initial: float = 0.9
    eps_final: float = 1e-3
    power_p: int = 3
    target_sync: int = 1000
    reward_c_initial: float = 1.0
    reward_c_final: float = 5.0
    seed: int = 0
    learning_rate: float = 1e-3
    reward_direction: str = "decrease"
    epsilon_ref: float = 1e-4
    # operator constant overrides, keyed by OperatorParams field name
    operator_params: dict = field(default_factory=dict)
    n_action: int = field(default=N_ACTION, init=False)
    n_states: int = field(default=N_STATES, init=False)

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        if not 0.0 < self.eps_final < self.eps_initial <= 1.0:
            raise ValueError("need 0 < eps_final < eps_initial <= 1")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")
        if self.n_pop < 2 or self.g_max < 1 or self.n_game < 1:
            raise ValueError("n_pop >= 2, g_max >= 1 and n_game >= 1 are required")
        if self.batch_size < 1 or self.replay_size < self.batch_size:
            raise ValueError("replay_size must be >= batch_size >= 1")
        if self.hidden_layers < 1 or self.hidden_nodes < 1:
            raise ValueError("the network needs at least one hidden layer")
        if self.reward_direction not in ("decrease", "increase"):
            raise ValueError("reward_direction must be 'decrease' or 'increase'")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    @property
    def layer_sizes(self) -> list[int]:
        return [self.n_states] + [self.hidden_nodes] * self.hidden_layers + [self.n_action]
