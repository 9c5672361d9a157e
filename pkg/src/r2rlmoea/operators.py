"""One-generation step functions for the five single-objective EAs.

Every operator reads ``performance`` (lower is better) wherever its
single-objective original reads fitness, produces ``n_pop`` offspring,
and hands parents plus offspring to R2 survivor selection.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, fields

import numpy as np

from .core import Population, clip_to_bounds, concat, make_population
from .r2rank import EPSILON_REF, r2_ranks, rank_population, update_ideal, update_reference_points


class OperatorId(enum.IntEnum):
    EO = 0
    WOA = 1
    TLBO = 2
    ES = 3
    GA = 4


@dataclass
class OperatorParams:
    ga_crossover_prob: float = 0.9
    ga_sbx_eta: float = 20.0
    ga_mutation_prob: float | None = None  # None means 1/n
    ga_mutation_eta: float = 20.0
    es_parent_fraction: float = 0.5
    es_sigma0: float = 0.1
    es_mixing: int | None = None  # parents per recombination; None means all mu
    es_learning_rate: float | None = None  # None means 1/sqrt(2n)
    woa_b: float = 1.0
    woa_a_initial: float = 2.0
    eo_a1: float = 2.0
    eo_a2: float = 1.0
    eo_gp: float = 0.5
    eo_pool_size: int = 4
    epsilon_ref: float = EPSILON_REF

    def __post_init__(self) -> None:
        for name in ("ga_crossover_prob", "eo_gp", "es_parent_fraction"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.ga_mutation_prob is not None and not 0.0 <= self.ga_mutation_prob <= 1.0:
            raise ValueError("ga_mutation_prob must lie in [0, 1]")
        if self.ga_sbx_eta <= 0 or self.ga_mutation_eta <= 0:
            raise ValueError("distribution indices must be positive")
        if self.es_mixing is not None and self.es_mixing < 1:
            raise ValueError("es_mixing must be at least 1")
        if self.eo_pool_size != 4:
            raise ValueError("the equilibrium pool holds exactly four candidates plus their average")

    @classmethod
    def keys(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))


# --- GA ---------------------------------------------------------------------


def binary_tournament(perf: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.integers(0, perf.size, k)
    b = rng.integers(0, perf.size, k)
    return np.where(perf[b] < perf[a], b, a)


def sbx(p1, p2, lower, upper, eta: float, prob: float, rng: np.random.Generator):
    """Bounded simulated binary crossover on paired rows."""
    c1, c2 = p1.copy(), p2.copy()
    n_pairs, n = p1.shape
    do_pair = rng.random(n_pairs) < prob
    u = rng.random((n_pairs, n))
    swap = rng.random((n_pairs, n)) < 0.5
    per_var = rng.random((n_pairs, n)) < 0.5
    mask = do_pair[:, None] & per_var & (np.abs(p1 - p2) > 1e-14)
    if not np.any(mask):
        return c1, c2
    y1 = np.minimum(p1, p2)
    y2 = np.maximum(p1, p2)
    span = np.where(mask, y2 - y1, 1.0)
    lo = np.broadcast_to(lower, p1.shape)
    hi = np.broadcast_to(upper, p1.shape)

    def child(beta):
        alpha = 2.0 - beta ** -(eta + 1.0)
        bq = np.where(
            u <= 1.0 / alpha,
            (u * alpha) ** (1.0 / (eta + 1.0)),
            (1.0 / np.maximum(2.0 - u * alpha, 1e-300)) ** (1.0 / (eta + 1.0)),
        )
        return bq

    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        beta1 = 1.0 + 2.0 * (y1 - lo) / span
        beta2 = 1.0 + 2.0 * (hi - y2) / span
        ch1 = 0.5 * (y1 + y2 - child(beta1) * span)
        ch2 = 0.5 * (y1 + y2 + child(beta2) * span)
    ch1 = np.clip(ch1, lo, hi)
    ch2 = np.clip(ch2, lo, hi)
    a = np.where(swap, ch2, ch1)
    b = np.where(swap, ch1, ch2)
    c1 = np.where(mask, a, c1)
    c2 = np.where(mask, b, c2)
    return c1, c2


def polynomial_mutation(x, lower, upper, eta: float, prob: float, rng: np.random.Generator) -> np.ndarray:
    x = x.copy()
    mask = rng.random(x.shape) < prob
    if not np.any(mask):
        return x
    lo = np.broadcast_to(lower, x.shape)
    hi = np.broadcast_to(upper, x.shape)
    span = np.where(hi > lo, hi - lo, 1.0)
    d1 = (x - lo) / span
    d2 = (hi - x) / span
    u = rng.random(x.shape)
    p = 1.0 / (eta + 1.0)
    left = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1) ** (eta + 1.0)
    right = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2) ** (eta + 1.0)
    dq = np.where(u < 0.5, left**p - 1.0, 1.0 - right**p)
    return np.where(mask, np.clip(x + dq * span, lo, hi), x)


def ga_offspring(pop: Population, problem, params: OperatorParams, rng: np.random.Generator):
    n = len(pop)
    n_pairs = (n + 1) // 2
    parents = binary_tournament(pop.performance, 2 * n_pairs, rng)
    p1, p2 = pop.x[parents[0::2]], pop.x[parents[1::2]]
    c1, c2 = sbx(p1, p2, problem.lower, problem.upper, params.ga_sbx_eta, params.ga_crossover_prob, rng)
    kids = np.empty((2 * n_pairs, problem.dim))
    kids[0::2], kids[1::2] = c1, c2
    pm = params.ga_mutation_prob if params.ga_mutation_prob is not None else 1.0 / problem.dim
    kids = polynomial_mutation(kids, problem.lower, problem.upper, params.ga_mutation_eta, pm, rng)
    return kids[:n], pop.sigma[parents[:n]]


# --- ES ---------------------------------------------------------------------


def es_offspring(pop: Population, problem, params: OperatorParams, rng: np.random.Generator):
    """Self-adaptive (mu/rho + lambda) ES with intermediate recombination.

    With the default ``rho = mu`` every offspring mutates the centroid of
    the ``mu`` best parents. Step sizes are relative to the box width.
    """
    n = len(pop)
    mu = max(2, int(round(params.es_parent_fraction * n)))
    rho = mu if params.es_mixing is None else min(params.es_mixing, mu)
    tau = params.es_learning_rate if params.es_learning_rate is not None else 1.0 / np.sqrt(2.0 * problem.dim)
    # the population is sorted best-first
    if rho == mu:
        x_bar = np.broadcast_to(pop.x[:mu].mean(axis=0), (n, problem.dim))
        s_bar = np.full(n, pop.sigma[:mu].mean())
    else:
        picks = np.argsort(rng.random((n, mu)), axis=1)[:, :rho]
        x_bar = pop.x[picks].mean(axis=1)
        s_bar = pop.sigma[picks].mean(axis=1)
    sigma = s_bar * np.exp(tau * rng.standard_normal(n))
    noise = rng.standard_normal((n, problem.dim)) * (problem.upper - problem.lower)
    return x_bar + sigma[:, None] * noise, sigma


# --- TLBO -------------------------------------------------------------------


def teacher_phase(x: np.ndarray, perf: np.ndarray, rng: np.random.Generator, r=None, tf=None) -> np.ndarray:
    n, d = x.shape
    teacher = x[np.argmin(perf)]
    mean = x.mean(axis=0)
    if r is None:
        r = rng.random((n, d))
    if tf is None:
        tf = rng.integers(1, 3, n)
    tf = np.broadcast_to(np.asarray(tf, dtype=np.float64), (n,))
    return x + r * (teacher - tf[:, None] * mean)


def learner_phase(x: np.ndarray, perf: np.ndarray, rng: np.random.Generator, partner=None, r=None) -> np.ndarray:
    n, d = x.shape
    if partner is None:
        partner = (np.arange(n) + rng.integers(1, n, n)) % n
    if r is None:
        r = rng.random((n, d))
    other = x[partner]
    toward = np.where((perf < perf[partner])[:, None], x - other, other - x)
    return x + r * toward


def _greedy(current: Population, cand_x, problem, weights, refs, sigma) -> Population:
    """Keep each candidate only if it out-performs the individual it replaces."""
    cand = make_population(cand_x, problem.evaluate(cand_x), sigma)
    refs = update_ideal(refs, cand.f)
    both = concat(current, cand)
    ranked_perf = _performance_in(both, weights, refs)
    n = len(current)
    better = ranked_perf[n:] < ranked_perf[:n]
    x = np.where(better[:, None], cand.x, current.x)
    f = np.where(better[:, None], cand.f, current.f)
    out = make_population(x, f, current.sigma, refs=refs)
    perf = np.where(better, ranked_perf[n:], ranked_perf[:n])
    return out.replace(performance=perf)


def _performance_in(pop: Population, weights, refs) -> np.ndarray:
    # performance of every row of `pop`, in its original order
    l2 = np.linalg.norm(pop.f, axis=1)
    return r2_ranks(pop.f, l2, weights, refs.z_star, refs.z_nad) + l2


def tlbo_offspring(pop: Population, problem, weights, params: OperatorParams, rng: np.random.Generator):
    refs = pop.refs
    x1 = clip_to_bounds(teacher_phase(pop.x, pop.performance, rng), problem.lower, problem.upper)
    stage = _greedy(pop, x1, problem, weights, refs, pop.sigma)
    x2 = clip_to_bounds(learner_phase(stage.x, stage.performance, rng), problem.lower, problem.upper)
    stage = _greedy(stage, x2, problem, weights, stage.refs, pop.sigma)
    return stage.x, pop.sigma.copy()


# --- WOA --------------------------------------------------------------------


def whale_positions(x, best, a_coef, r1, r2, p, l, rand_idx, b: float = 1.0) -> np.ndarray:
    """Encircling, random search or spiral move for each whale (row)."""
    big_a = 2.0 * a_coef * r1 - a_coef
    c = 2.0 * r2
    encircle = best - big_a[:, None] * np.abs(c[:, None] * best - x)
    xr = x[rand_idx]
    search = xr - big_a[:, None] * np.abs(c[:, None] * xr - x)
    spiral = np.abs(best - x) * (np.exp(b * l) * np.cos(2.0 * np.pi * l))[:, None] + best
    shrink = np.where((np.abs(big_a) < 1.0)[:, None], encircle, search)
    return np.where((p < 0.5)[:, None], shrink, spiral)


def woa_offspring(pop: Population, problem, params: OperatorParams, rng: np.random.Generator, g_max: int):
    n = len(pop)
    a_coef = params.woa_a_initial * (1.0 - pop.generation / g_max)
    r1, r2, p = rng.random(n), rng.random(n), rng.random(n)
    l = rng.uniform(-1.0, 1.0, n)
    rand_idx = rng.integers(0, n, n)
    best = pop.x[np.argmin(pop.performance)]
    return whale_positions(pop.x, best, a_coef, r1, r2, p, l, rand_idx, params.woa_b), pop.sigma.copy()


# --- EO ---------------------------------------------------------------------


def equilibrium_pool(x: np.ndarray, perf: np.ndarray, size: int = 4) -> np.ndarray:
    best = x[np.argsort(perf, kind="stable")[:size]]
    return np.vstack([best, best.mean(axis=0)])


def equilibrium_positions(c, c_eq, f_exp, g_rate, lam, volume: float = 1.0) -> np.ndarray:
    """Concentration update; ``f_exp`` is the exponential term, ``g_rate`` the generation rate."""
    return c_eq + (c - c_eq) * f_exp + (g_rate / (lam * volume)) * (1.0 - f_exp)


def eo_offspring(pop: Population, problem, params: OperatorParams, rng: np.random.Generator, g_max: int):
    n, d = pop.x.shape
    pool = equilibrium_pool(pop.x, pop.performance, params.eo_pool_size)
    frac = pop.generation / g_max
    t = (1.0 - frac) ** (params.eo_a2 * frac)
    c_eq = pool[rng.integers(0, pool.shape[0], n)]
    lam = rng.random((n, d))
    r = rng.random((n, d))
    f_exp = params.eo_a1 * np.sign(r - 0.5) * (np.exp(-lam * t) - 1.0)
    r1, r2 = rng.random(n), rng.random(n)
    gcp = np.where(r2 >= params.eo_gp, 0.5 * r1, 0.0)
    g_rate = gcp[:, None] * (c_eq - lam * pop.x) * f_exp
    # lam is drawn from [0, 1); a zero would divide by zero
    lam = np.maximum(lam, 1e-12)
    return equilibrium_positions(pop.x, c_eq, f_exp, g_rate, lam), pop.sigma.copy()


# --- shared step ------------------------------------------------------------


def survivor_selection(merged: Population, n: int) -> Population:
    """Best ``n`` of an already ranked population, unique rows first.

    Exact copies of an earlier row are used only when there are fewer than
    ``n`` distinct rows. The result keeps ``(r2_rank, l2_norm)`` order.
    """
    dup = _duplicate_mask_in_order(merged.x)
    order = np.concatenate([np.flatnonzero(~dup), np.flatnonzero(dup)])[:n]
    return merged.take(np.sort(order))


def _duplicate_mask_in_order(x: np.ndarray) -> np.ndarray:
    # a row is a duplicate if an identical row appears earlier
    _, first, inverse = np.unique(x, axis=0, return_index=True, return_inverse=True)
    return first[inverse.ravel()] != np.arange(x.shape[0])


def step(
    op_id,
    pop: Population,
    problem,
    weights: np.ndarray,
    params: OperatorParams,
    rng: np.random.Generator,
    g_max: int,
) -> Population:
    """Advance a ranked population by one generation with operator ``op_id``."""
    try:
        op = OperatorId(int(op_id))
    except ValueError:
        raise ValueError(f"unknown operator id {op_id!r}") from None
    if op is OperatorId.GA:
        kids, sigma = ga_offspring(pop, problem, params, rng)
    elif op is OperatorId.ES:
        kids, sigma = es_offspring(pop, problem, params, rng)
    elif op is OperatorId.TLBO:
        kids, sigma = tlbo_offspring(pop, problem, weights, params, rng)
    elif op is OperatorId.WOA:
        kids, sigma = woa_offspring(pop, problem, params, rng, g_max)
    else:
        kids, sigma = eo_offspring(pop, problem, params, rng, g_max)
    kids = clip_to_bounds(kids, problem.lower, problem.upper)
    offspring = make_population(kids, problem.evaluate(kids), sigma)
    merged = concat(pop, offspring)
    refs = update_ideal(pop.refs, merged.f, params.epsilon_ref)
    ranked = rank_population(merged, weights, refs)
    survivors = survivor_selection(ranked, len(pop))
    refs = update_reference_points(survivors.f, survivors.r2_rank, refs, params.epsilon_ref)
    out = rank_population(survivors, weights, refs)
    return out.replace(generation=pop.generation + 1)


def random_select(rng: np.random.Generator) -> OperatorId:
    return OperatorId(int(rng.integers(0, len(OperatorId))))
