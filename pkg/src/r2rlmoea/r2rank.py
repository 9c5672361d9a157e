"""R2-indicator machinery: weights, ASF, the indicator, ranking and reference points.

Ranking turns any single-objective operator into a multi-objective one:
each individual receives ``performance = r2_rank + ||f||_2`` which the
operators minimise like a scalar fitness.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .core import Population, ReferencePoints

ZERO_WEIGHT = 1e-6
RANGE_GUARD = 1e-12
EPSILON_REF = 1e-4


def simplex_lattice(m: int, divisions: int) -> np.ndarray:
    """All points of the ``m``-simplex lattice with ``divisions`` steps."""
    if m < 2 or divisions < 1:
        raise ValueError("need m >= 2 and divisions >= 1")
    rows = []
    # stars and bars: bar positions give the integer compositions of `divisions`
    for bars in itertools.combinations(range(divisions + m - 1), m - 1):
        edges = (-1,) + bars + (divisions + m - 1,)
        rows.append([edges[i + 1] - edges[i] - 1 for i in range(m)])
    w = np.array(rows, dtype=np.float64) / divisions
    return w[np.lexsort(w.T[::-1])]


def generate_weights(m: int, divisions: int) -> np.ndarray:
    """Simplex-lattice weights with zero components lifted to ``1e-6``.

    Every row is renormalised to unit 1-norm after the shift.
    """
    w = simplex_lattice(m, divisions)
    w = np.where(w == 0.0, ZERO_WEIGHT, w)
    return w / w.sum(axis=1, keepdims=True)


def divisions_for(m: int, n_pop: int) -> int:
    if m == 2:
        return max(1, n_pop - 1)
    h = 1
    while math.comb(h + m - 1, m - 1) < n_pop:
        h += 1
    return h


def weights_for(m: int, n_pop: int) -> np.ndarray:
    return generate_weights(m, divisions_for(m, n_pop))


def asf(f, w, z_star) -> float:
    f, w, z_star = (np.asarray(a, dtype=np.float64) for a in (f, w, z_star))
    if np.any(w <= 0.0):
        raise ValueError("weight components must be positive")
    return float(np.max(np.abs(f - z_star) / w))


def asf_matrix(f: np.ndarray, weights: np.ndarray, z_star) -> np.ndarray:
    """ASF of every point (columns) under every weight (rows)."""
    weights = np.asarray(weights, dtype=np.float64)
    if np.any(weights <= 0.0):
        raise ValueError("weight components must be positive")
    d = np.abs(np.asarray(f, dtype=np.float64) - np.asarray(z_star, dtype=np.float64))
    out = d[None, :, 0] / weights[:, 0, None]
    for k in range(1, d.shape[1]):
        np.maximum(out, d[None, :, k] / weights[:, k, None], out=out)
    return out


def r2_indicator(points, weights, z_star) -> float:
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    weights = np.atleast_2d(np.asarray(weights, dtype=np.float64))
    if points.shape[0] == 0 or weights.shape[0] == 0:
        raise ValueError("R2 needs a nonempty point set and weight set")
    return float(np.mean(asf_matrix(points, weights, z_star).min(axis=1)))


def normalize(f: np.ndarray, z_star, z_nad) -> np.ndarray:
    z_star = np.asarray(z_star, dtype=np.float64)
    span = np.maximum(np.asarray(z_nad, dtype=np.float64) - z_star, RANGE_GUARD)
    return (f - z_star) / span


def r2_ranks(f: np.ndarray, l2: np.ndarray, weights: np.ndarray, z_star, z_nad) -> np.ndarray:
    """Rank of each row: 1 + best position reached over all weights.

    For one weight, individuals are ordered by (ASF, L2 norm); tied keys
    share the position of the first member of the tie.
    """
    fn = normalize(f, z_star, z_nad)
    by_norm = np.argsort(l2, kind="stable")
    a = asf_matrix(fn[by_norm], weights, np.zeros(f.shape[1]))
    l2s = l2[by_norm]
    n = a.shape[1]
    # stable sort on ASF over norm-sorted columns == lexsort on (ASF, norm)
    order = np.argsort(a, axis=1, kind="stable")
    sa = np.take_along_axis(a, order, axis=1)
    sl = l2s[order]
    new_key = np.ones(a.shape, dtype=bool)
    new_key[:, 1:] = (sa[:, 1:] != sa[:, :-1]) | (sl[:, 1:] != sl[:, :-1])
    start = np.maximum.accumulate(np.where(new_key, np.arange(n), 0), axis=1)
    pos = np.empty_like(start)
    np.put_along_axis(pos, order, start, axis=1)
    ranks = np.empty(n, dtype=np.int64)
    ranks[by_norm] = pos.min(axis=0) + 1
    return ranks


def rank_population(pop: Population, weights: np.ndarray, refs: ReferencePoints | None = None) -> Population:
    """Fill rank, norm and performance and sort by ``(r2_rank, l2_norm)``.

    Objectives are normalised by the population's reference points (or
    ``refs`` when given) before scalarising against the origin.
    """
    if len(pop) == 0:
        raise ValueError("cannot rank an empty population")
    refs = refs if refs is not None else pop.refs
    if refs is None:
        refs = initial_reference_points(pop.f)
    l2 = np.linalg.norm(pop.f, axis=1)
    ranks = r2_ranks(pop.f, l2, weights, refs.z_star, refs.z_nad)
    order = np.lexsort((l2, ranks))
    ranked = pop.replace(r2_rank=ranks, l2_norm=l2, performance=ranks + l2, refs=refs)
    return ranked.take(order)


def initial_reference_points(f: np.ndarray, epsilon_ref: float = EPSILON_REF) -> ReferencePoints:
    ideal = f.min(axis=0)
    worst = f.max(axis=0)
    return ReferencePoints(ideal=ideal, worst=worst, z_star=ideal - epsilon_ref, z_nad=worst.copy())


def update_ideal(refs: ReferencePoints, f: np.ndarray, epsilon_ref: float = EPSILON_REF) -> ReferencePoints:
    """Fold new evaluations into the running minimum/maximum only."""
    ideal = np.minimum(refs.ideal, f.min(axis=0))
    worst = np.maximum(refs.worst, f.max(axis=0))
    return ReferencePoints(ideal=ideal, worst=worst, z_star=ideal - epsilon_ref, z_nad=refs.z_nad)


def update_reference_points(
    f: np.ndarray,
    ranks: np.ndarray | None,
    refs: ReferencePoints | None = None,
    epsilon_ref: float = EPSILON_REF,
) -> ReferencePoints:
    """Return updated utopian and nadir points.

    The nadir is the componentwise max over rank-1 individuals. When fewer
    than ``m`` distinct rank-1 vectors remain, it is moved halfway toward
    the historical worst so normalisation does not collapse.
    """
    f = np.asarray(f, dtype=np.float64)
    m = f.shape[1]
    if refs is None:
        refs = initial_reference_points(f, epsilon_ref)
    refs = update_ideal(refs, f, epsilon_ref)
    if ranks is None or not np.any(ranks == 1):
        front = f
    else:
        front = f[ranks == 1]
    nadir = front.max(axis=0)
    if np.unique(front, axis=0).shape[0] < m:
        nadir = nadir + 0.5 * (refs.worst - nadir)
    return ReferencePoints(ideal=refs.ideal, worst=refs.worst, z_star=refs.z_star, z_nad=nadir)


def refresh(pop: Population, weights: np.ndarray, epsilon_ref: float = EPSILON_REF) -> Population:
    """Rank, update reference points from rank 1, then rank again."""
    ranked = rank_population(pop, weights)
    refs = update_reference_points(ranked.f, ranked.r2_rank, ranked.refs, epsilon_ref)
    return rank_population(ranked, weights, refs)
