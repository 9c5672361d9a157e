"""Quality indicators, run summaries and the Friedman rank test."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist
from scipy.stats import chi2, rankdata


def _points(a, name: str) -> np.ndarray:
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    if a.shape[0] == 0 or a.size == 0:
        raise ValueError(f"{name} is empty")
    return a


def igd(solutions, reference) -> float:
    """Mean distance from every reference point to its nearest solution."""
    p = _points(solutions, "solution set")
    r = _points(reference, "reference set")
    if p.shape[1] != r.shape[1]:
        raise ValueError(f"objective dimension mismatch: {p.shape[1]} vs {r.shape[1]}")
    return float(np.mean(cKDTree(p).query(r)[0]))


def _nearest_neighbour_distances(p: np.ndarray) -> np.ndarray:
    d = cdist(p, p)
    np.fill_diagonal(d, np.inf)
    return d.min(axis=1)


def spacing(solutions) -> float:
    """sqrt(sum (D_i - D_mean)^2) / (n * D_mean) over nearest-neighbour distances."""
    p = _points(solutions, "solution set")
    n = p.shape[0]
    if n < 2:
        raise ValueError("spacing needs at least two solutions")
    d = _nearest_neighbour_distances(p)
    d_mean = d.mean()
    if d_mean <= 0.0:
        raise ValueError("spacing is undefined when all solutions coincide")
    return float(np.sqrt(np.sum((d - d_mean) ** 2)) / (n * d_mean))


def schott_spacing(solutions) -> float:
    """Schott's classical spacing (sample deviation of Manhattan nearest-neighbour distances)."""
    p = _points(solutions, "solution set")
    if p.shape[0] < 2:
        raise ValueError("spacing needs at least two solutions")
    d = cdist(p, p, metric="cityblock")
    np.fill_diagonal(d, np.inf)
    d = d.min(axis=1)
    return float(np.sqrt(np.sum((d - d.mean()) ** 2) / (p.shape[0] - 1)))


def dominates(a, b) -> bool:
    a, b = np.asarray(a), np.asarray(b)
    return bool(np.all(a <= b) and np.any(a < b))


def nondominated(f: np.ndarray) -> np.ndarray:
    """Boolean mask of rows that no other row dominates."""
    f = np.asarray(f, dtype=np.float64)
    le = np.all(f[:, None, :] <= f[None, :, :], axis=2)
    lt = np.any(f[:, None, :] < f[None, :, :], axis=2)
    dominated_by = le & lt  # [i, j]: i dominates j
    return ~dominated_by.any(axis=0)


def final_front(pop) -> np.ndarray:
    """Distinct, mutually non-dominated objective vectors among rank-1 members."""
    f = pop.f[pop.r2_rank == 1]
    f = np.unique(f, axis=0)
    return f[nondominated(f)]


def summarize(values) -> tuple[float, float, float]:
    """(mean, min, sample std); std is 0 for a single value."""
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        raise ValueError("nothing to summarize")
    std = float(np.std(v, ddof=1)) if v.size > 1 else 0.0
    return float(np.mean(v)), float(np.min(v)), std


@dataclass(frozen=True)
class FriedmanResult:
    statistic: float
    p_value: float
    mean_ranks: np.ndarray
    ranks: np.ndarray


def friedman(scores) -> FriedmanResult:
    """Friedman test on a blocks-by-treatments table (lower score ranks first).

    Ties receive mid-ranks; the statistic is the textbook rank-sum form
    12/(n k (k+1)) * sum R_j^2 - 3 n (k+1) without a tie correction.
    """
    x = np.asarray(scores, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 2 or x.shape[1] < 2:
        raise ValueError("friedman needs at least 2 rows (runs) and 2 columns (algorithms)")
    if not np.all(np.isfinite(x)):
        raise ValueError("friedman needs finite scores")
    n, k = x.shape
    ranks = rankdata(x, axis=1)
    rank_sums = ranks.sum(axis=0)
    # numerator is exact in binary floating point (rank sums are half-integers)
    stat = (12.0 * float(np.sum(rank_sums**2)) - 3.0 * n * n * k * (k + 1) ** 2) / (n * k * (k + 1))
    return FriedmanResult(stat, float(chi2.sf(stat, k - 1)), rank_sums / n, ranks)
