"""CEC 2009 unconstrained test problems UF1-UF10.

Definitions follow the CEC 2009 MOEA competition technical report
(Zhang et al., 2008). Every function accepts a single decision vector or a
batch of row vectors and returns objectives of matching leading shape.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

DIM = 30


def _index_sets(n: int, n_obj: int) -> list[np.ndarray]:
    # 1-based variable indices j >= 2 (or 3) grouped by residue
    if n_obj == 2:
        j = np.arange(2, n + 1)
        return [j[j % 2 == 1], j[j % 2 == 0]]
    j = np.arange(3, n + 1)
    return [j[(j - 1) % 3 == 0], j[(j - 2) % 3 == 0], j[j % 3 == 0]]


def _as_batch(x) -> tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        return x[None, :], True
    return x, False


def _sine_shift(x: np.ndarray) -> np.ndarray:
    n = x.shape[1]
    j = np.arange(1, n + 1)
    return x - np.sin(6.0 * np.pi * x[:, :1] + j * np.pi / n)


def _mean_sq(y: np.ndarray, idx: np.ndarray) -> np.ndarray:
    return 2.0 * np.mean(y[:, idx - 1] ** 2, axis=1)


def _cos_product_term(y: np.ndarray, idx: np.ndarray) -> np.ndarray:
    yj = y[:, idx - 1]
    s = 4.0 * np.sum(yj**2, axis=1)
    p = 2.0 * np.prod(np.cos(20.0 * yj * np.pi / np.sqrt(idx)), axis=1)
    return 2.0 / len(idx) * (s - p + 2.0)


def uf1(x: np.ndarray) -> np.ndarray:
    j1, j2 = _index_sets(x.shape[1], 2)
    y = _sine_shift(x)
    x1 = x[:, 0]
    return np.column_stack([x1 + _mean_sq(y, j1), 1.0 - np.sqrt(x1) + _mean_sq(y, j2)])


def uf2(x: np.ndarray) -> np.ndarray:
    n = x.shape[1]
    j1, j2 = _index_sets(n, 2)
    x1 = x[:, :1]
    j = np.arange(1, n + 1)
    amp = 0.3 * x1**2 * np.cos(24.0 * np.pi * x1 + 4.0 * j * np.pi / n) + 0.6 * x1
    phase = 6.0 * np.pi * x1 + j * np.pi / n
    y = np.where(j % 2 == 1, x - amp * np.cos(phase), x - amp * np.sin(phase))
    x1 = x[:, 0]
    return np.column_stack([x1 + _mean_sq(y, j1), 1.0 - np.sqrt(x1) + _mean_sq(y, j2)])


def uf3(x: np.ndarray) -> np.ndarray:
    n = x.shape[1]
    j1, j2 = _index_sets(n, 2)
    j = np.arange(1, n + 1)
    y = x - x[:, :1] ** (0.5 * (1.0 + 3.0 * (j - 2.0) / (n - 2.0)))
    x1 = x[:, 0]
    return np.column_stack([x1 + _cos_product_term(y, j1), 1.0 - np.sqrt(x1) + _cos_product_term(y, j2)])


def uf4(x: np.ndarray) -> np.ndarray:
    j1, j2 = _index_sets(x.shape[1], 2)
    y = np.abs(_sine_shift(x))
    h = y / (1.0 + np.exp(2.0 * y))
    x1 = x[:, 0]
    return np.column_stack(
        [x1 + 2.0 * np.mean(h[:, j1 - 1], axis=1), 1.0 - x1**2 + 2.0 * np.mean(h[:, j2 - 1], axis=1)]
    )


def uf5(x: np.ndarray, big_n: int = 10, eps: float = 0.1) -> np.ndarray:
    j1, j2 = _index_sets(x.shape[1], 2)
    y = _sine_shift(x)
    h = 2.0 * y**2 - np.cos(4.0 * np.pi * y) + 1.0
    x1 = x[:, 0]
    ripple = (0.5 / big_n + eps) * np.abs(np.sin(2.0 * big_n * np.pi * x1))
    return np.column_stack(
        [
            x1 + ripple + 2.0 * np.mean(h[:, j1 - 1], axis=1),
            1.0 - x1 + ripple + 2.0 * np.mean(h[:, j2 - 1], axis=1),
        ]
    )


def uf6(x: np.ndarray, big_n: int = 2, eps: float = 0.1) -> np.ndarray:
    j1, j2 = _index_sets(x.shape[1], 2)
    y = _sine_shift(x)
    x1 = x[:, 0]
    gap = np.maximum(0.0, 2.0 * (0.5 / big_n + eps) * np.sin(2.0 * big_n * np.pi * x1))
    return np.column_stack(
        [x1 + gap + _cos_product_term(y, j1), 1.0 - x1 + gap + _cos_product_term(y, j2)]
    )


def uf7(x: np.ndarray) -> np.ndarray:
    j1, j2 = _index_sets(x.shape[1], 2)
    y = _sine_shift(x)
    r = x[:, 0] ** 0.2
    return np.column_stack([r + _mean_sq(y, j1), 1.0 - r + _mean_sq(y, j2)])


def _three_obj_shift(x: np.ndarray) -> np.ndarray:
    n = x.shape[1]
    j = np.arange(1, n + 1)
    return x - 2.0 * x[:, 1:2] * np.sin(2.0 * np.pi * x[:, :1] + j * np.pi / n)


def uf8(x: np.ndarray) -> np.ndarray:
    j1, j2, j3 = _index_sets(x.shape[1], 3)
    y = _three_obj_shift(x)
    a, b = 0.5 * np.pi * x[:, 0], 0.5 * np.pi * x[:, 1]
    return np.column_stack(
        [
            np.cos(a) * np.cos(b) + _mean_sq(y, j1),
            np.cos(a) * np.sin(b) + _mean_sq(y, j2),
            np.sin(a) + _mean_sq(y, j3),
        ]
    )


def uf9(x: np.ndarray, eps: float = 0.1) -> np.ndarray:
    j1, j2, j3 = _index_sets(x.shape[1], 3)
    y = _three_obj_shift(x)
    x1, x2 = x[:, 0], x[:, 1]
    bump = np.maximum(0.0, (1.0 + eps) * (1.0 - 4.0 * (2.0 * x1 - 1.0) ** 2))
    return np.column_stack(
        [
            0.5 * (bump + 2.0 * x1) * x2 + _mean_sq(y, j1),
            0.5 * (bump - 2.0 * x1 + 2.0) * x2 + _mean_sq(y, j2),
            1.0 - x2 + _mean_sq(y, j3),
        ]
    )


def uf10(x: np.ndarray) -> np.ndarray:
    j1, j2, j3 = _index_sets(x.shape[1], 3)
    y = _three_obj_shift(x)
    h = 4.0 * y**2 - np.cos(8.0 * np.pi * y) + 1.0
    a, b = 0.5 * np.pi * x[:, 0], 0.5 * np.pi * x[:, 1]
    return np.column_stack(
        [
            np.cos(a) * np.cos(b) + 2.0 * np.mean(h[:, j1 - 1], axis=1),
            np.cos(a) * np.sin(b) + 2.0 * np.mean(h[:, j2 - 1], axis=1),
            np.sin(a) + 2.0 * np.mean(h[:, j3 - 1], axis=1),
        ]
    )


# --- Pareto fronts -----------------------------------------------------------


def _front_sqrt(k: int) -> np.ndarray:
    f1 = np.linspace(0.0, 1.0, k)
    return np.column_stack([f1, 1.0 - np.sqrt(f1)])


def _front_square(k: int) -> np.ndarray:
    f1 = np.linspace(0.0, 1.0, k)
    return np.column_stack([f1, 1.0 - f1**2])


def _front_linear(k: int) -> np.ndarray:
    f1 = np.linspace(0.0, 1.0, k)
    return np.column_stack([f1, 1.0 - f1])


def _front_uf5(k: int) -> np.ndarray:
    # discrete front: 2N+1 points regardless of k
    f1 = np.arange(21) / 20.0
    return np.column_stack([f1, 1.0 - f1])


def _front_uf6(k: int) -> np.ndarray:
    # (0, 1) plus f1 uniform over [1/4, 1/2] U [3/4, 1]
    t = np.linspace(0.0, 0.5, k - 1)
    f1 = np.where(t <= 0.25, 0.25 + t, 0.5 + t)
    f1 = np.concatenate([[0.0], f1])
    return np.column_stack([f1, 1.0 - f1])


def _grid_side(k: int) -> int:
    return max(2, math.isqrt(k - 1) + 1)


def _dedupe(points: np.ndarray) -> np.ndarray:
    _, first = np.unique(np.round(points, 14), axis=0, return_index=True)
    return points[np.sort(first)]


def _front_sphere(k: int) -> np.ndarray:
    s = _grid_side(k)
    u, v = np.meshgrid(np.linspace(0.0, 1.0, s), np.linspace(0.0, 1.0, s), indexing="ij")
    a, b = 0.5 * np.pi * u.ravel(), 0.5 * np.pi * v.ravel()
    pts = np.column_stack([np.cos(a) * np.cos(b), np.cos(a) * np.sin(b), np.sin(a)])
    return _dedupe(pts)


def _front_uf9(k: int) -> np.ndarray:
    s = _grid_side(k)
    t = np.linspace(0.0, 0.5, s)
    x1 = np.where(t <= 0.25, t, t + 0.5)
    x1g, x2g = np.meshgrid(x1, np.linspace(0.0, 1.0, s), indexing="ij")
    x1g, x2g = x1g.ravel(), x2g.ravel()
    pts = np.column_stack([x1g * x2g, (1.0 - x1g) * x2g, 1.0 - x2g])
    return _dedupe(pts)


# --- Pareto-optimal decision vectors -------------------------------------------


def _ps_sine(t: np.ndarray, n: int) -> np.ndarray:
    j = np.arange(1, n + 1)
    x = np.sin(6.0 * np.pi * t[:, None] + j * np.pi / n)
    x[:, 0] = t
    return x


def _ps_uf2(t: np.ndarray, n: int) -> np.ndarray:
    j = np.arange(1, n + 1)
    x1 = t[:, None]
    amp = 0.3 * x1**2 * np.cos(24.0 * np.pi * x1 + 4.0 * j * np.pi / n) + 0.6 * x1
    phase = 6.0 * np.pi * x1 + j * np.pi / n
    x = np.where(j % 2 == 1, amp * np.cos(phase), amp * np.sin(phase))
    x[:, 0] = t
    return x


def _ps_uf3(t: np.ndarray, n: int) -> np.ndarray:
    j = np.arange(1, n + 1)
    x = t[:, None] ** (0.5 * (1.0 + 3.0 * (j - 2.0) / (n - 2.0)))
    x[:, 0] = t
    return x


def _ps_three(u: np.ndarray, v: np.ndarray, n: int) -> np.ndarray:
    j = np.arange(1, n + 1)
    x = 2.0 * v[:, None] * np.sin(2.0 * np.pi * u[:, None] + j * np.pi / n)
    x[:, 0] = u
    x[:, 1] = v
    return x


@dataclass(frozen=True)
class Problem:
    """One benchmark: identity, box, objective function and front sampler."""

    name: str
    n_obj: int
    dim: int
    lower: np.ndarray
    upper: np.ndarray
    func: Callable[[np.ndarray], np.ndarray]
    front: Callable[[int], np.ndarray]
    front_relation: Callable[[np.ndarray], np.ndarray]

    def evaluate(self, x) -> np.ndarray:
        batch, single = _as_batch(x)
        if batch.shape[1] != self.dim:
            raise ValueError(f"{self.name}: expected {self.dim} variables, got {batch.shape[1]}")
        f = self.func(batch)
        return f[0] if single else f

    @property
    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        return self.lower.copy(), self.upper.copy()

    def pareto_front(self, k: int | None = None) -> np.ndarray:
        if k is None:
            k = 1000 if self.n_obj == 2 else 10000
        if k < 2:
            raise ValueError("k must be >= 2")
        return self.front(k)

    def pareto_set(self, t) -> np.ndarray:
        """Pareto-optimal decision vectors parameterised by ``t``.

        For two objectives ``t`` is the vector of ``x1`` values; for three
        objectives it is an ``(k, 2)`` array of ``(x1, x2)``.
        """
        t = np.asarray(t, dtype=np.float64)
        n = self.dim
        if self.name == "UF2":
            return _ps_uf2(t, n)
        if self.name == "UF3":
            return _ps_uf3(t, n)
        if self.n_obj == 2:
            return _ps_sine(t, n)
        return _ps_three(t[:, 0], t[:, 1], n)


def _box(first: int, lo_first: float, hi_first: float, lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
    lower = np.full(DIM, lo)
    upper = np.full(DIM, hi)
    lower[:first] = lo_first
    upper[:first] = hi_first
    return lower, upper


def _residual_sqrt(f):
    return f[:, 1] - (1.0 - np.sqrt(f[:, 0]))


def _residual_square(f):
    return f[:, 1] - (1.0 - f[:, 0] ** 2)


def _residual_linear(f):
    return f[:, 1] - (1.0 - f[:, 0])


def _residual_sphere(f):
    return np.sum(f**2, axis=1) - 1.0


def _residual_plane(f):
    return np.sum(f, axis=1) - 1.0


def _make(name, n_obj, box, func, front, rel) -> Problem:
    lower, upper = box
    return Problem(name, n_obj, DIM, lower, upper, func, front, rel)


PROBLEMS: dict[str, Problem] = {
    "UF1": _make("UF1", 2, _box(1, 0, 1, -1, 1), uf1, _front_sqrt, _residual_sqrt),
    "UF2": _make("UF2", 2, _box(1, 0, 1, -1, 1), uf2, _front_sqrt, _residual_sqrt),
    "UF3": _make("UF3", 2, _box(1, 0, 1, 0, 1), uf3, _front_sqrt, _residual_sqrt),
    "UF4": _make("UF4", 2, _box(1, 0, 1, -2, 2), uf4, _front_square, _residual_square),
    "UF5": _make("UF5", 2, _box(1, 0, 1, -1, 1), uf5, _front_uf5, _residual_linear),
    "UF6": _make("UF6", 2, _box(1, 0, 1, -1, 1), uf6, _front_uf6, _residual_linear),
    "UF7": _make("UF7", 2, _box(1, 0, 1, -1, 1), uf7, _front_linear, _residual_linear),
    "UF8": _make("UF8", 3, _box(2, 0, 1, -2, 2), uf8, _front_sphere, _residual_sphere),
    "UF9": _make("UF9", 3, _box(2, 0, 1, -2, 2), uf9, _front_uf9, _residual_plane),
    "UF10": _make("UF10", 3, _box(2, 0, 1, -2, 2), uf10, _front_sphere, _residual_sphere),
}


def get_problem(name: str) -> Problem:
    try:
        return PROBLEMS[name.upper()]
    except KeyError:
        raise ValueError(f"unknown problem {name!r}; expected one of {', '.join(PROBLEMS)}") from None


def evaluate(problem: Problem, x) -> np.ndarray:
    return problem.evaluate(x)


def bounds(problem: Problem) -> tuple[np.ndarray, np.ndarray]:
    return problem.bounds


def pareto_front_samples(problem: Problem, k: int | None = None) -> np.ndarray:
    return problem.pareto_front(k)


def write_front_csv(problem: Problem, path, k: int | None = None) -> Path:
    """Export front samples with header ``f1..fm``."""
    path = Path(path)
    pts = problem.pareto_front(k)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"f{i + 1}" for i in range(problem.n_obj)])
        for row in pts:
            w.writerow([repr(float(v)) for v in row])
    return path
