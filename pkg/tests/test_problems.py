import csv

import numpy as np
import pytest

import oracles
from r2rlmoea.metrics import igd, nondominated
from r2rlmoea.problems import PROBLEMS, bounds, evaluate, get_problem, pareto_front_samples, write_front_csv

TWO_OBJ = ["UF1", "UF2", "UF3", "UF4", "UF5", "UF6", "UF7"]
THREE_OBJ = ["UF8", "UF9", "UF10"]


def optimal_x1(name, k, rng):
    """x1 values whose Pareto-set image lies on the (possibly disconnected) front."""
    if name == "UF5":
        return rng.integers(0, 21, k) / 20.0
    if name == "UF6":
        t = rng.random(k) * 0.5
        return np.where(t <= 0.25, 0.25 + t, 0.5 + t)
    return rng.random(k)


def test_table_shapes():
    for name, p in PROBLEMS.items():
        assert p.dim == 30
        assert p.n_obj == (2 if name in TWO_OBJ else 3)


@pytest.mark.parametrize("name", list(PROBLEMS))
def test_matches_scalar_transcription(name):
    p = get_problem(name)
    rng = np.random.default_rng(42)
    x = p.lower + rng.random((20, p.dim)) * (p.upper - p.lower)
    expected = np.array([oracles.uf(name, list(row)) for row in x])
    np.testing.assert_allclose(p.evaluate(x), expected, rtol=1e-12, atol=1e-14)


def test_uf1_pareto_point():
    p = get_problem("UF1")
    x = p.pareto_set(np.array([0.36]))
    f = p.evaluate(x[0])
    assert f[1] == pytest.approx(1.0 - np.sqrt(f[0]), abs=1e-9)
    assert f[0] == pytest.approx(0.36, abs=1e-12)


@pytest.mark.parametrize("name", TWO_OBJ)
def test_pareto_set_lands_on_front(name):
    p = get_problem(name)
    rng = np.random.default_rng(1)
    x = p.pareto_set(optimal_x1(name, 50, rng))
    assert np.all((x >= p.lower) & (x <= p.upper))
    assert np.max(np.abs(p.front_relation(p.evaluate(x)))) < 1e-9


@pytest.mark.parametrize("name", THREE_OBJ)
def test_three_objective_pareto_set(name):
    p = get_problem(name)
    rng = np.random.default_rng(2)
    u = rng.random(50)
    if name == "UF9":
        u = np.where(u <= 0.5, 0.5 * u, 0.5 + 0.5 * u)  # x1 in [0, 1/4] U [3/4, 1]
    x = p.pareto_set(np.column_stack([u, rng.random(50)]))
    assert np.all((x >= p.lower) & (x <= p.upper))
    assert np.max(np.abs(p.front_relation(p.evaluate(x)))) < 1e-9


def test_uf4_objectives_bounded():
    # h(t) = |t| / (1 + e^{2|t|}) < 0.14, so each penalty term is below 2 * 0.14
    p = get_problem("UF4")
    rng = np.random.default_rng(3)
    f = p.evaluate(p.lower + rng.random((500, 30)) * (p.upper - p.lower))
    assert np.all(np.isfinite(f))
    assert np.all((f[:, 0] >= 0.0) & (f[:, 0] <= 1.0 + 2 * 0.14))


def test_evaluate_is_pure():
    p = get_problem("UF7")
    x = np.linspace(0.0, 1.0, 30)
    assert np.array_equal(evaluate(p, x), evaluate(p, x.copy()))


def test_dimension_mismatch():
    with pytest.raises(ValueError, match="expected 30"):
        get_problem("UF1").evaluate(np.zeros(29))


def test_unknown_problem():
    with pytest.raises(ValueError, match="unknown problem"):
        get_problem("UF11")


def test_front_uf1_three_points():
    f = pareto_front_samples(get_problem("UF1"), 3)
    assert f.shape == (3, 2)
    np.testing.assert_allclose(f[:, 1], 1.0 - np.sqrt(f[:, 0]), atol=1e-12)


def test_front_uf4_endpoints():
    f = pareto_front_samples(get_problem("UF4"), 2).tolist()
    assert [0.0, 1.0] in f and [1.0, 0.0] in f


@pytest.mark.parametrize("name", ["UF8", "UF10"])
def test_sphere_fronts(name):
    f = pareto_front_samples(get_problem(name))
    assert abs(len(f) - 10000) < 200
    assert np.max(np.abs(np.sum(f**2, axis=1) - 1.0)) < 1e-12


def test_uf9_front_is_plane_with_gap():
    f = pareto_front_samples(get_problem("UF9"))
    assert np.max(np.abs(f.sum(axis=1) - 1.0)) < 1e-12
    # x1 = f1 / (f1 + f2) must avoid (1/4, 3/4)
    s = f[:, 0] + f[:, 1]
    x1 = f[s > 1e-9, 0] / s[s > 1e-9]
    assert not np.any((x1 > 0.25 + 1e-12) & (x1 < 0.75 - 1e-12))


def test_default_front_sizes():
    assert len(get_problem("UF1").pareto_front()) == 1000
    assert len(get_problem("UF5").pareto_front()) == 21  # discrete front
    with pytest.raises(ValueError):
        get_problem("UF1").pareto_front(1)


@pytest.mark.parametrize("name", list(PROBLEMS))
def test_front_samples_nondominated_and_self_igd_zero(name):
    p = get_problem(name)
    f = p.pareto_front(400 if p.n_obj == 2 else 900)
    assert np.all(nondominated(f))
    assert igd(f, f) == 0.0
    assert np.max(np.abs(p.front_relation(f))) < 1e-12


def test_bounds():
    lo, hi = bounds(get_problem("UF1"))
    assert (lo[0], hi[0]) == (0.0, 1.0) and np.all(lo[1:] == -1.0) and np.all(hi[1:] == 1.0)
    lo, hi = bounds(get_problem("UF3"))
    assert np.all(lo == 0.0) and np.all(hi == 1.0)
    lo, hi = bounds(get_problem("UF8"))
    assert np.all(lo[:2] == 0.0) and np.all(hi[:2] == 1.0)
    assert np.all(lo[2:] == -2.0) and np.all(hi[2:] == 2.0)


def test_write_front_csv(tmp_path):
    path = write_front_csv(get_problem("UF8"), tmp_path / "uf8.csv", 25)
    with path.open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["f1", "f2", "f3"]
    values = np.array(rows[1:], dtype=float)
    np.testing.assert_array_equal(values, get_problem("UF8").pareto_front(25))
