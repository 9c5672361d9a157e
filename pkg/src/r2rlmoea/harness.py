"""Training, offline evaluation, baseline comparison and report files."""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import logging
import math
import shutil
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .agent import DDQNAgent, QNetwork, ReplayBuffer, load_checkpoint, save_checkpoint
from .core import RunConfig, derive_seed, stream
from .env import EpisodeLog, run_episode, training_epsilon
from .metrics import final_front, friedman, igd, spacing, summarize
from .operators import OperatorId, OperatorParams
from .problems import PROBLEMS, get_problem
from .r2rank import weights_for

log = logging.getLogger(__name__)

AGENT = "R2-RLMOEA"
RANDOM = "RandomOp"
FIXED = {f"R2-{op.name}": op for op in OperatorId}
ALGORITHMS = (AGENT, "R2-EO", "R2-WOA", "R2-TLBO", "R2-ES", "R2-GA", RANDOM)
BASELINES = ALGORITHMS[1:]
TOP_K = 5
RETENTION_FRACTION = 0.8
VALIDATION_RUNS = 5
EXTRA_KEYS = ("problem", "algorithm", "out_dir")

RUN_HEADER = ["problem", "algorithm", "run", "seed", "igd", "sp"]
SUMMARY_HEADER = ["problem", "algorithm", "igd_mean", "igd_min", "igd_std", "sp_mean", "sp_min", "sp_std"]
USAGE_HEADER = ["problem", "generation", "pct_eo", "pct_woa", "pct_tlbo", "pct_es", "pct_ga"]


# --- config -------------------------------------------------------------------


def parse_config_text(text: str) -> dict[str, str]:
    """Flat ``key=value`` lines; ``#`` starts a comment."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ValueError(f"config line {lineno}: empty key")
        out[key] = value
    return out


def read_config(path) -> dict[str, str]:
    return parse_config_text(Path(path).read_text(encoding="utf-8"))


def _coerce(name: str, kind, value: str):
    if isinstance(kind, str) and "None" in kind and value.strip().lower() == "none":
        return None
    kind = kind.split("|")[0].strip() if isinstance(kind, str) else kind
    try:
        if kind in (int, "int"):
            return int(value)
        if kind in (float, "float"):
            return float(value)
        return value
    except ValueError:
        raise ValueError(f"config key {name!r}: cannot parse {value!r}") from None


def build_config(values: dict[str, str]) -> tuple[RunConfig, dict[str, str]]:
    """Split raw key/values into a validated RunConfig and the extra keys."""
    settable = {f.name: f.type for f in dataclasses.fields(RunConfig) if f.init and f.name != "operator_params"}
    operator = {f.name: f.type for f in dataclasses.fields(OperatorParams) if f.name not in settable}
    kwargs, extras, op_kwargs = {}, {}, {}
    for key, value in values.items():
        if key in settable:
            kwargs[key] = _coerce(key, settable[key], value)
        elif key in operator:
            op_kwargs[key] = _coerce(key, operator[key], value)
        elif key in EXTRA_KEYS:
            extras[key] = value
        else:
            raise ValueError(f"unknown config key {key!r}")
    OperatorParams(**op_kwargs)  # validate early
    return RunConfig(**kwargs, operator_params=op_kwargs), extras


def config_hash(cfg: RunConfig) -> str:
    blob = json.dumps(dataclasses.asdict(cfg), sort_keys=True).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()[:16]


def parse_problems(spec: str | None) -> list[str]:
    if spec is None or spec.strip().lower() == "all":
        return list(PROBLEMS)
    names = [s.strip().upper() for s in spec.split(",") if s.strip()]
    for name in names:
        get_problem(name)
    return names


def parse_algorithms(spec: str | None, baselines_only: bool) -> list[str]:
    pool = BASELINES if baselines_only else ALGORITHMS
    if spec is None or spec.strip().lower() == "all":
        return list(pool)
    names = [s.strip() for s in spec.split(",") if s.strip()]
    for name in names:
        if name not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {name!r}; choose from {', '.join(ALGORITHMS)}")
        if baselines_only and name == AGENT:
            raise ValueError(f"{AGENT} needs a checkpoint and cannot run with --baselines-only")
    return names


# --- single runs --------------------------------------------------------------


@dataclass(frozen=True)
class RunRow:
    problem: str
    algorithm: str
    run: int
    seed: int
    igd: float
    sp: float

    def cells(self) -> list:
        return [self.problem, self.algorithm, self.run, self.seed, repr(self.igd), repr(self.sp)]


def run_seed(root_seed: int, run: int) -> int:
    # shared by every algorithm so comparisons use the same initial populations
    return derive_seed(root_seed, "run", run)


def front_metrics(episode: EpisodeLog, problem) -> tuple[float, float]:
    """IGD and SP of the final rank-1 non-dominated set; SP is NaN below two points."""
    front = final_front(episode.final_population)
    value = igd(front, problem.pareto_front())
    try:
        sp = spacing(front)
    except ValueError:
        sp = math.nan
    return value, sp


def run_algorithm(problem, algorithm: str, cfg: RunConfig, seed: int, net: QNetwork | None = None, weights=None) -> EpisodeLog:
    if algorithm == AGENT:
        if net is None:
            raise ValueError(f"{AGENT} needs a trained network")
        # a frozen agent only needs the main network
        agent = DDQNAgent(main=net, target=net, buffer=ReplayBuffer(1, cfg.n_states))
        return run_episode(problem, cfg, "eval", seed=seed, agent=agent, weights=weights)
    if algorithm == RANDOM:
        return run_episode(problem, cfg, "random", seed=seed, weights=weights)
    if algorithm in FIXED:
        return run_episode(problem, cfg, "fixed", seed=seed, fixed_op=FIXED[algorithm], weights=weights)
    raise ValueError(f"unknown algorithm {algorithm!r}")


# --- CSV helpers --------------------------------------------------------------


def _write_csv(path: Path, header: list[str], rows) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    return path


def write_runs(path, rows: list[RunRow]) -> Path:
    return _write_csv(Path(path), RUN_HEADER, [r.cells() for r in rows])


def read_runs(path) -> list[RunRow]:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != RUN_HEADER:
            raise ValueError(f"{path}: expected header {','.join(RUN_HEADER)}")
        return [
            RunRow(r["problem"], r["algorithm"], int(r["run"]), int(r["seed"]), float(r["igd"]), float(r["sp"]))
            for r in reader
        ]


def _stats(values) -> tuple[float, float, float]:
    v = np.asarray(values, dtype=np.float64)
    if np.any(np.isnan(v)):
        return math.nan, math.nan, math.nan
    return summarize(v)


def summary_rows(rows: list[RunRow]) -> list[list]:
    """One row per (problem, algorithm) in first-appearance order."""
    groups: dict[tuple[str, str], list[RunRow]] = {}
    for r in rows:
        groups.setdefault((r.problem, r.algorithm), []).append(r)
    out = []
    for (problem, algorithm), g in groups.items():
        cells = [problem, algorithm]
        for metric in ("igd", "sp"):
            cells += [repr(v) for v in _stats([getattr(r, metric) for r in g])]
        out.append(cells)
    return out


def write_summary(path, rows: list[RunRow]) -> Path:
    return _write_csv(Path(path), SUMMARY_HEADER, summary_rows(rows))


# --- training -----------------------------------------------------------------


@dataclass
class TrainResult:
    checkpoints: list[Path]
    curve: Path
    selected: Path | None
    rewards: list[float]


def retention_start(n_game: int) -> int:
    """First game index eligible for checkpoint retention; the last game always is."""
    return min(math.ceil(RETENTION_FRACTION * n_game), max(n_game - 1, 0))


def retain(top: list[tuple[float, int, QNetwork]], reward: float, game: int, net: QNetwork, k: int = TOP_K):
    """Insert into a best-first top-k list; earlier games win ties."""
    top.append((reward, game, net))
    top.sort(key=lambda e: (-e[0], e[1]))
    del top[k:]
    return top


def train(problem, cfg: RunConfig, out_dir, validation_runs: int = VALIDATION_RUNS) -> TrainResult:
    """Train one agent on ``problem`` and keep the five highest-reward networks.

    Candidacy opens at game ``ceil(0.8 * n_game)``. The retained networks
    are then ranked by mean IGD over ``validation_runs`` greedy runs and the
    best one is copied to ``best.r2q``.
    """
    out_dir = Path(out_dir)
    ckpt_dir = out_dir / "checkpoints"
    ckpt_dir.mkdir(parents=True, exist_ok=True)
    for stale in ckpt_dir.glob("*.r2q"):
        stale.unlink()
    weights = weights_for(problem.n_obj, cfg.n_pop)
    agent = DDQNAgent.create(cfg, stream(cfg.seed, "agent"))
    start = retention_start(cfg.n_game)
    top: list[tuple[float, int, QNetwork]] = []
    curve, rewards = [], []
    for game in range(cfg.n_game):
        eps = training_epsilon(game, cfg)
        episode = run_episode(
            problem, cfg, "train", seed=derive_seed(cfg.seed, "train", game), agent=agent, epsilon=eps, weights=weights
        )
        reward = episode.total_reward
        rewards.append(reward)
        curve.append([game, repr(reward), repr(eps)])
        if game >= start:
            retain(top, reward, game, agent.main.copy())
        if (game + 1) % 50 == 0 or game + 1 == cfg.n_game:
            log.info("%s game %d/%d reward %.2f eps %.4f", problem.name, game + 1, cfg.n_game, reward, eps)
    curve_path = _write_csv(out_dir / "training_curve.csv", ["game", "total_reward", "epsilon"], curve)

    chash = config_hash(cfg)
    paths = []
    for rank, (reward, game, net) in enumerate(top, 1):
        meta = {
            "problem": problem.name,
            "rank": rank,
            "game": game,
            "total_reward": reward,
            "seed": cfg.seed,
            "config_hash": chash,
            "layer_sizes": net.layer_sizes,
        }
        paths.append(save_checkpoint(ckpt_dir / f"rank{rank}_game{game}.r2q", net, meta))

    selected = None
    if paths and validation_runs > 0:
        selected = select_checkpoint(paths, problem, cfg, out_dir, validation_runs, weights)
    return TrainResult(paths, curve_path, selected, rewards)


def select_checkpoint(paths: list[Path], problem, cfg: RunConfig, out_dir: Path, runs: int, weights=None) -> Path:
    """Pick the retained network with the lowest mean validation IGD."""
    rows, means = [], []
    for path in paths:
        net, _ = load_checkpoint(path)
        vals = []
        for r in range(runs):
            seed = derive_seed(cfg.seed, "validate", r)
            vals.append(front_metrics(run_algorithm(problem, AGENT, cfg, seed, net, weights), problem)[0])
        means.append(float(np.mean(vals)))
        rows.append([path.name, repr(means[-1])])
    best = paths[int(np.argmin(means))]
    _write_csv(out_dir / "validation.csv", ["checkpoint", "igd_mean"], rows)
    target = out_dir / "best.r2q"
    shutil.copyfile(best, target)
    (out_dir / "selected.txt").write_text(f"{best.name}\n", encoding="utf-8")
    return target


# --- evaluation and comparison ------------------------------------------------


def load_agent_network(path, cfg: RunConfig) -> QNetwork:
    net, _ = load_checkpoint(path)
    if net.layer_sizes != cfg.layer_sizes:
        raise ValueError(f"checkpoint {path} has layers {net.layer_sizes}, config expects {cfg.layer_sizes}")
    return net


def evaluate(checkpoint, problem, runs: int, cfg: RunConfig, out_dir=None, algorithm: str = AGENT) -> list[RunRow]:
    """Greedy offline runs of a checkpoint (or a baseline when ``checkpoint`` is None)."""
    if runs < 1:
        raise ValueError("runs must be at least 1")
    net = load_agent_network(checkpoint, cfg) if algorithm == AGENT else None
    weights = weights_for(problem.n_obj, cfg.n_pop)
    rows = []
    for r in range(runs):
        seed = run_seed(cfg.seed, r)
        value, sp = front_metrics(run_algorithm(problem, algorithm, cfg, seed, net, weights), problem)
        rows.append(RunRow(problem.name, algorithm, r, seed, value, sp))
    if out_dir is not None:
        out_dir = Path(out_dir)
        write_runs(out_dir / "runs.csv", rows)
        write_summary(out_dir / "summary.csv", rows)
    return rows


@dataclass
class Comparison:
    rows: list[RunRow]
    usage: dict[str, dict[str, np.ndarray]]  # algorithm -> problem -> (g_max, 5) counts
    friedman: list[list]


def usage_percentages(counts: np.ndarray) -> np.ndarray:
    """Per-generation selection shares in percent from a (g_max, 5) count table."""
    totals = counts.sum(axis=1, keepdims=True)
    return 100.0 * counts / np.maximum(totals, 1)


def aggregate_share(counts: np.ndarray) -> np.ndarray:
    return 100.0 * counts.sum(axis=0) / max(int(counts.sum()), 1)


def compare(
    problems: list[str],
    cfg: RunConfig,
    runs: int,
    out_dir,
    checkpoints: dict[str, Path] | None = None,
    baselines_only: bool = False,
    algorithms: list[str] | None = None,
) -> Comparison:
    """Run every algorithm ``runs`` times per problem and write the report files."""
    if runs < 1:
        raise ValueError("runs must be at least 1")
    algorithms = list(algorithms) if algorithms else list(BASELINES if baselines_only else ALGORITHMS)
    checkpoints = checkpoints or {}
    nets: dict[str, QNetwork] = {}
    if AGENT in algorithms:
        for name in problems:
            path = checkpoints.get(name)
            if path is None or not Path(path).is_file():
                raise FileNotFoundError(f"no trained checkpoint for {name} (expected {path}); train first or pass --baselines-only")
            nets[name] = load_agent_network(path, cfg)

    rows: list[RunRow] = []
    usage: dict[str, dict[str, np.ndarray]] = {a: {} for a in algorithms}
    for name in problems:
        problem = get_problem(name)
        weights = weights_for(problem.n_obj, cfg.n_pop)
        for algorithm in algorithms:
            counts = np.zeros((cfg.g_max, len(OperatorId)), dtype=np.int64)
            for r in range(runs):
                seed = run_seed(cfg.seed, r)
                episode = run_algorithm(problem, algorithm, cfg, seed, nets.get(name), weights)
                counts[np.arange(cfg.g_max), episode.operators] += 1
                value, sp = front_metrics(episode, problem)
                rows.append(RunRow(name, algorithm, r, seed, value, sp))
            usage[algorithm][name] = counts
            log.info("%s %s done", name, algorithm)

    fried = friedman_rows(rows, problems, algorithms)
    result = Comparison(rows, usage, fried)
    if out_dir is not None:
        write_comparison(result, Path(out_dir))
    return result


def friedman_rows(rows: list[RunRow], problems: list[str], algorithms: list[str]) -> list[list]:
    """Friedman test per (problem, metric), runs as blocks and algorithms as treatments."""
    out = []
    if len(algorithms) < 2:
        return out
    for name in problems:
        for metric in ("igd", "sp"):
            table = np.array(
                [[getattr(r, metric) for r in rows if r.problem == name and r.algorithm == a] for a in algorithms]
            ).T
            if table.shape[0] < 2 or not np.all(np.isfinite(table)):
                continue
            res = friedman(table)
            for a, mean_rank in zip(algorithms, res.mean_ranks):
                out.append([name, metric, a, repr(float(mean_rank)), repr(res.statistic), repr(res.p_value)])
    return out


def write_comparison(result: Comparison, out_dir: Path) -> list[Path]:
    paths = [write_runs(out_dir / "runs.csv", result.rows), write_summary(out_dir / "summary.csv", result.rows)]
    paths.append(
        _write_csv(
            out_dir / "friedman.csv", ["problem", "metric", "algorithm", "mean_rank", "statistic", "p_value"], result.friedman
        )
    )
    aggregate = []
    for algorithm, per_problem in result.usage.items():
        body = []
        for name, counts in per_problem.items():
            pct = usage_percentages(counts)
            body += [[name, g + 1] + [repr(float(v)) for v in pct[g]] for g in range(counts.shape[0])]
            aggregate.append([name, algorithm] + [repr(float(v)) for v in aggregate_share(counts)])
        paths.append(_write_csv(out_dir / f"usage_{algorithm}.csv", USAGE_HEADER, body))
    paths.append(_write_csv(out_dir / "usage_aggregate.csv", ["problem", "algorithm"] + USAGE_HEADER[2:], aggregate))
    return paths


# --- plots --------------------------------------------------------------------


@dataclass(frozen=True)
class BoxStats:
    q1: float
    median: float
    q3: float
    whisker_low: float
    whisker_high: float
    outliers: tuple[float, ...]


def box_stats(values) -> BoxStats:
    """Tukey box: quartiles by linear interpolation, whiskers at 1.5 IQR."""
    v = np.sort(np.asarray(values, dtype=np.float64))
    v = v[np.isfinite(v)]
    if v.size == 0:
        raise ValueError("box plot needs at least one finite value")
    q1, med, q3 = np.percentile(v, [25.0, 50.0, 75.0])
    iqr = q3 - q1
    lo_fence, hi_fence = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    inside = v[(v >= lo_fence) & (v <= hi_fence)]
    outliers = tuple(float(x) for x in v[(v < lo_fence) | (v > hi_fence)])
    return BoxStats(float(q1), float(med), float(q3), float(inside.min()), float(inside.max()), outliers)


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")


def _fmt(v: float) -> str:
    return f"{v:.3f}"


PALETTE = ("#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f")


def box_svg(title: str, panels: list[tuple[str, list[str], list[list[float]]]]) -> str:
    """Side-by-side box panels; each panel is (metric, labels, value lists)."""
    pw, ph, pad = 420.0, 300.0, 50.0
    width = pad + len(panels) * (pw + pad)
    height = ph + 2 * pad + 60
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" font-family="sans-serif" font-size="11">',
        f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" font-size="14">{_esc(title)}</text>',
    ]
    for p, (metric, labels, groups) in enumerate(panels):
        x0 = pad + p * (pw + pad)
        y0 = pad
        finite = [x for g in groups for x in g if np.isfinite(x)]
        lo, hi = (min(finite), max(finite)) if finite else (0.0, 1.0)
        if hi - lo < 1e-12:
            lo, hi = lo - 0.5, hi + 0.5
        span = hi - lo

        def y(v: float) -> float:
            return y0 + ph - (v - lo) / span * ph

        parts.append(f'<rect x="{_fmt(x0)}" y="{_fmt(y0)}" width="{_fmt(pw)}" height="{_fmt(ph)}" fill="none" stroke="#999"/>')
        parts.append(f'<text x="{_fmt(x0 + pw / 2)}" y="{_fmt(y0 - 8)}" text-anchor="middle">{_esc(metric)}</text>')
        for tick in np.linspace(lo, hi, 5):
            parts.append(f'<text x="{_fmt(x0 - 4)}" y="{_fmt(y(tick) + 4)}" text-anchor="end">{tick:.3g}</text>')
        slot = pw / max(len(groups), 1)
        for i, (label, values) in enumerate(zip(labels, groups)):
            cx = x0 + (i + 0.5) * slot
            half = slot * 0.3
            parts.append(
                f'<text x="{_fmt(cx)}" y="{_fmt(y0 + ph + 14)}" text-anchor="end" '
                f'transform="rotate(-30 {_fmt(cx)} {_fmt(y0 + ph + 14)})">{_esc(label)}</text>'
            )
            try:
                b = box_stats(values)
            except ValueError:
                continue
            parts.append(f'<g class="box" data-label="{_esc(label)}" data-median="{b.median!r}">')
            parts.append(f'<line x1="{_fmt(cx)}" y1="{_fmt(y(b.whisker_low))}" x2="{_fmt(cx)}" y2="{_fmt(y(b.q1))}" stroke="#333"/>')
            parts.append(f'<line x1="{_fmt(cx)}" y1="{_fmt(y(b.q3))}" x2="{_fmt(cx)}" y2="{_fmt(y(b.whisker_high))}" stroke="#333"/>')
            for w in (b.whisker_low, b.whisker_high):
                parts.append(
                    f'<line x1="{_fmt(cx - half / 2)}" y1="{_fmt(y(w))}" x2="{_fmt(cx + half / 2)}" y2="{_fmt(y(w))}" stroke="#333"/>'
                )
            parts.append(
                f'<rect x="{_fmt(cx - half)}" y="{_fmt(y(b.q3))}" width="{_fmt(2 * half)}" '
                f'height="{_fmt(y(b.q1) - y(b.q3))}" fill="#cfe0f3" stroke="#333"/>'
            )
            parts.append(
                f'<line class="median" x1="{_fmt(cx - half)}" y1="{_fmt(y(b.median))}" x2="{_fmt(cx + half)}" '
                f'y2="{_fmt(y(b.median))}" stroke="#c00" stroke-width="2"/>'
            )
            for o in b.outliers:
                parts.append(f'<circle cx="{_fmt(cx)}" cy="{_fmt(y(o))}" r="2.5" fill="none" stroke="#333"/>')
            parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def usage_svg(title: str, pct: np.ndarray) -> str:
    """Stacked-area chart of per-generation operator shares (rows sum to 100)."""
    w, h, pad = 640.0, 320.0, 50.0
    g = pct.shape[0]
    xs = pad + (np.arange(g) / max(g - 1, 1)) * w
    cum = np.concatenate([np.zeros((g, 1)), np.cumsum(pct, axis=1)], axis=1)

    def y(v):
        return pad + h - np.asarray(v) / 100.0 * h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w + 2 * pad + 90:.0f}" height="{h + 2 * pad:.0f}" font-family="sans-serif" font-size="11">',
        f'<text x="{pad + w / 2:.1f}" y="20" text-anchor="middle" font-size="14">{_esc(title)}</text>',
    ]
    for k, op in enumerate(OperatorId):
        upper = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in zip(xs, y(cum[:, k + 1])))
        lower = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in zip(xs[::-1], y(cum[::-1, k])))
        parts.append(f'<polygon class="area" data-operator="{op.name}" points="{upper} {lower}" fill="{PALETTE[k]}"/>')
        parts.append(f'<rect x="{_fmt(pad + w + 12)}" y="{_fmt(pad + 16 * k)}" width="10" height="10" fill="{PALETTE[k]}"/>')
        parts.append(f'<text x="{_fmt(pad + w + 26)}" y="{_fmt(pad + 16 * k + 9)}">{op.name}</text>')
    parts.append(f'<rect x="{_fmt(pad)}" y="{_fmt(pad)}" width="{_fmt(w)}" height="{_fmt(h)}" fill="none" stroke="#999"/>')
    parts.append(f'<text x="{_fmt(pad + w / 2)}" y="{_fmt(pad + h + 30)}" text-anchor="middle">generation</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def read_usage(path) -> dict[str, np.ndarray]:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != USAGE_HEADER:
            raise ValueError(f"{path}: expected header {','.join(USAGE_HEADER)}")
        tables: dict[str, list[list[float]]] = {}
        for r in reader:
            tables.setdefault(r["problem"], []).append([float(r[c]) for c in USAGE_HEADER[2:]])
    return {k: np.array(v) for k, v in tables.items()}


def emit_plots(report_dir, out_dir=None) -> list[Path]:
    """Box-plot SVG per problem from ``runs.csv`` and a usage SVG per adaptive algorithm.

    Usage plots cover the algorithms that actually choose operators
    (the agent and the random selector) when their usage CSVs exist.
    """
    report_dir = Path(report_dir)
    out_dir = Path(out_dir) if out_dir is not None else report_dir / "plots"
    required = [report_dir / "runs.csv"]
    missing = [str(p) for p in required if not p.is_file()]
    if missing:
        raise FileNotFoundError("missing plot inputs: " + ", ".join(missing))
    rows = read_runs(report_dir / "runs.csv")
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    problems = list(dict.fromkeys(r.problem for r in rows))
    for name in problems:
        algs = list(dict.fromkeys(r.algorithm for r in rows if r.problem == name))
        panels = []
        for metric in ("igd", "sp"):
            groups = [[getattr(r, metric) for r in rows if r.problem == name and r.algorithm == a] for a in algs]
            panels.append((metric.upper(), algs, groups))
        path = out_dir / f"box_{name}.svg"
        path.write_text(box_svg(f"{name}: IGD and SP over runs", panels), encoding="utf-8")
        written.append(path)
    for algorithm in (AGENT, RANDOM):
        src = report_dir / f"usage_{algorithm}.csv"
        if not src.is_file():
            continue
        for name, pct in read_usage(src).items():
            path = out_dir / f"usage_{algorithm}_{name}.svg"
            path.write_text(usage_svg(f"{name}: operators chosen by {algorithm}", pct), encoding="utf-8")
            written.append(path)
    return written


__all__ = [
    "ALGORITHMS",
    "BASELINES",
    "BoxStats",
    "Comparison",
    "RunRow",
    "TrainResult",
    "box_stats",
    "build_config",
    "compare",
    "emit_plots",
    "evaluate",
    "parse_config_text",
    "read_config",
    "read_runs",
    "retain",
    "retention_start",
    "summary_rows",
    "train",
]
