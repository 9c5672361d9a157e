"""Command line: ``r2rlmoea {train,evaluate,compare,plot}``.

Exit codes: 0 success, 1 usage error, 2 I/O error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import harness
from .agent import CheckpointError
from .problems import get_problem

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_NUMERIC = 0, 1, 2, 3
DEFAULT_RUNS = 30


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with 2, which is our I/O code
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common_flags(defaults: bool) -> argparse.ArgumentParser:
    # flags work before or after the subcommand; the subcommand copy must not
    # overwrite a value given earlier, so its defaults are suppressed
    kw = {} if defaults else {"default": argparse.SUPPRESS}
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="key=value config file", **kw)
    common.add_argument("--seed", type=int, help="root seed (overrides the config)", **kw)
    common.add_argument("--out", type=Path, help="output directory (overrides out_dir)", **kw)
    common.add_argument("--runs", type=int, help=f"independent runs per cell (default {DEFAULT_RUNS})", **kw)
    common.add_argument("--baselines-only", action="store_true", help="compare without a trained agent", **kw)
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr", **kw)
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="r2rlmoea", description=__doc__.splitlines()[0], parents=[_common_flags(True)])
    common = _common_flags(False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("train", parents=[common], help="train the agent on one problem")
    ev = sub.add_parser("evaluate", parents=[common], help="greedy offline runs of a checkpoint")
    ev.add_argument("checkpoint", nargs="?", type=Path, help="checkpoint file (default: <out>/train/<problem>/best.r2q)")
    sub.add_parser("compare", parents=[common], help="all algorithms on one or more problems")
    sub.add_parser("plot", parents=[common], help="SVG box plots and operator-usage charts")
    return parser


def _settings(args) -> tuple[harness.RunConfig, dict[str, str], Path]:
    values = harness.read_config(args.config) if args.config else {}
    if args.seed is not None:
        values["seed"] = str(args.seed)
    cfg, extras = harness.build_config(values)
    if args.out is not None:
        out = args.out
    else:
        out = Path(extras.get("out_dir", "results"))
    return cfg, extras, out


def _single_problem(extras: dict[str, str]):
    names = harness.parse_problems(extras.get("problem", "UF1"))
    if len(names) != 1:
        raise UsageError("this command takes exactly one problem")
    return get_problem(names[0])


def _runs(args) -> int:
    runs = DEFAULT_RUNS if args.runs is None else args.runs
    if runs < 1:
        raise UsageError("--runs must be at least 1")
    return runs


def run(args) -> int:
    cfg, extras, out = _settings(args)
    if args.command == "train":
        problem = _single_problem(extras)
        result = harness.train(problem, cfg, out / "train" / problem.name)
        print(f"wrote {len(result.checkpoints)} checkpoints and {result.curve}")
        if result.selected is not None:
            print(f"selected {result.selected}")
    elif args.command == "evaluate":
        problem = _single_problem(extras)
        algorithm = extras.get("algorithm", harness.AGENT)
        harness.parse_algorithms(algorithm, False)
        ckpt = args.checkpoint or out / "train" / problem.name / "best.r2q"
        rows = harness.evaluate(ckpt, problem, _runs(args), cfg, out / "evaluate" / problem.name / algorithm, algorithm)
        print(f"evaluated {len(rows)} runs of {algorithm} on {problem.name}")
    elif args.command == "compare":
        problems = harness.parse_problems(extras.get("problem", "all"))
        algorithms = harness.parse_algorithms(extras.get("algorithm"), args.baselines_only)
        ckpts = {p: out / "train" / p / "best.r2q" for p in problems}
        harness.compare(problems, cfg, _runs(args), out / "compare", ckpts, args.baselines_only, algorithms)
        print(f"wrote comparison to {out / 'compare'}")
    else:
        paths = harness.emit_plots(out / "compare")
        print(f"wrote {len(paths)} SVG files")
    return EXIT_OK


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return run(args)
    except (UsageError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, CheckpointError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (FloatingPointError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
