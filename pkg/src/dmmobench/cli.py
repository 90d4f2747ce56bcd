"""Command-line interface.

Verbs:
  run    execute problems over seeds, write the score table and records
  dump   write golden parameter dumps of the problem dynamics
  grid   write 2-D fitness sample grids for plotting elsewhere
  score  re-score previously saved population snapshots

Problems are named P1..P24; lists accept commas and ranges (P1-P8) or
the word `all`.  Seeds accept the same list syntax (e.g. 1-30).
"""

import argparse
import os
import sys
from dataclasses import replace

from .config import ConfigError, load_config
from .core import PROBLEM_INDICES
from .reporting import (dump_environments, export_landscape_grid,
                        rescore_snapshots, run_benchmark)


def parse_problems(text):
    """Expand a problem list like `all`, `P3`, `P1-P8,P17`."""
    if text.strip().lower() == "all":
        return list(PROBLEM_INDICES)
    known = set(PROBLEM_INDICES)
    out = []
    for part in text.split(","):
        part = part.strip().upper()
        if not part:
            continue
        if "-" in part:
            lo, _, hi = part.partition("-")
            try:
                numbers = range(int(lo.lstrip("P")), int(hi.lstrip("P")) + 1)
            except ValueError:
                raise ValueError(f"bad problem range {part!r}") from None
            names = [f"P{n}" for n in numbers]
        else:
            names = ["P" + part.lstrip("P")]
        for name in names:
            if name not in known:
                raise ValueError(f"unknown problem {name!r}; expected P1..P24")
            if name not in out:
                out.append(name)
    if not out:
        raise ValueError(f"no problems in {text!r}")
    return out


def parse_seeds(text):
    """Expand a seed list like `1`, `1-30`, `1,2,7`."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, _, hi = part.partition("-")
            try:
                numbers = list(range(int(lo), int(hi) + 1))
            except ValueError:
                raise ValueError(f"bad seed range {part!r}") from None
        else:
            numbers = [int(part)]
        for number in numbers:
            if number < 0:
                raise ValueError("seeds must be >= 0")
            if number not in out:
                out.append(number)
    if not out:
        raise ValueError(f"no seeds in {text!r}")
    return out


def parse_accuracy(text):
    levels = tuple(float(part) for part in text.split(",") if part.strip())
    if not levels or any(level <= 0 for level in levels):
        raise ValueError(f"bad accuracy list {text!r}")
    return levels


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dmmobench",
        description="Dynamic multimodal optimization benchmark harness.")
    commands = parser.add_subparsers(dest="command", required=True)

    def common(sub, problems_default=None, seeds_default=None):
        if problems_default is not None:
            sub.add_argument("--problems", default=problems_default,
                             help="problem list, e.g. all or P1-P8,P17")
        if seeds_default is not None:
            sub.add_argument("--seeds", default=seeds_default,
                             help="seed list, e.g. 1-30")
        sub.add_argument("--config", default=None,
                         help="key=value configuration file")
        sub.add_argument("--out-dir", default="results",
                         help="directory for output files")

    run = commands.add_parser("run", help="run the benchmark")
    common(run, "all", "1-30")
    run.add_argument("--optimizer", default="baseline",
                     help="registered optimizer name (baseline, random)")
    run.add_argument("--accuracy", default=None,
                     help="override the scored fitness accuracies, "
                          "e.g. 1e-3,1e-4")
    run.add_argument("--jobs", type=int, default=1,
                     help="parallel worker processes across runs")
    run.add_argument("--save-snapshots", action="store_true",
                     help="also write re-scorable population snapshots")

    dump = commands.add_parser("dump", help="write parameter dumps")
    common(dump, "all", "1")

    grid = commands.add_parser("grid", help="write fitness sample grids")
    common(grid, "P1", "1")
    grid.add_argument("--env", type=int, default=1,
                      help="environment index to sample")
    grid.add_argument("--resolution", type=int, default=101,
                      help="samples per axis")
    grid.add_argument("--dim", type=int, default=None,
                      help="rebuild the problem at this dimension "
                           "(2 gives a directly plottable landscape)")

    score = commands.add_parser("score", help="re-score saved snapshots")
    common(score)
    score.add_argument("--accuracy", default=None,
                       help="override the scored fitness accuracies")
    return parser


def _load(args):
    settings, optimizer_config = load_config(args.config)
    if getattr(args, "accuracy", None):
        settings = replace(
            settings,
            fitness_accuracy_levels=parse_accuracy(args.accuracy)).validate()
    return settings, optimizer_config


def _cmd_run(args):
    settings, optimizer_config = _load(args)
    report = run_benchmark(
        parse_problems(args.problems), parse_seeds(args.seeds),
        optimizer=args.optimizer, settings=settings,
        optimizer_config=optimizer_config, out_dir=args.out_dir,
        jobs=args.jobs, save_snapshots=args.save_snapshots)
    sys.stdout.write(report.table.render())
    for problem, seed, message in report.failures:
        print(f"run failed: {problem} seed {seed}: {message}",
              file=sys.stderr)
    return 1 if report.failures else 0


def _cmd_dump(args):
    settings, _ = _load(args)
    for problem in parse_problems(args.problems):
        for seed in parse_seeds(args.seeds):
            path = dump_environments(problem, seed, settings, args.out_dir)
            print(path)
    return 0


def _cmd_grid(args):
    settings, _ = _load(args)
    os.makedirs(args.out_dir, exist_ok=True)
    for problem in parse_problems(args.problems):
        for seed in parse_seeds(args.seeds):
            text = export_landscape_grid(
                problem, seed, env=args.env, resolution=args.resolution,
                settings=settings, dim_override=args.dim)
            path = os.path.join(
                args.out_dir, f"grid_{problem}_seed{seed}_env{args.env}.txt")
            with open(path, "w", encoding="utf-8") as handle:
                handle.write(text)
            print(path)
    return 0


def _cmd_score(args):
    settings, _ = _load(args)
    report = rescore_snapshots(args.out_dir, settings)
    sys.stdout.write(report.table.render())
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "dump": _cmd_dump,
    "grid": _cmd_grid,
    "score": _cmd_score,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
