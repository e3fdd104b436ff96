"""Command line: ``pdstar generate | plan | bench | render``.

Exit codes: 0 ok, 1 usage or input error, 2 generation failed, 3 a robot has
no initial path, 4 step limit exceeded, 5 every benchmark run failed.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .bench import COMPARISON_FIELDS, BenchConfig, format_summary, summarize, sweep, write_records, write_summary, write_table
from .engine import NoInitialPath, RunConfig, StepLimitExceeded, load_result, run, save_result
from .grid import GridError, save_scenario
from .priority import STRATEGIES
from .report import RenderSpec, emit_plot_data, render_ascii, render_svg
from .validation import check_scenario
from .worldgen import GenConfig, GenerationFailed, generate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_GENERATION = 2
EXIT_NO_PATH = 3
EXIT_STEP_LIMIT = 4
EXIT_ALL_FAILED = 5

log = logging.getLogger("pdstar")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _density(text: str) -> float:
    value = float(text)
    if not 0 <= value < 1:
        raise argparse.ArgumentTypeError(f"density must lie in [0, 1), got {text}")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _csv_of(cast):
    def parse(text: str):
        try:
            return tuple(cast(t) for t in text.split(",") if t.strip())
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise argparse.ArgumentTypeError(str(exc)) from exc

    return parse


def _strategy_list(text: str) -> tuple:
    names = tuple(t.strip() for t in text.split(",") if t.strip())
    bad = [n for n in names if n not in STRATEGIES]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown strategies {bad}; choose from {', '.join(STRATEGIES)}")
    return names


def _default_out() -> Path:
    return Path(os.environ.get("PDSTAR_OUT", "."))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pdstar", description=__doc__.split("\n")[0])
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write random scenario files")
    g.add_argument("--size", type=_positive, default=20)
    g.add_argument("--density", type=_density, default=0.2)
    g.add_argument("--robots", type=_non_negative, default=5)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--count", type=_positive, default=1, help="scenarios with seeds seed..seed+count-1")
    g.add_argument("--out", type=Path, default=None)
    g.add_argument("--json", action="store_true", help="write the JSON form instead of text")

    pl = sub.add_parser("plan", help="plan one scenario and write a result file")
    pl.add_argument("scenario", type=Path)
    pl.add_argument("--strategy", choices=STRATEGIES, default="freedom")
    pl.add_argument("--seed", type=int, default=None)
    pl.add_argument("--forbid-swaps", action="store_true")
    pl.add_argument("--max-steps", type=_positive, default=None)
    pl.add_argument("--budget", type=_non_negative, default=10, help="hill-climb proposals")
    pl.add_argument("--out", type=Path, default=None, help="result file or directory")

    b = sub.add_parser("bench", help="run a benchmark sweep")
    b.add_argument("--size", type=_positive, default=20)
    b.add_argument("--densities", type=_csv_of(_density), default=(0.1, 0.2, 0.3, 0.4))
    b.add_argument("--robots", type=_csv_of(_positive), default=(5, 10))
    b.add_argument("--seeds", type=_positive, default=25)
    b.add_argument("--base-seed", type=int, default=0)
    b.add_argument("--seed", dest="base_seed", type=int, default=argparse.SUPPRESS, help="alias for --base-seed")
    b.add_argument("--strategies", type=_strategy_list, default=STRATEGIES)
    b.add_argument("--no-hillclimb", action="store_true")
    b.add_argument("--repetitions", type=_positive, default=3)
    b.add_argument("--jobs", type=_positive, default=1)
    b.add_argument("--max-steps", type=_positive, default=None)
    b.add_argument("--budget", type=_non_negative, default=10, help="hill-climb proposals")
    b.add_argument("--forbid-swaps", action="store_true")
    b.add_argument("--out", type=Path, default=None)

    r = sub.add_parser("render", help="render a scenario (and optionally a result)")
    r.add_argument("scenario", type=Path, nargs="?")
    r.add_argument("--result", type=Path, default=None)
    r.add_argument("--ascii", action="store_true")
    r.add_argument("--cell-size", type=_positive, default=24)
    r.add_argument("--annotate", action="store_true")
    r.add_argument("--out", type=Path, default=None)
    return p


def _out_dir(path) -> Path:
    out = path if path is not None else _default_out()
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_generate(args) -> int:
    out = _out_dir(args.out)
    for seed in range(args.seed, args.seed + args.count):
        cfg = GenConfig(args.size, args.size, args.density, args.robots, seed)
        try:
            scenario = generate(cfg)
        except GenerationFailed as exc:
            print(f"generation failed: {exc}", file=sys.stderr)
            return EXIT_GENERATION
        ext = "json" if args.json else "txt"
        name = f"scenario_{args.size}_d{args.density:g}_n{args.robots}_s{seed}.{ext}"
        print(save_scenario(scenario, out / name, as_json=args.json))
    return EXIT_OK


def cmd_plan(args) -> int:
    if not args.scenario.is_file():
        raise UsageError(f"scenario file {args.scenario} not found")
    scenario = check_scenario(args.scenario, require_connected=False)
    config = RunConfig(max_steps=args.max_steps, forbid_swaps=args.forbid_swaps,
                       hill_climb_budget=args.budget, seed=args.seed)
    if args.out is not None and args.out.suffix == ".json":
        args.out.parent.mkdir(parents=True, exist_ok=True)
        target = args.out
    else:
        target = _out_dir(args.out) / f"{args.scenario.stem}.{args.strategy}.result.json"
    try:
        result = run(scenario, args.strategy, config)
        code = EXIT_OK
    except NoInitialPath as exc:
        print(f"no initial path: {exc}", file=sys.stderr)
        return EXIT_NO_PATH
    except StepLimitExceeded as exc:
        print(f"step limit exceeded: {exc}", file=sys.stderr)
        result = exc.result
        code = EXIT_STEP_LIMIT
    save_result(result, scenario, target)
    print(
        f"{target}: status={result.status} combined_length={result.combined_path_length} "
        f"steps={result.steps_run} wall_time={result.wall_time:.4f}s "
        f"reroutes={result.reroutes} fallbacks={result.fallbacks} forced_stays={result.forced_stays}"
    )
    return code


def cmd_bench(args) -> int:
    strategies = tuple(s for s in args.strategies if not (args.no_hillclimb and s == "hillclimb"))
    cfg = BenchConfig(
        size=args.size,
        densities=args.densities,
        robot_counts=args.robots,
        seeds=args.seeds,
        strategies=strategies,
        max_steps=args.max_steps,
        repetitions=args.repetitions,
        base_seed=args.base_seed,
        jobs=args.jobs,
        hill_climb_budget=args.budget,
        forbid_swaps=args.forbid_swaps,
    )
    out = _out_dir(args.out)
    records = sweep(cfg)
    summary = summarize(records)
    write_records(records, out / "records.csv")
    write_summary(summary, out / "summary.csv")
    write_table(summary.comparisons, COMPARISON_FIELDS, out / "comparisons.csv")
    emit_plot_data(summary, out)
    table = format_summary(summary)
    (out / "summary.txt").write_text(table + "\n")
    print(table)
    print(f"wrote {len(records)} records to {out / 'records.csv'}")
    if records and not any(r.ok for r in records):
        return EXIT_ALL_FAILED
    return EXIT_OK


def cmd_render(args) -> int:
    result = None
    if args.result is not None:
        if not args.result.is_file():
            raise UsageError(f"result file {args.result} not found")
        result, scenario = load_result(args.result)
    if args.scenario is not None:
        if not args.scenario.is_file():
            raise UsageError(f"scenario file {args.scenario} not found")
        scenario = check_scenario(args.scenario, require_connected=False)
    elif result is None:
        raise UsageError("render needs a scenario file or --result")
    if args.ascii:
        text = render_ascii(scenario, result)
        ext = "txt"
    else:
        text = render_svg(scenario, result, RenderSpec(cell_size=args.cell_size, annotate_steps=args.annotate))
        ext = "svg"
    if args.out is not None and args.out.suffix:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        target = args.out
    else:
        stem = (args.scenario or args.result).stem
        target = _out_dir(args.out) / f"{stem}.{ext}"
    target.write_text(text)
    print(target)
    return EXIT_OK


COMMANDS = {"generate": cmd_generate, "plan": cmd_plan, "bench": cmd_bench, "render": cmd_render}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (UsageError, GridError, ValueError, OSError) as exc:
        print(f"pdstar {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
