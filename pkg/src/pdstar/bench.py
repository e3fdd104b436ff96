"""Paired benchmark sweeps over densities, robot counts, seeds and strategies."""
from __future__ import annotations

import csv
import hashlib
import logging
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .engine import NoInitialPath, RunConfig, StepLimitExceeded, run
from .grid import Scenario, format_scenario
from .priority import STRATEGIES
from .worldgen import GenConfig, GenerationFailed, generate

log = logging.getLogger(__name__)

RECORD_FIELDS = (
    "density",
    "robots",
    "seed",
    "strategy",
    "status",
    "path_length",
    "wall_time_s",
    "steps",
    "reroutes",
    "fallbacks",
    "forced_stays",
    "scenario_hash",
)
STATUSES = ("ok", "no_initial_path", "step_limit", "generation_failed")
PDSTAR = "freedom"


@dataclass(frozen=True)
class BenchConfig:
    size: int = 20
    densities: tuple = (0.1, 0.2, 0.3, 0.4)
    robot_counts: tuple = (5, 10)
    seeds: int = 25
    strategies: tuple = STRATEGIES
    max_steps: Optional[int] = None
    repetitions: int = 3
    base_seed: int = 0
    jobs: int = 1
    hill_climb_budget: int = 10
    forbid_swaps: bool = False

    def __post_init__(self):
        if not self.densities or not self.robot_counts:
            raise ValueError("densities and robot_counts must be non-empty")
        if self.seeds < 1:
            raise ValueError("seeds must be >= 1")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        unknown = set(self.strategies) - set(STRATEGIES)
        if unknown:
            raise ValueError(f"unknown strategies: {sorted(unknown)}")

    def run_config(self) -> RunConfig:
        return RunConfig(
            max_steps=self.max_steps,
            forbid_swaps=self.forbid_swaps,
            hill_climb_budget=self.hill_climb_budget,
        )

    def cells(self) -> list:
        return [
            (d, n, self.base_seed + k)
            for d in self.densities
            for n in self.robot_counts
            for k in range(self.seeds)
        ]


@dataclass
class BenchRecord:
    density: float
    robots: int
    seed: int
    strategy: str
    status: str
    path_length: Optional[int] = None
    wall_time_s: Optional[float] = None
    steps: Optional[int] = None
    reroutes: Optional[int] = None
    fallbacks: Optional[int] = None
    forced_stays: Optional[int] = None
    scenario_hash: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def sort_key(self) -> tuple:
        rank = STRATEGIES.index(self.strategy) if self.strategy in STRATEGIES else len(STRATEGIES)
        return (self.density, self.robots, self.seed, rank, self.strategy)


def scenario_hash(s: Scenario) -> str:
    return hashlib.sha256(format_scenario(s).encode()).hexdigest()[:16]


def run_cell(cfg: BenchConfig, density: float, robots: int, seed: int) -> list:
    """Generate one scenario and run every strategy on it."""
    try:
        scenario = generate(GenConfig(cfg.size, cfg.size, density, robots, seed))
    except GenerationFailed as exc:
        log.warning("generation failed for density=%s robots=%s seed=%s: %s", density, robots, seed, exc)
        return [BenchRecord(density, robots, seed, s, "generation_failed") for s in cfg.strategies]
    digest = scenario_hash(scenario)
    rc = cfg.run_config()
    records = []
    for strategy in cfg.strategies:
        rec = BenchRecord(density, robots, seed, strategy, "ok", scenario_hash=digest)
        times = []
        try:
            for rep in range(cfg.repetitions):
                result = run(scenario, strategy, rc)
                times.append(result.wall_time)
                if rep == 0:
                    rec.path_length = result.combined_path_length
                    rec.steps = result.steps_run
                    rec.reroutes = result.reroutes
                    rec.fallbacks = result.fallbacks
                    rec.forced_stays = result.forced_stays
            rec.wall_time_s = statistics.median(times)
        except NoInitialPath:
            rec = BenchRecord(density, robots, seed, strategy, "no_initial_path", scenario_hash=digest)
        except StepLimitExceeded:
            rec = BenchRecord(density, robots, seed, strategy, "step_limit", scenario_hash=digest)
        records.append(rec)
    return records


def _run_cell_args(args):
    return run_cell(*args)


def sweep(cfg: BenchConfig) -> list:
    """One record per (density, robots, seed, strategy); every strategy sees the same scenario."""
    if not cfg.strategies:
        return []
    jobs = [(cfg, d, n, s) for d, n, s in cfg.cells()]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            chunks = list(pool.map(_run_cell_args, jobs))
    else:
        chunks = [_run_cell_args(j) for j in jobs]
    records = [r for chunk in chunks for r in chunk]
    records.sort(key=BenchRecord.sort_key)
    return records


# -- csv -----------------------------------------------------------------------


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_records(records: Iterable[BenchRecord], path: Union[str, Path]) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RECORD_FIELDS)
        for r in records:
            d = asdict(r)
            w.writerow([_fmt(d[k]) for k in RECORD_FIELDS])
    return path


def read_records(path: Union[str, Path]) -> list:
    out = []
    with Path(path).open(newline="") as fh:
        for row in csv.DictReader(fh):
            def num(key, cast):
                return cast(row[key]) if row[key] != "" else None

            out.append(
                BenchRecord(
                    density=float(row["density"]),
                    robots=int(row["robots"]),
                    seed=int(row["seed"]),
                    strategy=row["strategy"],
                    status=row["status"],
                    path_length=num("path_length", int),
                    wall_time_s=num("wall_time_s", float),
                    steps=num("steps", int),
                    reroutes=num("reroutes", int),
                    fallbacks=num("fallbacks", int),
                    forced_stays=num("forced_stays", int),
                    scenario_hash=row["scenario_hash"],
                )
            )
    return out


# -- summary -----------------------------------------------------------------


def mean(values: Sequence[float]) -> float:
    return math.fsum(values) / len(values)


def quartiles(values: Sequence[float]) -> tuple:
    """Nearest-rank Q1, median and Q3."""
    arr = np.sort(np.asarray(values, dtype=float))
    q = np.percentile(arr, [25, 50, 75], method="inverted_cdf")
    return tuple(float(v) for v in q)


@dataclass
class Summary:
    groups: list = field(default_factory=list)
    comparisons: list = field(default_factory=list)
    notes: list = field(default_factory=list)


GROUP_FIELDS = (
    "density",
    "robots",
    "strategy",
    "runs",
    "path_mean",
    "path_q1",
    "path_median",
    "path_q3",
    "time_mean",
    "time_q1",
    "time_median",
    "time_q3",
    "forced_stays",
)
COMPARISON_FIELDS = (
    "density",
    "robots",
    "baseline",
    "pairs",
    "pdstar_time_mean",
    "baseline_time_mean",
    "improvement_pct",
    "win_rate",
    "pdstar_path_mean",
    "baseline_path_mean",
)


def improvement_pct(baseline_mean: float, pdstar_mean: float) -> float:
    return 100.0 * (baseline_mean - pdstar_mean) / baseline_mean


def summarize(records: Iterable[BenchRecord]) -> Summary:
    records = sorted(records, key=BenchRecord.sort_key)
    summary = Summary()
    keys = sorted({(r.density, r.robots) for r in records})
    strategies = sorted({r.strategy for r in records}, key=lambda s: (STRATEGIES.index(s) if s in STRATEGIES else 99, s))
    by_group: dict = {}
    for density, robots in keys:
        for strategy in strategies:
            ok = [r for r in records if (r.density, r.robots, r.strategy) == (density, robots, strategy) and r.ok]
            if not ok:
                summary.notes.append(f"no ok runs for density={density} robots={robots} strategy={strategy}")
                continue
            paths = [r.path_length for r in ok]
            times = [r.wall_time_s for r in ok]
            row = dict(zip(GROUP_FIELDS, (density, robots, strategy, len(ok), mean(paths), *quartiles(paths),
                                          mean(times), *quartiles(times), sum(r.forced_stays for r in ok))))
            summary.groups.append(row)
            by_group[(density, robots, strategy)] = row

    for density, robots in keys:
        mine = by_group.get((density, robots, PDSTAR))
        if mine is None:
            continue
        for baseline in strategies:
            if baseline == PDSTAR:
                continue
            theirs = by_group.get((density, robots, baseline))
            if theirs is None:
                continue
            pd_runs = {r.seed: r for r in records
                       if (r.density, r.robots, r.strategy) == (density, robots, PDSTAR) and r.ok}
            base_runs = {r.seed: r for r in records
                         if (r.density, r.robots, r.strategy) == (density, robots, baseline) and r.ok}
            paired = sorted(set(pd_runs) & set(base_runs))
            wins = sum(1 for s in paired if pd_runs[s].wall_time_s < base_runs[s].wall_time_s)
            summary.comparisons.append(
                {
                    "density": density,
                    "robots": robots,
                    "baseline": baseline,
                    "pairs": len(paired),
                    "pdstar_time_mean": mine["time_mean"],
                    "baseline_time_mean": theirs["time_mean"],
                    "improvement_pct": improvement_pct(theirs["time_mean"], mine["time_mean"]),
                    "win_rate": wins / len(paired) if paired else float("nan"),
                    "pdstar_path_mean": mine["path_mean"],
                    "baseline_path_mean": theirs["path_mean"],
                }
            )
    return summary


def write_table(rows: Sequence[dict], fields: Sequence[str], path: Union[str, Path]) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(fields)
        for row in rows:
            w.writerow([_fmt(row[k]) for k in fields])
    return path


def write_summary(summary: Summary, path: Union[str, Path]) -> Path:
    return write_table(summary.groups, GROUP_FIELDS, path)


def format_summary(summary: Summary) -> str:
    lines = [
        f"{'density':>7} {'robots':>6} {'strategy':<10} {'runs':>4} {'path':>9} {'time_ms':>9} "
        f"{'q1_ms':>8} {'q3_ms':>8} {'stays':>5}"
    ]
    for g in summary.groups:
        lines.append(
            f"{g['density']:>7.2f} {g['robots']:>6d} {g['strategy']:<10} {g['runs']:>4d} {g['path_mean']:>9.2f} "
            f"{1e3 * g['time_mean']:>9.2f} {1e3 * g['time_q1']:>8.2f} {1e3 * g['time_q3']:>8.2f} "
            f"{g['forced_stays']:>5d}"
        )
    if summary.comparisons:
        lines.append("")
        lines.append(f"{'density':>7} {'robots':>6} {'vs':<10} {'improve%':>9} {'win_rate':>8}")
        for c in summary.comparisons:
            lines.append(
                f"{c['density']:>7.2f} {c['robots']:>6d} {c['baseline']:<10} "
                f"{c['improvement_pct']:>9.2f} {c['win_rate']:>8.2f}"
            )
    for note in summary.notes:
        lines.append(f"note: {note}")
    return "\n".join(lines)
