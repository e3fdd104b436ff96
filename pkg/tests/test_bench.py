import random

import pytest
from oracles import shortest_sum

from pdstar.bench import (
    RECORD_FIELDS,
    BenchConfig,
    BenchRecord,
    improvement_pct,
    quartiles,
    read_records,
    run_cell,
    summarize,
    sweep,
    write_records,
)
from pdstar.worldgen import GenConfig, generate

SMALL = BenchConfig(size=12, densities=(0.1, 0.3), robot_counts=(3, 6), seeds=3, repetitions=1, hill_climb_budget=3)


@pytest.fixture(scope="module")
def small_records():
    return sweep(SMALL)


def test_all_strategies_share_the_scenario():
    recs = run_cell(SMALL, 0.2, 5, 7)
    assert [r.strategy for r in recs] == list(SMALL.strategies)
    assert len({r.scenario_hash for r in recs}) == 1
    assert all(r.ok for r in recs)


def test_empty_strategy_list():
    assert sweep(BenchConfig(strategies=())) == []


def test_bad_config():
    with pytest.raises(ValueError):
        BenchConfig(strategies=("nope",))
    with pytest.raises(ValueError):
        BenchConfig(seeds=0)


def test_sweep_shape(small_records):
    assert len(small_records) == 2 * 2 * 3 * len(SMALL.strategies)
    assert small_records == sorted(small_records, key=BenchRecord.sort_key)
    for r in small_records:
        assert r.ok
        assert r.wall_time_s > 0


def test_path_lengths_near_optimal(small_records):
    floors = {}
    for r in small_records:
        key = (r.density, r.robots, r.seed)
        if key not in floors:
            floors[key] = shortest_sum(generate(GenConfig(12, 12, r.density, r.robots, r.seed)))
        assert floors[key] <= r.path_length <= 2 * floors[key]


def test_csv_round_trip(tmp_path, small_records):
    path = write_records(small_records, tmp_path / "records.csv")
    assert path.read_text().splitlines()[0] == ",".join(RECORD_FIELDS)
    assert read_records(path) == small_records


def test_csv_round_trip_with_failures(tmp_path):
    recs = [BenchRecord(0.4, 10, 1, "random", "generation_failed"), BenchRecord(0.1, 5, 2, "freedom", "ok", 30, 0.25, 9, 1, 0, 0, "abc")]
    assert read_records(write_records(recs, tmp_path / "r.csv")) == recs


def _rec(strategy, seed, path, time, density=0.1, robots=5):
    return BenchRecord(density, robots, seed, strategy, "ok", path, time, 10, 0, 0, 0, "h")


def test_identical_times_give_zero_improvement():
    recs = [_rec(s, k, 20, 0.5) for s in ("freedom", "random") for k in range(4)]
    (c,) = summarize(recs).comparisons
    assert c["improvement_pct"] == 0.0
    assert c["win_rate"] == 0.0


def test_improvement_identity():
    recs = [_rec("random", k, 20, 2.0) for k in range(3)] + [_rec("freedom", k, 20, 1.5) for k in range(3)]
    (c,) = summarize(recs).comparisons
    assert c["improvement_pct"] == pytest.approx(25.0, abs=1e-12)
    assert c["win_rate"] == 1.0
    assert improvement_pct(2.0, 1.5) == 25.0


def test_quartiles_nearest_rank():
    assert quartiles([1, 2, 3, 4, 5]) == (2.0, 3.0, 4.0)
    assert quartiles([7]) == (7.0, 7.0, 7.0)
    recs = [_rec("freedom", k, k + 1, 0.1 * (k + 1)) for k in range(5)]
    (g,) = summarize(recs).groups
    assert (g["path_q1"], g["path_median"], g["path_q3"]) == (2.0, 3.0, 4.0)
    assert g["path_mean"] == 3.0


def test_summary_is_order_invariant(small_records):
    shuffled = list(small_records)
    random.Random(1).shuffle(shuffled)
    a, b = summarize(small_records), summarize(shuffled)
    assert a.groups == b.groups
    assert a.comparisons == b.comparisons


def test_failed_groups_are_noted():
    recs = [BenchRecord(0.4, 10, 0, "freedom", "step_limit"), _rec("random", 0, 10, 0.1, 0.4, 10)]
    s = summarize(recs)
    assert [g["strategy"] for g in s.groups] == ["random"]
    assert s.comparisons == []
    assert any("freedom" in n for n in s.notes)


def test_parallel_matches_serial():
    cfg = BenchConfig(size=10, densities=(0.2,), robot_counts=(4,), seeds=3, repetitions=1, hill_climb_budget=2)
    par = BenchConfig(**{**cfg.__dict__, "jobs": 2})
    strip = lambda rs: [{**r.__dict__, "wall_time_s": None} for r in rs]
    assert strip(sweep(cfg)) == strip(sweep(par))
