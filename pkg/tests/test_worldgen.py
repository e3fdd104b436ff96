import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import flood_fill

from pdstar.worldgen import GenConfig, GenerationFailed, batch, generate


def test_empty_world():
    s = generate(GenConfig(10, 10, 0.0, 3, 1))
    assert s.grid.obstacles == frozenset()
    assert s.goal == (5, 5)
    assert len(set(s.starts)) == 3
    assert s.goal not in s.starts


def test_deterministic():
    cfg = GenConfig(20, 20, 0.3, 10, 99)
    assert generate(cfg) == generate(cfg)
    assert generate(cfg) != generate(GenConfig(20, 20, 0.3, 10, 100))


def test_odd_grid_centre():
    assert generate(GenConfig(7, 9, 0.1, 2, 0)).goal == (3, 4)


@settings(max_examples=50, deadline=None)
@given(
    size=st.integers(5, 16),
    density=st.sampled_from([0.0, 0.1, 0.2, 0.29, 0.3, 0.4]),
    robots=st.integers(0, 10),
    seed=st.integers(0, 10**6),
)
def test_invariants(size, density, robots, seed):
    cfg = GenConfig(size, size, density, robots, seed)
    try:
        s = generate(cfg)
    except GenerationFailed:
        return
    assert len(s.grid.obstacles) == int(round(density * size * size, 6))
    component = flood_fill(s.grid, s.goal)
    assert s.goal not in s.grid.obstacles
    assert len(set(s.starts)) == robots
    for start in s.starts:
        assert start != s.goal
        assert start not in s.grid.obstacles
        assert start in component


def test_bad_density():
    with pytest.raises(GenerationFailed):
        generate(GenConfig(10, 10, 1.5, 3, 0))


def test_batch():
    assert batch([]) == ({}, {})
    cfgs = [GenConfig(12, 12, d, n, 0) for d in (0.1, 0.2, 0.3, 0.4) for n in (2, 4, 6)]
    scenarios, failures = batch(cfgs)
    assert len(scenarios) == 12 and not failures
    cfgs[5] = GenConfig(10, 10, 0.99, 3, 0)
    scenarios, failures = batch(cfgs)
    assert len(scenarios) == 11
    assert list(failures) == [5]
    assert isinstance(failures[5], GenerationFailed)


def test_retry_limit():
    # 1x5 corridor, 2 obstacles: the goal's component is usually too small for 2 robots
    with pytest.raises(GenerationFailed):
        generate(GenConfig(41, 1, 0.9, 3, 0))
