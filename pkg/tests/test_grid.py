import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pdstar.grid import (
    CostMap,
    GridError,
    GridWorld,
    Scenario,
    add_virtual_obstacle,
    cost,
    format_scenario,
    parse_ascii,
    parse_scenario,
    scenario_from_dict,
    scenario_to_dict,
    successors,
)

INF = math.inf


@pytest.mark.parametrize(
    "size, cell, expected",
    [
        ((10, 10), (5, 5), [(5, 4), (5, 6), (4, 5), (6, 5)]),
        ((10, 10), (0, 0), [(0, 1), (1, 0)]),
        ((3, 1), (1, 0), [(0, 0), (2, 0)]),
    ],
)
def test_successors_order(size, cell, expected):
    assert successors(GridWorld(*size), cell) == expected


def test_successors_include_obstacles():
    g = GridWorld(3, 3, frozenset({(1, 0)}))
    assert (1, 0) in successors(g, (1, 1))


def test_successors_out_of_bounds():
    with pytest.raises(GridError):
        successors(GridWorld(4, 4), (4, 0))


def test_obstacle_out_of_bounds_rejected():
    with pytest.raises(GridError):
        GridWorld(3, 3, frozenset({(3, 3)}))


def test_cost_cases():
    g = GridWorld(5, 5, frozenset({(2, 3)}))
    cm = CostMap(GridWorld(5, 5))
    assert cost(cm, (2, 2), (2, 3)) == 1
    assert cost(CostMap(g), (2, 2), (2, 3)) == INF
    assert cost(add_virtual_obstacle(cm, (2, 2), (2, 3)), (2, 2), (2, 3)) == INF
    # not adjacent
    assert cost(cm, (2, 2), (3, 3)) == INF
    assert cost(cm, (2, 2), (2, 2)) == INF


def test_virtual_obstacle_copy_semantics(open_costmap):
    blocked = add_virtual_obstacle(open_costmap, (2, 2), (2, 3))
    assert open_costmap.cost((2, 2), (2, 3)) == 1
    assert blocked.cost((2, 2), (2, 3)) == INF
    # directed: the reverse edge stays open
    assert blocked.cost((2, 3), (2, 2)) == 1
    twice = add_virtual_obstacle(blocked, (2, 2), (2, 3))
    assert twice.cost((2, 2), (2, 3)) == INF
    assert len(twice.overrides) == 1


def test_virtual_obstacle_needs_neighbours(open_costmap):
    with pytest.raises(GridError):
        add_virtual_obstacle(open_costmap, (0, 0), (2, 0))


cells = st.tuples(st.integers(0, 7), st.integers(0, 7))


@given(obstacles=st.frozensets(cells, max_size=20), u=cells)
def test_successor_count_and_symmetry(obstacles, u):
    g = GridWorld(8, 8, obstacles)
    cm = CostMap(g)
    succ = successors(g, u)
    assert len(succ) in (2, 3, 4)
    for v in succ:
        assert g.in_bounds(v)
        if u not in obstacles and v not in obstacles:
            assert cm.cost(u, v) == cm.cost(v, u) == 1


@given(u=cells, k=st.integers(0, 3), probe=cells)
def test_override_touches_one_edge(u, k, probe):
    g = GridWorld(8, 8)
    succ = successors(g, u)
    v = succ[k % len(succ)]
    before = CostMap(g)
    after = before.add_virtual_obstacle(u, v)
    for w in successors(g, probe):
        if (probe, w) != (u, v):
            assert after.cost(probe, w) == before.cost(probe, w)


def _scenario():
    g = GridWorld(6, 4, frozenset({(1, 1), (2, 1), (4, 2)}))
    return Scenario(g, ((0, 0), (5, 3), (0, 3)), (3, 2), seed=11)


def test_text_round_trip():
    s = _scenario()
    text = format_scenario(s)
    assert text.splitlines()[:4] == ["6 4", "3 2", "3", "0 0"]
    assert parse_scenario(text) == s


def test_json_and_text_parse_identically():
    import json

    s = _scenario()
    assert parse_scenario(json.dumps(scenario_to_dict(s))) == parse_scenario(format_scenario(s)) == s
    assert scenario_from_dict(scenario_to_dict(s)) == s


def test_text_markers_are_ignored():
    text = "3 3\n1 1\n1\n0 0\nR..\n.G.\n.#.\n"
    s = parse_scenario(text)
    assert s.starts == ((0, 0),)
    assert s.grid.obstacles == {(1, 2)}
    assert s.seed == 0


@pytest.mark.parametrize(
    "text",
    [
        "3 3\n1 1\n1\n0 0\n...\n.G.\n",  # missing row
        "3 3\n1 1\n1\n0 0\n....\n.G.\n...\n",  # row too wide
        "3\n1 1\n0\n...\n.G.\n...\n",  # bad header
        "3 3\n1 1\n0\n...\n.G.\n...\nbogus\n",
    ],
)
def test_parse_rejects_malformed(text):
    with pytest.raises(GridError):
        parse_scenario(text)


def test_parse_ascii_recovers_starts():
    s = parse_ascii("0.#\n.G1\n")
    assert s.starts == ((0, 0), (2, 1))
    assert s.goal == (1, 1)
    assert s.grid.obstacles == {(2, 0)}


def test_scenario_problems():
    g = GridWorld(4, 4, frozenset({(0, 0)}))
    s = Scenario(g, ((0, 0), (1, 1), (1, 1), (2, 2)), (2, 2))
    problems = " ".join(s.problems())
    assert "is an obstacle" in problems
    assert "more than one robot" in problems
    assert "is the goal" in problems
