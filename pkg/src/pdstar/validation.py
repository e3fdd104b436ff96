"""Input checks shared by the estimator, the CLI and the engine's callers."""
from __future__ import annotations

from pathlib import Path

from .grid import GridError, Scenario, bfs_distances, load_scenario, parse_scenario, scenario_from_dict
from .priority import STRATEGIES


def check_scenario(X, require_connected: bool = True) -> Scenario:
    """Coerce ``X`` to a :class:`Scenario` and check its invariants.

    Accepts a Scenario, a scenario dict, a path to a scenario file, or the
    text of one. Raises ``ValueError`` listing every problem found.
    """
    if isinstance(X, Scenario):
        scenario = X
    elif isinstance(X, dict):
        scenario = scenario_from_dict(X)
    elif isinstance(X, Path) or (isinstance(X, str) and "\n" not in X):
        scenario = load_scenario(X)
    elif isinstance(X, str):
        scenario = parse_scenario(X)
    else:
        raise TypeError(f"expected a Scenario, dict, path or scenario text, got {type(X).__name__}")

    problems = scenario.problems()
    if not problems and require_connected:
        reach = bfs_distances(scenario.grid, scenario.goal)
        problems += [f"robot {i} at {s} cannot reach the goal" for i, s in enumerate(scenario.starts) if s not in reach]
    if problems:
        raise GridError("invalid scenario: " + "; ".join(problems))
    return scenario


def check_strategy(name: str) -> str:
    if name not in STRATEGIES:
        raise ValueError(f"unknown strategy {name!r}; expected one of {', '.join(STRATEGIES)}")
    return name
