"""The stepping loop: plan, prioritise, deconflict and move every robot at once."""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

from .conflicts import StepEvents, StepPlan, resolve_conflicts
from .dstar import PlannerState, plan
from .grid import INF, Cell, CostMap, Scenario, is_neighbor, scenario_from_dict, scenario_to_dict
from .priority import (
    STRATEGIES,
    order_farthest_first,
    order_freedom_index,
    order_hill_climb,
    order_random,
    static_order,
)

RESULT_SCHEMA = "pdstar-result/1"


class NoInitialPath(RuntimeError):
    def __init__(self, robot: int, start: Cell):
        super().__init__(f"robot {robot} at {start} has no path to the goal")
        self.robot = robot


class StepLimitExceeded(RuntimeError):
    def __init__(self, result: "SimulationResult"):
        super().__init__(f"not all robots arrived within {result.steps_run} steps")
        self.result = result


@dataclass
class RunConfig:
    max_steps: Optional[int] = None
    forbid_swaps: bool = False
    hill_climb_budget: int = 10
    seed: Optional[int] = None  # overrides scenario.seed for random/hillclimb orders
    trace: bool = False

    def step_limit(self, scenario: Scenario) -> int:
        if self.max_steps is not None:
            return self.max_steps
        return 10 * (scenario.grid.width + scenario.grid.height)


@dataclass
class SimulationResult:
    trajectories: list
    arrival_steps: list
    combined_path_length: int
    step_events: list
    wall_time: float
    steps_run: int
    strategy: str = "freedom"
    status: str = "ok"
    initial_costs: list = field(default_factory=list)
    ranking: Optional[list] = None
    trace: Optional[list] = None

    @property
    def n_robots(self) -> int:
        return len(self.trajectories)

    @property
    def reroutes(self) -> int:
        return sum(len(e.rerouted) for e in self.step_events)

    @property
    def fallbacks(self) -> int:
        return sum(len(e.fell_back) for e in self.step_events)

    @property
    def forced_stays(self) -> int:
        return sum(len(e.forced_stay) for e in self.step_events)

    def position(self, robot: int, t: int) -> Optional[Cell]:
        traj = self.trajectories[robot]
        return traj[t] if t < len(traj) else None


def count_moves(trajectory: Sequence[Cell]) -> int:
    return sum(1 for a, b in zip(trajectory, trajectory[1:]) if a != b)


def _initial_planners(scenario: Scenario) -> list:
    costmap = CostMap(scenario.grid)
    planners = []
    for i, s in enumerate(scenario.starts):
        p = plan(costmap, s, scenario.goal)
        if p.cost_to_goal == INF:
            raise NoInitialPath(i, s)
        planners.append(p)
    return planners


def _simulate(
    scenario: Scenario,
    planners: list,
    ranking: Optional[list],
    config: RunConfig,
) -> SimulationResult:
    n = scenario.n_robots
    goal = scenario.goal
    positions = list(scenario.starts)
    previous = list(scenario.starts)
    arrived = [s == goal for s in positions]
    arrival = [0 if a else None for a in arrived]
    trajectories = [[s] for s in positions]
    events: list = []
    trace: Optional[list] = [] if config.trace else None
    limit = config.step_limit(scenario)
    step = 0
    while not all(arrived) and step < limit:
        proposed = [goal if arrived[i] else planners[i].next_step() for i in range(n)]
        if ranking is None:
            order = order_freedom_index([p.costmap for p in planners], positions, arrived)
        else:
            order = static_order(ranking, arrived)
        committed, ev = resolve_conflicts(StepPlan(proposed, order, previous), planners, config.forbid_swaps)
        if trace is not None:
            trace.append(
                {
                    "positions": list(positions),
                    "proposed": proposed,
                    "order": order.robots,
                    "freedom": {e.robot: e.freedom for e in order if not e.arrived},
                    "committed": list(committed.proposed),
                }
            )
        step += 1
        for i in range(n):
            if arrived[i]:
                continue
            cell = committed.proposed[i]
            previous[i] = positions[i]
            positions[i] = cell
            trajectories[i].append(cell)
            if cell != previous[i]:
                planners[i].apply_edge_changes((), cell)
            if cell == goal:
                arrived[i] = True
                arrival[i] = step
        events.append(ev)
    return SimulationResult(
        trajectories=trajectories,
        arrival_steps=arrival,
        combined_path_length=sum(count_moves(t) for t in trajectories),
        step_events=events,
        wall_time=0.0,
        steps_run=step,
        status="ok" if all(arrived) else "step_limit",
        ranking=list(ranking) if ranking is not None else None,
        trace=trace,
    )


def run(scenario: Scenario, strategy: str = "freedom", config: Optional[RunConfig] = None) -> SimulationResult:
    """Plan and execute every robot's route to the common goal.

    Raises :class:`NoInitialPath` if a robot starts disconnected from the
    goal and :class:`StepLimitExceeded` (carrying the partial result) if the
    step limit is reached first.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {', '.join(STRATEGIES)}")
    config = config or RunConfig()
    seed = scenario.seed if config.seed is None else config.seed
    t0 = time.perf_counter()
    planners = _initial_planners(scenario)
    initial_costs = [p.cost_to_goal for p in planners]
    n = scenario.n_robots

    if strategy == "freedom":
        result = _simulate(scenario, planners, None, config)
    elif strategy == "farthest":
        result = _simulate(scenario, planners, order_farthest_first(initial_costs).robots, config)
    elif strategy == "random":
        result = _simulate(scenario, planners, order_random(n, seed).robots, config)
    else:
        evaluated: dict = {}

        def evaluate(ranking):
            key = tuple(ranking)
            if key not in evaluated:
                evaluated[key] = _simulate(scenario, _initial_planners(scenario), list(ranking), config)
            res = evaluated[key]
            return res.combined_path_length if res.status == "ok" else INF

        best = order_hill_climb(n, evaluate, config.hill_climb_budget, seed)
        result = evaluated[tuple(best.robots)]

    result.wall_time = time.perf_counter() - t0
    result.strategy = strategy
    result.initial_costs = initial_costs
    if result.status != "ok":
        raise StepLimitExceeded(result)
    return result


# -- auditing ----------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str  # vertex_collision | illegal_move | bad_endpoint | swap
    step: Optional[int]
    robots: tuple
    detail: str = ""

    def __str__(self):
        return f"{self.kind} at t={self.step} robots={list(self.robots)}: {self.detail}"


def validate(result: SimulationResult, scenario: Scenario, check_swaps: bool = False) -> list:
    """Audit trajectories directly, without any planner state."""
    out = []
    grid = scenario.grid
    trajs = result.trajectories
    if len(trajs) != scenario.n_robots:
        out.append(Violation("bad_endpoint", None, (), f"{len(trajs)} trajectories for {scenario.n_robots} robots"))
        return out
    for i, traj in enumerate(trajs):
        if not traj or traj[0] != scenario.starts[i]:
            out.append(Violation("bad_endpoint", 0, (i,), f"does not start at {scenario.starts[i]}"))
        if result.status == "ok" and (not traj or traj[-1] != scenario.goal):
            out.append(Violation("bad_endpoint", len(traj) - 1, (i,), f"does not end at goal {scenario.goal}"))
        for t, (a, b) in enumerate(zip(traj, traj[1:])):
            if not grid.is_free(b):
                out.append(Violation("illegal_move", t + 1, (i,), f"enters blocked cell {b}"))
            elif a == b:
                stayed = t < len(result.step_events) and i in result.step_events[t].forced_stay
                if not stayed:
                    out.append(Violation("illegal_move", t + 1, (i,), f"unrecorded stay at {a}"))
            elif not is_neighbor(a, b):
                out.append(Violation("illegal_move", t + 1, (i,), f"{a} -> {b} is not a 4-neighbour move"))
    horizon = max((len(t) for t in trajs), default=0)
    for t in range(horizon):
        seen: dict = {}
        for i, traj in enumerate(trajs):
            if t < len(traj):
                cell = traj[t]
                if cell in seen:
                    out.append(Violation("vertex_collision", t, (seen[cell], i), f"both at {cell}"))
                else:
                    seen[cell] = i
        if check_swaps and t > 0:
            for i in range(len(trajs)):
                for j in range(i + 1, len(trajs)):
                    if t < len(trajs[i]) and t < len(trajs[j]):
                        a0, a1 = trajs[i][t - 1], trajs[i][t]
                        b0, b1 = trajs[j][t - 1], trajs[j][t]
                        if a0 != a1 and a1 == b0 and b1 == a0:
                            out.append(Violation("swap", t, (i, j), f"exchange {a0} <-> {b0}"))
    return out


# -- serialization -----------------------------------------------------------


def result_to_dict(result: SimulationResult, scenario: Scenario) -> dict:
    return {
        "schema": RESULT_SCHEMA,
        "scenario": scenario_to_dict(scenario),
        "strategy": result.strategy,
        "status": result.status,
        "combined_path_length": result.combined_path_length,
        "steps_run": result.steps_run,
        "wall_time_s": result.wall_time,
        "robots": [
            {
                "index": i,
                "start": list(traj[0]),
                "arrival_step": result.arrival_steps[i],
                "initial_cost": result.initial_costs[i] if i < len(result.initial_costs) else None,
                "trajectory": [list(c) for c in traj],
            }
            for i, traj in enumerate(result.trajectories)
        ],
        "ranking": result.ranking,
        "events": [dict(step=t, **e.to_dict()) for t, e in enumerate(result.step_events) if e],
        "totals": {"reroutes": result.reroutes, "fallbacks": result.fallbacks, "forced_stays": result.forced_stays},
    }


def result_from_dict(d: dict) -> tuple:
    if d.get("schema") != RESULT_SCHEMA:
        raise ValueError(f"unsupported result schema {d.get('schema')!r}")
    scenario = scenario_from_dict(d["scenario"])
    events = [StepEvents() for _ in range(d["steps_run"])]
    for e in d["events"]:
        events[e["step"]] = StepEvents.from_dict(e)
    robots = sorted(d["robots"], key=lambda r: r["index"])
    result = SimulationResult(
        trajectories=[[tuple(c) for c in r["trajectory"]] for r in robots],
        arrival_steps=[r["arrival_step"] for r in robots],
        combined_path_length=d["combined_path_length"],
        step_events=events,
        wall_time=d["wall_time_s"],
        steps_run=d["steps_run"],
        strategy=d["strategy"],
        status=d["status"],
        initial_costs=[r.get("initial_cost") for r in robots],
        ranking=d.get("ranking"),
    )
    return result, scenario


def save_result(result: SimulationResult, scenario: Scenario, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(json.dumps(result_to_dict(result, scenario), indent=1) + "\n")
    return path


def load_result(path: Union[str, Path]) -> tuple:
    return result_from_dict(json.loads(Path(path).read_text()))
