"""Per-step deconfliction of proposed moves using one-step virtual obstacles."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

from .dstar import PlannerState
from .grid import INF, Cell
from .priority import PriorityOrder


@dataclass
class StepPlan:
    proposed: list
    order: PriorityOrder
    previous: list


@dataclass
class StepEvents:
    rerouted: set = field(default_factory=set)
    fell_back: set = field(default_factory=set)
    forced_stay: set = field(default_factory=set)

    def __bool__(self):
        return bool(self.rerouted or self.fell_back or self.forced_stay)

    def to_dict(self) -> dict:
        return {
            "rerouted": sorted(self.rerouted),
            "fell_back": sorted(self.fell_back),
            "forced_stay": sorted(self.forced_stay),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "StepEvents":
        return cls(set(d.get("rerouted", ())), set(d.get("fell_back", ())), set(d.get("forced_stay", ())))


def detect_collisions(
    proposed: Sequence[Cell],
    committed_mask,
    previous: Optional[Sequence[Cell]] = None,
    forbid_swaps: bool = False,
) -> set:
    """Pairs ``(i, j)``, ``i < j``, of robots in ``committed_mask`` that collide.

    Two robots collide when they end the step on the same cell. With
    ``forbid_swaps`` a head-on exchange (each moving onto the other's
    previous cell) also counts.
    """
    robots = sorted(committed_mask)
    pairs = set()
    for i, j in combinations(robots, 2):
        if proposed[i] == proposed[j]:
            pairs.add((i, j))
        elif forbid_swaps and previous is not None:
            if proposed[i] == previous[j] and proposed[j] == previous[i]:
                pairs.add((i, j))
    return pairs


class _Commitments:
    def __init__(self, current: Sequence[Cell], forbid_swaps: bool):
        self.current = current
        self.forbid_swaps = forbid_swaps
        self.cells: dict = {}  # committed cell -> robot (active robots only)

    def clashes(self, robot: int, cell: Cell) -> bool:
        other = self.cells.get(cell)
        if other is not None and other != robot:
            return True
        if self.forbid_swaps:
            j = self.cells.get(self.current[robot])
            if j is not None and j != robot and self.current[j] == cell:
                return True
        return False

    def commit(self, robot: int, cell: Cell) -> None:
        self.cells[cell] = robot


def _reroute(
    robot: int,
    planner: PlannerState,
    blocked: Cell,
    previous: Cell,
    taken: _Commitments,
    events: StepEvents,
) -> Cell:
    events.rerouted.add(robot)
    here = planner.start
    clone = planner.copy()
    cell = blocked
    while True:
        clone.costmap = clone.costmap.add_virtual_obstacle(here, cell)
        clone.update_vertex(here)
        clone.compute_shortest_path()
        if clone.cost_to_goal == INF:
            break
        cell = clone.next_step()
        if not taken.clashes(robot, cell):
            return cell
    # no path around the claimed cells: step back, or stay as a last resort
    events.fell_back.add(robot)
    if previous != here and not taken.clashes(robot, previous):
        return previous
    events.forced_stay.add(robot)
    return here


def resolve_conflicts(
    plan: StepPlan,
    planners: Sequence[PlannerState],
    forbid_swaps: bool = False,
) -> tuple:
    """Commit one cell per robot, visiting robots in priority order.

    Returns a new :class:`StepPlan` with the committed cells and the
    :class:`StepEvents` of this step. Planners are never mutated; reroutes
    work on throwaway copies. Arrived robots are not collision-checked.

    A forced stay can land on a cell an earlier robot already claimed. Such
    robots are pinned in place and the pass is repeated with their cells
    reserved up front; each repeat pins at least one more robot.
    """
    current = [p.start for p in planners]
    pinned: set = set()
    while True:
        events = StepEvents()
        taken = _Commitments(current, forbid_swaps)
        committed = list(plan.proposed)
        for i in sorted(pinned):
            taken.commit(i, current[i])
            committed[i] = current[i]
            events.fell_back.add(i)
            events.forced_stay.add(i)
        collided = []
        for entry in plan.order:
            i = entry.robot
            if entry.arrived or i in pinned:
                continue
            cell = plan.proposed[i]
            if taken.clashes(i, cell):
                cell = _reroute(i, planners[i], cell, plan.previous[i], taken, events)
                if cell == current[i] and taken.clashes(i, cell):
                    collided.append(i)
                    continue
            taken.commit(i, cell)
            committed[i] = cell
        if not collided:
            return StepPlan(committed, plan.order, list(plan.previous)), events
        pinned.update(collided)
