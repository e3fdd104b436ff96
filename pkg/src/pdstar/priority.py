"""Robot priority orders: the per-step freedom index and static baselines."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .grid import INF, Cell, CostMap

STRATEGIES = ("freedom", "farthest", "random", "hillclimb")


class InvalidScenario(ValueError):
    pass


@dataclass(frozen=True)
class PriorityEntry:
    robot: int
    freedom: Optional[int] = None
    arrived: bool = False


@dataclass(frozen=True)
class PriorityOrder:
    entries: tuple

    @property
    def robots(self) -> list:
        return [e.robot for e in self.entries]

    @property
    def active(self) -> list:
        return [e.robot for e in self.entries if not e.arrived]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def compute_freedom(costmap: CostMap, robot: int, u: Cell) -> int:
    """Number of neighbours of ``u`` the robot could step into next.

    Only walls, the border and the robot's own virtual obstacles count;
    other robots never reduce freedom. ``robot`` is carried for symmetry
    with the per-robot cost maps.
    """
    return sum(1 for s in costmap.successors(u) if costmap.cost(u, s) != INF)


def order_freedom_index(
    costmaps: Sequence[CostMap],
    positions: Sequence[Cell],
    arrived: Sequence[bool],
) -> PriorityOrder:
    active = [
        PriorityEntry(i, compute_freedom(costmaps[i], i, positions[i]))
        for i in range(len(positions))
        if not arrived[i]
    ]
    active.sort(key=lambda e: (e.freedom, e.robot))
    done = [PriorityEntry(i, None, True) for i in range(len(positions)) if arrived[i]]
    return PriorityOrder(tuple(active + done))


def static_order(ranking: Sequence[int], arrived: Sequence[bool]) -> PriorityOrder:
    """Apply a fixed robot ranking at one step; arrived robots go last in index order."""
    active = [PriorityEntry(i) for i in ranking if not arrived[i]]
    done = [PriorityEntry(i, None, True) for i in range(len(arrived)) if arrived[i]]
    return PriorityOrder(tuple(active + done))


def order_farthest_first(initial_costs: Sequence[float]) -> PriorityOrder:
    """Static order, longest initial shortest path first."""
    for i, c in enumerate(initial_costs):
        if c == INF or (isinstance(c, float) and math.isnan(c)):
            raise InvalidScenario(f"robot {i} has no path to the goal")
    ranking = sorted(range(len(initial_costs)), key=lambda i: (-initial_costs[i], i))
    return PriorityOrder(tuple(PriorityEntry(i) for i in ranking))


def order_random(n: int, seed) -> PriorityOrder:
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    ranking = list(range(n))
    rng.shuffle(ranking)
    return PriorityOrder(tuple(PriorityEntry(i) for i in ranking))


def order_hill_climb(
    n: int,
    evaluator: Callable[[list], float],
    budget: int,
    seed,
    trace: Optional[list] = None,
) -> PriorityOrder:
    """Local search over static orders by random pairwise swaps.

    ``evaluator`` maps a robot ranking to the combined path length of a full
    run (``inf`` on failure). A swap is kept only if it strictly lowers that
    length. If ``trace`` is given, the accepted cost after every proposal is
    appended to it (the initial cost first).
    """
    rng = random.Random(seed)
    current = order_random(n, rng).robots
    best = evaluator(list(current))
    if trace is not None:
        trace.append(best)
    for _ in range(budget):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        candidate = list(current)
        candidate[i], candidate[j] = candidate[j], candidate[i]
        score = evaluator(candidate)
        if score < best:
            current, best = candidate, score
        if trace is not None:
            trace.append(best)
    return PriorityOrder(tuple(PriorityEntry(i) for i in current))
