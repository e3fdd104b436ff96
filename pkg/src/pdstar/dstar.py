"""Incremental single-robot search (D* Lite) over a :class:`CostMap`.

The search runs from the goal towards the robot, so ``g[s]`` is the cost to go
from ``s`` to the goal. Moving the robot or changing edge costs only repairs
the part of the search tree that is affected.
"""
from __future__ import annotations

import heapq
from typing import Iterable, Optional

from .grid import INF, Cell, CostMap, GridError, manhattan

Key = tuple  # (k1, k2), compared lexicographically

_NO_KEY = (INF, INF)


class NoPath(Exception):
    """No finite-cost path from the robot's cell to the goal."""


class PlannerState:
    """One robot's search state: g, rhs, the open queue and the key offset.

    The queue uses lazy deletion: ``_queued`` maps each live cell to its
    current key and heap entries that disagree with it are skipped.
    """

    __slots__ = ("costmap", "start", "goal", "g", "rhs", "k_m", "s_last", "_heap", "_queued", "expansions")

    def __init__(self, costmap: CostMap, start: Cell, goal: Cell):
        self.costmap = costmap
        self.start = start
        self.goal = goal
        self.g: dict = {}
        self.rhs: dict = {goal: 0}
        self.k_m = 0
        self.s_last = start
        self._heap: list = []
        self._queued: dict = {}
        self.expansions = 0
        self._insert(goal, self.calculate_key(goal))

    # -- queue ---------------------------------------------------------------

    def _insert(self, u: Cell, key: Key) -> None:
        self._queued[u] = key
        heapq.heappush(self._heap, (key[0], key[1], u))

    def _discard_stale(self) -> None:
        heap, queued = self._heap, self._queued
        while heap:
            k1, k2, u = heap[0]
            live = queued.get(u)
            if live is not None and live[0] == k1 and live[1] == k2:
                return
            heapq.heappop(heap)

    def top_key(self) -> Key:
        self._discard_stale()
        if not self._heap:
            return _NO_KEY
        k1, k2, _ = self._heap[0]
        return (k1, k2)

    def queue_items(self) -> dict:
        """Live queue contents as ``{cell: key}``."""
        return dict(self._queued)

    def __contains__(self, u: Cell) -> bool:
        return u in self._queued

    # -- core ----------------------------------------------------------------

    def calculate_key(self, s: Cell) -> Key:
        m = min(self.g.get(s, INF), self.rhs.get(s, INF))
        return (m + manhattan(self.start, s) + self.k_m, m)

    def h(self, a: Cell, b: Cell) -> int:
        return manhattan(a, b)

    def update_vertex(self, u: Cell) -> None:
        g = self.g
        if u != self.goal:
            cm = self.costmap
            obstacles = cm.grid.obstacles
            overrides = cm.overrides
            best = INF
            for s in cm.grid._neighbors[u]:
                if s in obstacles or (overrides and (u, s) in overrides):
                    continue
                val = 1 + g.get(s, INF)
                if val < best:
                    best = val
            self.rhs[u] = best
        self._queued.pop(u, None)
        if g.get(u, INF) != self.rhs.get(u, INF):
            self._insert(u, self.calculate_key(u))

    def compute_shortest_path(self) -> None:
        g, rhs = self.g, self.rhs
        neighbors = self.costmap.grid._neighbors
        heap, queued = self._heap, self._queued
        while True:
            top = self.top_key()
            start = self.start
            if not (top < self.calculate_key(start) or rhs.get(start, INF) != g.get(start, INF)):
                break
            if not heap:
                break
            k1, k2, u = heapq.heappop(heap)
            del queued[u]
            self.expansions += 1
            k_new = self.calculate_key(u)
            if (k1, k2) < k_new:
                self._insert(u, k_new)
            elif g.get(u, INF) > rhs.get(u, INF):
                g[u] = rhs[u]
                for s in neighbors[u]:
                    self.update_vertex(s)
            else:
                g[u] = INF
                for s in neighbors[u]:
                    self.update_vertex(s)
                self.update_vertex(u)
            # keep the heap from growing without bound under lazy deletion
            if len(heap) > 64 and len(heap) > 4 * len(queued):
                self._compact()

    def _compact(self) -> None:
        self._heap[:] = [(k[0], k[1], u) for u, k in self._queued.items()]
        heapq.heapify(self._heap)

    def next_step(self) -> Cell:
        """Successor of the robot's cell minimising edge cost plus cost-to-go."""
        if self.start == self.goal:
            return self.goal
        if self.g.get(self.start, INF) == INF:
            raise NoPath(f"no path from {self.start} to {self.goal}")
        cm, g, u = self.costmap, self.g, self.start
        best, best_cell = INF, None
        for s in cm.grid._neighbors[u]:
            val = cm.cost(u, s) + g.get(s, INF)
            if val < best:
                best, best_cell = val, s
        if best_cell is None:
            raise NoPath(f"every successor of {u} is blocked")
        return best_cell

    def apply_edge_changes(
        self,
        changes: Iterable[tuple],
        new_start: Cell,
        costmap: Optional[CostMap] = None,
    ) -> None:
        """Move the robot to ``new_start`` and repair after edge-cost changes.

        ``changes`` holds ``(u, v, new_cost)`` triples. Infinite costs are
        written as virtual obstacles; finite ones require ``costmap`` (the
        already-edited map) since overrides can only block edges.
        """
        changes = list(changes)
        if costmap is not None:
            self.costmap = costmap
        for u, v, new_cost in changes:
            if self.costmap.cost(u, v) != new_cost:
                if new_cost == INF:
                    self.costmap = self.costmap.add_virtual_obstacle(u, v)
                else:
                    raise GridError(f"edge {u}->{v} cannot be set to {new_cost} without an edited costmap")
        self.k_m += manhattan(self.s_last, new_start)
        self.s_last = new_start
        self.start = new_start
        for u, _v, _c in changes:
            self.update_vertex(u)
        self.compute_shortest_path()

    def copy(self) -> "PlannerState":
        other = PlannerState.__new__(PlannerState)
        other.costmap = self.costmap
        other.start = self.start
        other.goal = self.goal
        other.g = dict(self.g)
        other.rhs = dict(self.rhs)
        other.k_m = self.k_m
        other.s_last = self.s_last
        other._heap = list(self._heap)
        other._queued = dict(self._queued)
        other.expansions = self.expansions
        return other

    def snapshot(self) -> tuple:
        """Comparable view of the full state (used to check clone isolation)."""
        return (
            self.costmap,
            self.start,
            self.goal,
            self.k_m,
            self.s_last,
            tuple(sorted((k, v) for k, v in self.g.items())),
            tuple(sorted(self.rhs.items())),
            tuple(sorted(self._queued.items())),
        )

    def path(self, limit: Optional[int] = None) -> list:
        """Greedy descent from the robot's cell to the goal."""
        path = [self.start]
        u = self.start
        limit = limit if limit is not None else len(self.costmap.grid.cells()) + 1
        cm, g = self.costmap, self.g
        while u != self.goal and len(path) <= limit:
            best, nxt = INF, None
            for s in cm.grid._neighbors[u]:
                val = cm.cost(u, s) + g.get(s, INF)
                if val < best:
                    best, nxt = val, s
            if nxt is None:
                raise NoPath(f"path broken at {u}")
            path.append(nxt)
            u = nxt
        return path

    @property
    def cost_to_goal(self) -> float:
        return self.g.get(self.start, INF)


def initialize(costmap: CostMap, start: Cell, goal: Cell) -> PlannerState:
    grid = costmap.grid
    for name, cell in (("start", start), ("goal", goal)):
        if not grid.in_bounds(cell):
            raise GridError(f"{name} {cell} outside the grid")
        if grid.is_obstacle(cell):
            raise GridError(f"{name} {cell} is an obstacle")
    return PlannerState(costmap, start, goal)


def calculate_key(p: PlannerState, s: Cell) -> Key:
    return p.calculate_key(s)


def update_vertex(p: PlannerState, u: Cell) -> PlannerState:
    p.update_vertex(u)
    return p


def compute_shortest_path(p: PlannerState) -> PlannerState:
    p.compute_shortest_path()
    return p


def next_step(p: PlannerState) -> Cell:
    return p.next_step()


def apply_edge_changes(
    p: PlannerState,
    changes: Iterable[tuple],
    new_start: Cell,
    costmap: Optional[CostMap] = None,
) -> PlannerState:
    p.apply_edge_changes(changes, new_start, costmap)
    return p


def plan(costmap: CostMap, start: Cell, goal: Cell) -> PlannerState:
    """Initialise and run the first search."""
    p = initialize(costmap, start, goal)
    p.compute_shortest_path()
    return p
