"""4-connected occupancy grids, per-robot cost overlays and scenario files.

Cells are ``(x, y)`` tuples with ``(0, 0)`` in the top-left corner; "up"
decrements ``y``. Every edge between in-bounds neighbours costs 1 unless the
target cell is an obstacle or the directed edge carries a virtual obstacle,
in which case it costs ``math.inf``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Union

INF = math.inf

Cell = tuple[int, int]

# up, down, left, right -- every tie-break downstream inherits this order
OFFSETS: tuple[Cell, ...] = ((0, -1), (0, 1), (-1, 0), (1, 0))

# robot markers for ascii grids; 'G', '#', '.' stay unambiguous
MARKERS = "0123456789abcdefghijklmnopqrstuvwxyz"


class GridError(ValueError):
    """Raised on out-of-bounds cells and malformed grid input."""


@dataclass(frozen=True)
class GridWorld:
    width: int
    height: int
    obstacles: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise GridError(f"grid must be at least 1x1, got {self.width}x{self.height}")
        obstacles = frozenset((int(x), int(y)) for x, y in self.obstacles)
        for cell in obstacles:
            if not self.in_bounds(cell):
                raise GridError(f"obstacle {cell} outside {self.width}x{self.height} grid")
        object.__setattr__(self, "obstacles", obstacles)
        # neighbour table, built once; GridWorld is immutable afterwards
        table = {}
        for y in range(self.height):
            for x in range(self.width):
                table[(x, y)] = tuple(
                    (x + dx, y + dy)
                    for dx, dy in OFFSETS
                    if 0 <= x + dx < self.width and 0 <= y + dy < self.height
                )
        object.__setattr__(self, "_neighbors", table)

    def __hash__(self):
        return hash((self.width, self.height, self.obstacles))

    def __eq__(self, other):
        if not isinstance(other, GridWorld):
            return NotImplemented
        return (self.width, self.height, self.obstacles) == (
            other.width,
            other.height,
            other.obstacles,
        )

    def in_bounds(self, cell: Cell) -> bool:
        x, y = cell
        return 0 <= x < self.width and 0 <= y < self.height

    def is_obstacle(self, cell: Cell) -> bool:
        return cell in self.obstacles

    def is_free(self, cell: Cell) -> bool:
        return self.in_bounds(cell) and cell not in self.obstacles

    def successors(self, u: Cell) -> tuple[Cell, ...]:
        """In-bounds 4-neighbours of ``u`` in (up, down, left, right) order.

        Obstacle cells are included; cost queries tell them apart.
        """
        try:
            return self._neighbors[u]
        except KeyError:
            raise GridError(f"cell {u} outside {self.width}x{self.height} grid") from None

    # undirected base graph
    predecessors = successors

    def cells(self) -> list[Cell]:
        return [(x, y) for y in range(self.height) for x in range(self.width)]

    def free_cells(self) -> list[Cell]:
        return [c for c in self.cells() if c not in self.obstacles]

    def with_obstacles(self, obstacles: Iterable[Cell]) -> "GridWorld":
        return GridWorld(self.width, self.height, frozenset(obstacles))


def is_neighbor(u: Cell, v: Cell) -> bool:
    return abs(u[0] - v[0]) + abs(u[1] - v[1]) == 1


class CostMap:
    """A robot's view of edge costs: the base grid plus directed virtual obstacles.

    Copies are cheap and independent; ``add_virtual_obstacle`` never mutates
    the receiver.
    """

    __slots__ = ("grid", "overrides")

    def __init__(self, grid: GridWorld, overrides: Iterable[tuple[Cell, Cell]] = ()):
        self.grid = grid
        self.overrides = frozenset(overrides)

    def __repr__(self):
        return f"CostMap({self.grid.width}x{self.grid.height}, overrides={sorted(self.overrides)})"

    def __eq__(self, other):
        if not isinstance(other, CostMap):
            return NotImplemented
        return self.grid == other.grid and self.overrides == other.overrides

    def __hash__(self):
        return hash((self.grid, self.overrides))

    def successors(self, u: Cell) -> tuple[Cell, ...]:
        return self.grid.successors(u)

    def predecessors(self, u: Cell) -> tuple[Cell, ...]:
        return self.grid.successors(u)

    def cost(self, u: Cell, v: Cell) -> float:
        if (
            v in self.grid.obstacles
            or not is_neighbor(u, v)
            or not self.grid.in_bounds(v)
            or (self.overrides and (u, v) in self.overrides)
        ):
            return INF
        return 1

    def add_virtual_obstacle(self, u: Cell, v: Cell) -> "CostMap":
        if not is_neighbor(u, v):
            raise GridError(f"{u} and {v} are not 4-neighbours")
        return CostMap(self.grid, self.overrides | {(u, v)})

    def with_grid(self, grid: GridWorld) -> "CostMap":
        """Same overrides over a different base grid (used for obstacle edits)."""
        return CostMap(grid, self.overrides)


def successors(g: Union[GridWorld, CostMap], u: Cell) -> list[Cell]:
    return list(g.successors(u))


def cost(c: CostMap, u: Cell, v: Cell) -> float:
    if not (c.grid.in_bounds(u) and c.grid.in_bounds(v)):
        raise GridError(f"edge {u}->{v} leaves the grid")
    return c.cost(u, v)


def add_virtual_obstacle(c: CostMap, u: Cell, v: Cell) -> CostMap:
    return c.add_virtual_obstacle(u, v)


def manhattan(a: Cell, b: Cell) -> int:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


# -- scenarios ---------------------------------------------------------------


@dataclass(frozen=True)
class Scenario:
    """A world, the robots' start cells and their common goal."""

    grid: GridWorld
    starts: tuple
    goal: Cell
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "starts", tuple((int(x), int(y)) for x, y in self.starts))
        object.__setattr__(self, "goal", (int(self.goal[0]), int(self.goal[1])))

    @property
    def n_robots(self) -> int:
        return len(self.starts)

    def problems(self) -> list[str]:
        """Static invariant violations; connectivity is checked separately."""
        out = []
        grid = self.grid
        if not grid.in_bounds(self.goal):
            out.append(f"goal {self.goal} out of bounds")
        elif grid.is_obstacle(self.goal):
            out.append(f"goal {self.goal} is an obstacle")
        seen = set()
        for i, s in enumerate(self.starts):
            if not grid.in_bounds(s):
                out.append(f"start of robot {i} {s} out of bounds")
            elif grid.is_obstacle(s):
                out.append(f"start of robot {i} {s} is an obstacle")
            if s == self.goal:
                out.append(f"start of robot {i} is the goal")
            if s in seen:
                out.append(f"start {s} used by more than one robot")
            seen.add(s)
        return out


def scenario_to_dict(s: Scenario) -> dict:
    return {
        "width": s.grid.width,
        "height": s.grid.height,
        "goal": list(s.goal),
        "starts": [list(c) for c in s.starts],
        "obstacles": [list(c) for c in sorted(s.grid.obstacles, key=lambda c: (c[1], c[0]))],
        "seed": s.seed,
    }


def scenario_from_dict(d: dict) -> Scenario:
    try:
        grid = GridWorld(int(d["width"]), int(d["height"]), frozenset(tuple(c) for c in d["obstacles"]))
        return Scenario(grid, tuple(tuple(c) for c in d["starts"]), tuple(d["goal"]), int(d.get("seed", 0)))
    except (KeyError, TypeError) as exc:
        raise GridError(f"malformed scenario document: {exc}") from exc


def grid_rows(s: Scenario, markers: bool = True) -> list[str]:
    rows = [["." for _ in range(s.grid.width)] for _ in range(s.grid.height)]
    for x, y in s.grid.obstacles:
        rows[y][x] = "#"
    if markers:
        if s.n_robots > len(MARKERS):
            raise GridError(
                f"{s.n_robots} robots exceed the {len(MARKERS)} ascii markers; render as SVG instead"
            )
        for i, (x, y) in enumerate(s.starts):
            rows[y][x] = MARKERS[i]
    gx, gy = s.goal
    rows[gy][gx] = "G"
    return ["".join(r) for r in rows]


def format_scenario(s: Scenario) -> str:
    """Text scenario format; a trailing ``seed`` line is optional on input."""
    lines = [f"{s.grid.width} {s.grid.height}", f"{s.goal[0]} {s.goal[1]}", str(s.n_robots)]
    lines += [f"{x} {y}" for x, y in s.starts]
    lines += grid_rows(s, markers=s.n_robots <= len(MARKERS))
    lines.append(f"seed {s.seed}")
    return "\n".join(lines) + "\n"


def parse_scenario(text: str) -> Scenario:
    """Parse the text format, or its JSON equivalent if the text is an object."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            return scenario_from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise GridError(f"bad scenario json: {exc}") from exc

    lines = [ln.rstrip("\r") for ln in text.splitlines()]
    lines = [ln for ln in lines if ln.strip()]
    try:
        width, height = (int(t) for t in lines[0].split())
        gx, gy = (int(t) for t in lines[1].split())
        n = int(lines[2])
        starts = []
        for ln in lines[3 : 3 + n]:
            x, y = (int(t) for t in ln.split())
            starts.append((x, y))
        rows = lines[3 + n : 3 + n + height]
    except (IndexError, ValueError) as exc:
        raise GridError(f"malformed scenario header: {exc}") from exc
    if len(rows) != height or any(len(r) != width for r in rows):
        raise GridError(f"expected {height} grid rows of width {width}")
    obstacles = {(x, y) for y, row in enumerate(rows) for x, ch in enumerate(row) if ch == "#"}
    seed = 0
    for ln in lines[3 + n + height :]:
        parts = ln.split()
        if len(parts) == 2 and parts[0] == "seed":
            seed = int(parts[1])
        else:
            raise GridError(f"unexpected trailing line {ln!r}")
    return Scenario(GridWorld(width, height, frozenset(obstacles)), tuple(starts), (gx, gy), seed)


def parse_ascii(text: str, seed: int = 0) -> Scenario:
    """Recover a scenario from a bare ascii grid (markers give the starts)."""
    rows = [ln.rstrip("\r") for ln in text.splitlines() if ln.strip()]
    if not rows or len({len(r) for r in rows}) != 1:
        raise GridError("ascii grid rows must be non-empty and equally wide")
    obstacles, starts, goal = set(), {}, None
    for y, row in enumerate(rows):
        for x, ch in enumerate(row):
            if ch == "#":
                obstacles.add((x, y))
            elif ch == "G":
                goal = (x, y)
            elif ch in MARKERS:
                starts[MARKERS.index(ch)] = (x, y)
            elif ch != ".":
                raise GridError(f"unknown grid character {ch!r} at {(x, y)}")
    if goal is None:
        raise GridError("ascii grid has no goal")
    if sorted(starts) != list(range(len(starts))):
        raise GridError("robot markers must be contiguous from 0")
    return Scenario(
        GridWorld(len(rows[0]), len(rows), frozenset(obstacles)),
        tuple(starts[i] for i in range(len(starts))),
        goal,
        seed,
    )


def load_scenario(path: Union[str, Path]) -> Scenario:
    return parse_scenario(Path(path).read_text())


def save_scenario(s: Scenario, path: Union[str, Path], as_json: bool = False) -> Path:
    path = Path(path)
    if as_json:
        path.write_text(json.dumps(scenario_to_dict(s), indent=1) + "\n")
    else:
        path.write_text(format_scenario(s))
    return path


def bfs_distances(grid: GridWorld, source: Cell) -> dict:
    """Hop distances from ``source`` over free cells (used as an oracle and by worldgen)."""
    from collections import deque

    if not grid.is_free(source):
        return {}
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in grid.successors(u):
            if v not in dist and v not in grid.obstacles:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist
