"""Independent reference computations used as test oracles.

Nothing here imports the planner, the generator or the grid helpers under
test beyond plain data containers.
"""
from __future__ import annotations

import random
from collections import deque

from pdstar.grid import GridWorld, Scenario


def bfs(width, height, obstacles, source):
    """Hop distances from ``source`` over a 4-connected grid."""
    if source in obstacles:
        return {}
    dist = {source: 0}
    q = deque([source])
    while q:
        x, y = q.popleft()
        for nx, ny in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if 0 <= nx < width and 0 <= ny < height and (nx, ny) not in obstacles and (nx, ny) not in dist:
                dist[(nx, ny)] = dist[(x, y)] + 1
                q.append((nx, ny))
    return dist


def flood_fill(grid: GridWorld, source):
    """Connected component of ``source`` via an explicit stack (not BFS)."""
    seen = {source}
    stack = [source]
    while stack:
        x, y = stack.pop()
        for nx, ny in ((x, y - 1), (x - 1, y), (x + 1, y), (x, y + 1)):
            c = (nx, ny)
            if 0 <= nx < grid.width and 0 <= ny < grid.height and c not in grid.obstacles and c not in seen:
                seen.add(c)
                stack.append(c)
    return seen


def random_grid(rng: random.Random, width, height, density, keep=()):
    cells = [(x, y) for y in range(height) for x in range(width) if (x, y) not in keep]
    k = int(density * width * height)
    return GridWorld(width, height, frozenset(rng.sample(cells, k)))


def random_free_pair(rng: random.Random, grid: GridWorld):
    free = grid.free_cells()
    return tuple(rng.sample(free, 2))


def brute_freedom(grid: GridWorld, overrides, u):
    x, y = u
    count = 0
    for v in ((x, y - 1), (x, y + 1), (x - 1, y), (x + 1, y)):
        if 0 <= v[0] < grid.width and 0 <= v[1] < grid.height and v not in grid.obstacles and (u, v) not in overrides:
            count += 1
    return count


def shortest_sum(scenario: Scenario):
    dist = bfs(scenario.grid.width, scenario.grid.height, scenario.grid.obstacles, scenario.goal)
    return sum(dist[s] for s in scenario.starts)


def trajectory_collisions(trajectories):
    """Number of (t, cell) pairs shared by two trajectories still in play."""
    horizon = max(len(t) for t in trajectories)
    clashes = 0
    for t in range(horizon):
        cells = [traj[t] for traj in trajectories if t < len(traj)]
        clashes += len(cells) - len(set(cells))
    return clashes
