"""Seeded random scenarios: goal at the centre, exact obstacle count, connected starts."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from .grid import GridWorld, Scenario, bfs_distances

MAX_ATTEMPTS = 100


class GenerationFailed(ValueError):
    pass


@dataclass(frozen=True)
class GenConfig:
    width: int
    height: int
    density: float
    robots: int
    seed: int = 0

    @property
    def n_obstacles(self) -> int:
        # guard against 0.29 * 100 == 28.999...
        return math.floor(self.density * self.width * self.height + 1e-9)

    @property
    def goal(self) -> tuple:
        return (self.width // 2, self.height // 2)

    def check(self) -> None:
        if self.width < 1 or self.height < 1:
            raise GenerationFailed(f"grid must be at least 1x1, got {self.width}x{self.height}")
        if not 0 <= self.density < 1:
            raise GenerationFailed(f"density must lie in [0, 1), got {self.density}")
        if self.robots < 0:
            raise GenerationFailed(f"robot count must be non-negative, got {self.robots}")
        if self.n_obstacles + self.robots + 1 > self.width * self.height:
            raise GenerationFailed(
                f"{self.n_obstacles} obstacles + {self.robots} robots + goal do not fit "
                f"in {self.width}x{self.height}"
            )


def generate(cfg: GenConfig) -> Scenario:
    cfg.check()
    rng = random.Random(cfg.seed)
    goal = cfg.goal
    candidates = [(x, y) for y in range(cfg.height) for x in range(cfg.width) if (x, y) != goal]
    for _ in range(MAX_ATTEMPTS):
        obstacles = frozenset(rng.sample(candidates, cfg.n_obstacles))
        grid = GridWorld(cfg.width, cfg.height, obstacles)
        component = bfs_distances(grid, goal)
        if len(component) < cfg.robots + 1:
            continue
        pool = sorted((c for c in component if c != goal), key=lambda c: (c[1], c[0]))
        starts = tuple(rng.sample(pool, cfg.robots))
        return Scenario(grid, starts, goal, cfg.seed)
    raise GenerationFailed(
        f"goal component too small for {cfg.robots} robots after {MAX_ATTEMPTS} attempts "
        f"(density {cfg.density})"
    )


def batch(cfgs: Sequence[GenConfig]) -> tuple:
    """Generate one scenario per config without letting one failure abort the rest.

    Returns ``(scenarios, failures)`` where ``scenarios`` maps config index to
    scenario and ``failures`` maps config index to the error.
    """
    scenarios, failures = {}, {}
    for i, cfg in enumerate(cfgs):
        try:
            scenarios[i] = generate(cfg)
        except GenerationFailed as exc:
            failures[i] = exc
    return scenarios, failures
