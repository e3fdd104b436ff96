"""Estimator-style wrapper so planners can be configured, cloned and swept like sklearn models."""
from __future__ import annotations

from typing import Optional

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .engine import RunConfig, run
from .validation import check_scenario, check_strategy


class PDStarPlanner(BaseEstimator):
    """Multi-robot planner with a configurable prioritisation strategy.

    Parameters
    ----------
    strategy : {"freedom", "farthest", "random", "hillclimb"}
        How robots are ranked when their proposed moves collide.
    forbid_swaps : bool
        Also treat head-on exchanges between neighbours as collisions.
    max_steps : int or None
        Step limit; defaults to ``10 * (width + height)``.
    hill_climb_budget : int
        Number of swap proposals for the ``hillclimb`` strategy.
    seed : int or None
        Overrides the scenario seed for the randomised strategies.

    Attributes
    ----------
    result_ : SimulationResult
    trajectories_ : list of list of (x, y)
    path_length_ : int
        Combined number of moves of all robots.
    n_robots_ : int
    """

    def __init__(
        self,
        strategy: str = "freedom",
        forbid_swaps: bool = False,
        max_steps: Optional[int] = None,
        hill_climb_budget: int = 10,
        seed: Optional[int] = None,
    ):
        self.strategy = strategy
        self.forbid_swaps = forbid_swaps
        self.max_steps = max_steps
        self.hill_climb_budget = hill_climb_budget
        self.seed = seed

    def _config(self) -> RunConfig:
        return RunConfig(
            max_steps=self.max_steps,
            forbid_swaps=self.forbid_swaps,
            hill_climb_budget=self.hill_climb_budget,
            seed=self.seed,
        )

    def _run(self, X):
        scenario = check_scenario(X)
        return scenario, run(scenario, check_strategy(self.strategy), self._config())

    def fit(self, X, y=None):
        self.scenario_, self.result_ = self._run(X)
        self.trajectories_ = self.result_.trajectories
        self.path_length_ = self.result_.combined_path_length
        self.n_robots_ = self.scenario_.n_robots
        return self

    def predict(self, X=None):
        """Trajectories for ``X``, or for the fitted scenario when ``X`` is None."""
        check_is_fitted(self, "result_")
        if X is None:
            return self.trajectories_
        return self._run(X)[1].trajectories

    def fit_predict(self, X, y=None):
        return self.fit(X).trajectories_

    def score(self, X, y=None) -> float:
        """Negative combined path length, so that higher is better."""
        return -float(self._run(X)[1].combined_path_length)
