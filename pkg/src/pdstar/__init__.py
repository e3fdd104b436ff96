"""Multi-robot grid path planning with incremental search and dynamic priorities."""
from .bench import BenchConfig, BenchRecord, summarize, sweep
from .conflicts import StepEvents, StepPlan, detect_collisions, resolve_conflicts
from .dstar import NoPath, PlannerState, initialize, plan
from .engine import NoInitialPath, RunConfig, SimulationResult, StepLimitExceeded, run, validate
from .estimator import PDStarPlanner
from .grid import CostMap, GridWorld, Scenario, load_scenario, parse_scenario, save_scenario
from .priority import STRATEGIES, PriorityOrder, compute_freedom, order_freedom_index
from .validation import check_scenario
from .worldgen import GenConfig, GenerationFailed, batch, generate

__version__ = "0.1.0"
