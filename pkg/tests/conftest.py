import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pdstar.grid import CostMap, GridWorld, Scenario  # noqa: E402


@pytest.fixture
def open10():
    return GridWorld(10, 10)


@pytest.fixture
def open_costmap(open10):
    return CostMap(open10)


@pytest.fixture
def corridor_scenario():
    # 5x3 with a single free middle row
    walls = {(x, 0) for x in range(5)} | {(x, 2) for x in range(5)}
    return Scenario(GridWorld(5, 3, frozenset(walls)), ((0, 1),), (4, 1))


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
