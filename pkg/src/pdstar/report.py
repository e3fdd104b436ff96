"""ASCII and SVG renderings, plus plot-ready CSV tables for sweep summaries."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union
from xml.sax.saxutils import escape

from .bench import COMPARISON_FIELDS, Summary, improvement_pct, write_table
from .engine import SimulationResult
from .grid import MARKERS, GridError, Scenario, grid_rows

DEFAULT_PALETTE = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#ff7f0e",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#17becf",
    "#bcbd22",
    "#7f7f7f",
)


@dataclass(frozen=True)
class RenderSpec:
    cell_size: int = 24
    palette: tuple = DEFAULT_PALETTE
    show_grid: bool = True
    annotate_steps: bool = False

    def __post_init__(self):
        if self.cell_size < 1:
            raise ValueError("cell_size must be >= 1")
        if not self.palette:
            raise ValueError("palette must not be empty")


def render_ascii(scenario: Scenario, result: Optional[SimulationResult] = None) -> str:
    """One line per grid row: ``#`` obstacle, ``G`` goal, robot markers, ``.`` free.

    With a result, every cell a robot visited carries that robot's marker
    (later robots overwrite earlier ones where paths cross).
    """
    if scenario.n_robots > len(MARKERS):
        raise GridError(
            f"{scenario.n_robots} robots exceed the {len(MARKERS)} ascii markers; use render_svg instead"
        )
    rows = [list(r) for r in grid_rows(scenario)]
    if result is not None:
        for i, traj in enumerate(result.trajectories):
            for x, y in traj:
                if (x, y) != scenario.goal:
                    rows[y][x] = MARKERS[i]
    return "\n".join("".join(r) for r in rows) + "\n"


def render_svg(scenario: Scenario, result: Optional[SimulationResult] = None, spec: RenderSpec = RenderSpec()) -> str:
    cs = spec.cell_size
    w, h = scenario.grid.width * cs, scenario.grid.height * cs
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<rect class="background" x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>',
    ]
    if spec.show_grid:
        out.append('<g class="grid" stroke="#dddddd" stroke-width="1">')
        for x in range(scenario.grid.width + 1):
            out.append(f'<line x1="{x * cs}" y1="0" x2="{x * cs}" y2="{h}"/>')
        for y in range(scenario.grid.height + 1):
            out.append(f'<line x1="0" y1="{y * cs}" x2="{w}" y2="{y * cs}"/>')
        out.append("</g>")
    out.append('<g class="obstacles" fill="#333333">')
    for x, y in sorted(scenario.grid.obstacles, key=lambda c: (c[1], c[0])):
        out.append(f'<rect class="obstacle" x="{x * cs}" y="{y * cs}" width="{cs}" height="{cs}"/>')
    out.append("</g>")
    gx, gy = scenario.goal
    out.append(
        f'<rect class="goal" x="{gx * cs}" y="{gy * cs}" width="{cs}" height="{cs}" '
        'fill="#ffd700" stroke="#000000"/>'
    )

    def centre(c):
        return f"{c[0] * cs + cs / 2:g},{c[1] * cs + cs / 2:g}"

    for i, start in enumerate(scenario.starts):
        color = spec.palette[i % len(spec.palette)]
        cx, cy = centre(start).split(",")
        out.append(
            f'<circle class="start" cx="{cx}" cy="{cy}" r="{max(cs / 3, 0.5):g}" fill="{color}">'
            f"<title>{escape(f'robot {i}')}</title></circle>"
        )
    if result is not None:
        for i, traj in enumerate(result.trajectories):
            color = spec.palette[i % len(spec.palette)]
            points = " ".join(centre(c) for c in traj)
            out.append(
                f'<polyline class="path" data-robot="{i}" points="{points}" fill="none" '
                f'stroke="{color}" stroke-width="{max(cs / 8, 1):g}"/>'
            )
            if spec.annotate_steps:
                for t, c in enumerate(traj):
                    cx, cy = centre(c).split(",")
                    out.append(
                        f'<text class="step" x="{cx}" y="{cy}" font-size="{max(cs / 3, 1):g}" '
                        f'fill="{color}">{t}</text>'
                    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


# -- plot data -----------------------------------------------------------------

PATH_FIELDS = ("density", "robots", "strategy", "path_mean", "path_q1", "path_median", "path_q3")
TIME_FIELDS = ("density", "robots", "strategy", "time_mean", "time_q1", "time_median", "time_q3")
PLOT_FILES = {
    "path_length": "plot_path_length.csv",
    "time": "plot_time.csv",
    "improvement": "plot_improvement.csv",
}


def plot_tables(summary: Summary) -> dict:
    """Rows for the path-length, timing and improvement figures."""
    path_rows = [{k: g[k] for k in PATH_FIELDS} for g in summary.groups]
    time_rows = [{k: g[k] for k in TIME_FIELDS} for g in summary.groups]
    means = {(g["density"], g["robots"], g["strategy"]): g["time_mean"] for g in summary.groups}
    improvement_rows = []
    for c in summary.comparisons:
        row = dict(c)
        row["improvement_pct"] = improvement_pct(
            means[(c["density"], c["robots"], c["baseline"])],
            means[(c["density"], c["robots"], "freedom")],
        )
        improvement_rows.append(row)
    return {"path_length": path_rows, "time": time_rows, "improvement": improvement_rows}


def emit_plot_data(summary: Summary, out_dir: Union[str, Path]) -> dict:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tables = plot_tables(summary)
    fields = {"path_length": PATH_FIELDS, "time": TIME_FIELDS, "improvement": COMPARISON_FIELDS}
    return {name: write_table(tables[name], fields[name], out_dir / PLOT_FILES[name]) for name in PLOT_FILES}


def save_text(text: str, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(text)
    return path
