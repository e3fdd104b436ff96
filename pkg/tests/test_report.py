import csv
import xml.etree.ElementTree as ET

import pytest

from pdstar.bench import BenchConfig, summarize, sweep
from pdstar.engine import run
from pdstar.grid import GridError, GridWorld, Scenario, parse_ascii
from pdstar.report import PLOT_FILES, RenderSpec, emit_plot_data, render_ascii, render_svg
from pdstar.worldgen import GenConfig, generate

SVG = "{http://www.w3.org/2000/svg}"


def test_ascii_small():
    s = Scenario(GridWorld(3, 3, frozenset({(0, 2)})), ((0, 0),), (1, 1))
    text = render_ascii(s)
    assert text.splitlines() == ["0..", ".G.", "#.."]
    assert text.count("#") == 1 and text.count("G") == 1


@pytest.mark.parametrize("seed", range(5))
def test_ascii_round_trip(seed):
    s = generate(GenConfig(12, 9, 0.25, 8, seed))
    assert parse_ascii(render_ascii(s), seed=seed) == s


def test_ascii_marks_paths():
    s = Scenario(GridWorld(5, 1), ((0, 0),), (4, 0))
    assert render_ascii(s, run(s)) == "0000G\n"


def test_ascii_marker_limit():
    s = generate(GenConfig(10, 10, 0.0, 37, 0))
    with pytest.raises(GridError):
        render_ascii(s)
    ET.fromstring(render_svg(s).encode())


def test_svg_structure():
    s = generate(GenConfig(10, 10, 0.2, 4, 2))
    root = ET.fromstring(render_svg(s).encode())
    assert root.tag == SVG + "svg"
    assert len(root.findall(f".//{SVG}polyline")) == 0
    assert len(root.findall(f".//{SVG}rect[@class='obstacle']")) == 20
    assert len(root.findall(f".//{SVG}circle")) == 4
    r = run(s)
    doc = render_svg(s, r, RenderSpec(cell_size=10, annotate_steps=True))
    root = ET.fromstring(doc.encode())
    lines = root.findall(f".//{SVG}polyline")
    assert len(lines) == 4
    assert [len(p.get("points").split()) for p in lines] == [len(t) for t in r.trajectories]
    assert doc == render_svg(s, r, RenderSpec(cell_size=10, annotate_steps=True))


def test_render_spec_checks():
    with pytest.raises(ValueError):
        RenderSpec(cell_size=0)


def _read(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_plot_data_empty(tmp_path):
    paths = emit_plot_data(summarize([]), tmp_path)
    for name, path in paths.items():
        lines = path.read_text().splitlines()
        assert len(lines) == 1, name
        assert path.name == PLOT_FILES[name]


def test_plot_data_rows(tmp_path):
    cfg = BenchConfig(size=10, densities=(0.1, 0.2, 0.3, 0.4), robot_counts=(2, 3), seeds=2, repetitions=1, hill_climb_budget=2)
    summary = summarize(sweep(cfg))
    paths = emit_plot_data(summary, tmp_path)
    time_rows = _read(paths["time"])
    assert len(time_rows) == 4 * 2 * 4
    assert len(_read(paths["path_length"])) == 32
    means = {(r["density"], r["robots"], r["strategy"]): float(r["time_mean"]) for r in time_rows}
    improvement = _read(paths["improvement"])
    assert len(improvement) == 4 * 2 * 3
    for row in improvement:
        base = means[(row["density"], row["robots"], row["baseline"])]
        mine = means[(row["density"], row["robots"], "freedom")]
        assert float(row["improvement_pct"]) == 100.0 * (base - mine) / base
