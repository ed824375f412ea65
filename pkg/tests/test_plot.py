import xml.etree.ElementTree as ET

import pytest

from conftest import paper_params
from freepiston.dynamics import Sample, simulate_stroke
from freepiston.errors import ValidationError
from freepiston.optimizer import SearchConfig, optimize_bore_scale, sweep
from freepiston.plot import nice_ticks, render_plot

NS = "{http://www.w3.org/2000/svg}"


def parse(svg):
    return ET.fromstring(svg.encode())


def test_trace_plot_has_two_polylines():
    res = optimize_bore_scale(paper_params(), SearchConfig(1.0, 0.5, 0.5, 2.5))
    root = parse(render_plot(res.trace, "trace", x_s=0.0225))
    assert root.tag == f"{NS}svg"
    assert len(root.findall(f".//{NS}polyline")) == 2
    texts = [t.text for t in root.iter(f"{NS}text")]
    assert "max x" in texts and "bore scale" in texts


def test_trajectory_and_sweep_plots():
    traj = simulate_stroke(paper_params()).trajectory.samples
    root = parse(render_plot(traj, "trajectory"))
    assert len(root.findall(f".//{NS}polyline")) == 2
    rows = sweep(paper_params(), 0.5, 1.5, 21).rows
    root = parse(render_plot(rows, "sweep", x_s=0.0225))
    assert len(root.findall(f".//{NS}polyline")) == 1


def test_single_point_gives_marker():
    root = parse(render_plot([Sample(0.0, 0.0, 0.0, 1.0)], "trajectory"))
    assert root.findall(f".//{NS}polyline") == []
    assert len(root.findall(f".//{NS}circle")) == 2


def test_calibration_plot():
    root = parse(render_plot([(0.03, 0.5), (0.05, 0.86)], "calibration"))
    assert len(root.findall(f".//{NS}polyline")) == 1


def test_empty_and_unknown():
    with pytest.raises(ValidationError):
        render_plot([], "trace")
    with pytest.raises(ValidationError):
        render_plot([Sample(0, 0, 0, 0)], "pie")


@pytest.mark.parametrize("lo, hi", [(0.0, 1.0), (0.0123, 0.0225), (-3.2, 7.9), (5.0, 5.0),
                                    (0.0, 0.0), (1e-9, 3e-9)])
def test_nice_ticks_cover_range(lo, hi):
    ticks, a, b = nice_ticks(lo, hi)
    assert a <= lo and b >= hi
    assert 2 <= len(ticks) <= 12
    assert ticks == sorted(ticks)
