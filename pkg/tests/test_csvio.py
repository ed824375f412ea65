import pytest
from hypothesis import given, strategies as st

from conftest import paper_params
from freepiston import csvio
from freepiston.dynamics import Sample, simulate_stroke
from freepiston.errors import ValidationError
from freepiston.optimizer import IterationRecord, StepRule, SweepRow, optimize_bore_scale, sweep

finite = st.floats(allow_nan=False, allow_infinity=False)


def test_headers():
    assert csvio.dumps([], csvio.TRAJECTORY) == "t,x,v,a\n"
    assert csvio.dumps([], csvio.TRACE) == "j,lambda,x_max,p,s,J,rule,clamped\n"
    assert csvio.dumps([], csvio.SWEEP) == "lambda,x_max,J\n"


def test_trajectory_file_round_trip(tmp_path, paper):
    traj = simulate_stroke(paper).trajectory.samples
    path = tmp_path / "traj.csv"
    csvio.write_csv(path, traj, csvio.TRAJECTORY)
    raw = path.read_bytes()
    assert b"\r" not in raw
    assert csvio.read_csv(path, csvio.TRAJECTORY) == traj
    csvio.write_csv(path, csvio.read_csv(path, csvio.TRAJECTORY), csvio.TRAJECTORY)
    assert path.read_bytes() == raw


def test_trace_and_sweep_round_trip(paper):
    trace = optimize_bore_scale(paper).trace
    assert csvio.loads(csvio.dumps(trace, csvio.TRACE), csvio.TRACE) == trace
    rows = sweep(paper, 0.5, 1.5, 11).rows
    assert csvio.loads(csvio.dumps(rows, csvio.SWEEP), csvio.SWEEP) == rows


@given(st.lists(st.builds(Sample, finite, finite, finite, finite), max_size=20))
def test_trajectory_round_trip_property(rows):
    text = csvio.dumps(rows, csvio.TRAJECTORY)
    assert csvio.loads(text, csvio.TRAJECTORY) == rows
    assert csvio.dumps(csvio.loads(text, csvio.TRAJECTORY), csvio.TRAJECTORY) == text


@given(st.lists(st.builds(IterationRecord, st.integers(0, 10**6), finite, finite,
                          st.sampled_from([1, -1]), finite, finite, st.sampled_from(StepRule),
                          st.booleans()), max_size=20))
def test_trace_round_trip_property(rows):
    text = csvio.dumps(rows, csvio.TRACE)
    assert csvio.loads(text, csvio.TRACE) == rows


@given(st.lists(st.builds(SweepRow, finite, finite, finite), max_size=20))
def test_sweep_round_trip_property(rows):
    text = csvio.dumps(rows, csvio.SWEEP)
    assert csvio.loads(text, csvio.SWEEP) == rows


def test_bad_header_and_fields():
    with pytest.raises(ValidationError, match="header"):
        csvio.loads("a,b,c\n", csvio.SWEEP)
    with pytest.raises(ValidationError, match="line 2"):
        csvio.loads("lambda,x_max,J\n1.0,2.0\n", csvio.SWEEP)
    with pytest.raises(ValidationError, match="line 2"):
        csvio.loads("j,lambda,x_max,p,s,J,rule,clamped\n0,1,1,1,1,1,Held,maybe\n", csvio.TRACE)


def test_write_error_names_path(tmp_path):
    target = tmp_path / "missing" / "out.csv"
    with pytest.raises(OSError, match="missing"):
        csvio.write_csv(target, [], csvio.SWEEP)
