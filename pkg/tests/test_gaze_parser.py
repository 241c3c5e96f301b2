import pytest
from hypothesis import given, strategies as st

from src.errors import GazeParseError
from src.models import GazePoint, GazeTrace
from src.parsers import clamp_trace, interpolate_missing, parse_gaze_csv, serialize_gaze_csv

from .conftest import make_trace


def test_absent_row_is_missing():
    trace = parse_gaze_csv("frame,x,y\n0,3.0,4.0\n", expected_frames=2)
    assert len(trace) == 2
    assert trace[0] == GazePoint(0, 3.0, 4.0, True)
    assert not trace[1].present


def test_empty_fields_mean_missing():
    trace = parse_gaze_csv("frame,x,y\n0,,\n", expected_frames=1)
    assert not trace[0].present
    assert trace.all_missing


def test_duplicate_frame_rejected():
    with pytest.raises(GazeParseError, match="duplicate frame 0"):
        parse_gaze_csv("frame,x,y\n0,1,1\n0,2,2\n", expected_frames=2)


@pytest.mark.parametrize("text, line", [
    ("frame,x,y\n0,1,1\n-1,2,2\n", 3),
    ("frame,x,y\nzero,1,1\n", 2),
    ("frame,x,y\n0,a,1\n", 2),
    ("frame,x,y\n0,1\n", 2),
])
def test_malformed_rows_report_line(text, line):
    with pytest.raises(GazeParseError) as exc:
        parse_gaze_csv(text, expected_frames=3)
    assert exc.value.line == line
    assert f":{line}:" in str(exc.value)


def test_bad_header_and_unsorted_rows():
    with pytest.raises(GazeParseError):
        parse_gaze_csv("t,x,y\n0,1,1\n", expected_frames=1)
    with pytest.raises(GazeParseError, match="sorted"):
        parse_gaze_csv("frame,x,y\n1,1,1\n0,2,2\n", expected_frames=2)
    with pytest.raises(GazeParseError, match="out of range"):
        parse_gaze_csv("frame,x,y\n5,1,1\n", expected_frames=2)


def test_interpolation_midpoint_and_edges():
    trace = interpolate_missing(make_trace("c", [(0, 0), None, (2, 4)]))
    assert trace[1].xy == (1.0, 2.0)
    assert trace[1].interpolated

    trace = interpolate_missing(make_trace("c", [None, (5, 5)]))
    assert trace[0].xy == (5.0, 5.0)


def test_interpolation_leaves_all_missing_trace():
    trace = make_trace("c", [None, None, None])
    out = interpolate_missing(trace)
    assert out.all_missing
    assert out == trace


def test_clamp_trace_pulls_points_onto_frame():
    trace = clamp_trace(make_trace("c", [(-3, 2), (40, 70), None]), height=32, width=16)
    assert trace[0].xy == (0.0, 2.0)
    assert trace[1].xy == (15.0, 31.0)
    assert not trace[2].present


coordinate = st.floats(min_value=0, max_value=500, allow_nan=False, allow_infinity=False)
traces = st.lists(st.one_of(st.none(), st.tuples(coordinate, coordinate)), min_size=1, max_size=30)


@given(traces)
def test_parse_serialize_round_trip(coords):
    trace = make_trace("clip", coords)
    parsed = parse_gaze_csv(serialize_gaze_csv(trace), len(trace), clip_id="clip")
    assert parsed == trace


@given(traces)
def test_interpolation_is_idempotent(coords):
    once = interpolate_missing(make_trace("clip", coords))
    twice = interpolate_missing(once)
    assert [p.xy if p.present else None for p in once] == [p.xy if p.present else None for p in twice]
