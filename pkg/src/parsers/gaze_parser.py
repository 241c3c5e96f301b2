"""
Gaze CSV Parser

Gaze traces are stored per clip as `gaze.csv`:

    frame,x,y
    0,31.5,20.25
    1,,
    2,33.0,21.0

- one row per frame at most, rows sorted by frame
- empty x or y marks a missing sample (blink, off-target, tracker loss)
- frames absent from the file are missing as well

At most one gaze sample per video frame is assumed; denser trackers must
be resampled to the frame rate before export.
"""

import csv
import io
import logging
import math
from pathlib import Path
from typing import List, Optional, TextIO, Union

import numpy as np

from ..constants.formats import GAZE_HEADER
from ..errors import GazeParseError
from ..models.gaze import GazePoint, GazeTrace
from ..utils import clamp

logger = logging.getLogger(__name__)


def _parse_float(text: str, what: str, line: int, source: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise GazeParseError(f"non-numeric {what} value {text!r}", line, source)
    if not math.isfinite(value):
        raise GazeParseError(f"non-finite {what} value {text!r}", line, source)
    return value


def parse_gaze_csv(
    text: Union[str, TextIO],
    expected_frames: int,
    clip_id: str = "",
    source: str = "gaze.csv",
) -> GazeTrace:
    """
    Parse gaze CSV text into a trace with exactly `expected_frames` slots.

    Args:
        text: CSV content or an open text stream
        expected_frames: Number of frames T of the clip
        clip_id: Identifier stored on the trace
        source: Name used in error messages

    Returns:
        GazeTrace with one point per frame; missing frames are marked

    Raises:
        GazeParseError: bad header, malformed row, negative/duplicate/unsorted
            or out-of-range frame index
    """
    if expected_frames < 1:
        raise ValueError(f"expected_frames must be >= 1, got {expected_frames}")

    stream = io.StringIO(text) if isinstance(text, str) else text
    reader = csv.reader(stream)

    header = next(reader, None)
    if header is None or tuple(h.strip() for h in header) != GAZE_HEADER:
        raise GazeParseError(f"header must be {','.join(GAZE_HEADER)!r}", 1, source)

    points: List[GazePoint] = [GazePoint.missing(i) for i in range(expected_frames)]
    last_frame = -1

    for row in reader:
        line = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 3:
            raise GazeParseError(f"expected 3 fields, got {len(row)}", line, source)

        frame_text, x_text, y_text = (cell.strip() for cell in row)
        try:
            frame = int(frame_text)
        except ValueError:
            raise GazeParseError(f"non-numeric frame index {frame_text!r}", line, source)
        if frame < 0:
            raise GazeParseError(f"negative frame index {frame}", line, source)
        if frame == last_frame:
            raise GazeParseError(f"duplicate frame {frame}", line, source)
        if frame < last_frame:
            raise GazeParseError(f"frame {frame} after frame {last_frame}; rows must be sorted", line, source)
        if frame >= expected_frames:
            raise GazeParseError(
                f"frame {frame} out of range for a clip of {expected_frames} frames", line, source
            )
        last_frame = frame

        if not x_text or not y_text:
            continue
        x = _parse_float(x_text, 'x', line, source)
        y = _parse_float(y_text, 'y', line, source)
        points[frame] = GazePoint(frame=frame, x=x, y=y, present=True)

    trace = GazeTrace(clip_id=clip_id, points=points)
    logger.debug("parsed %s: %d frames, %d missing", source, len(trace), trace.missing_count)
    return trace


def serialize_gaze_csv(trace: GazeTrace) -> str:
    """Serialize a trace to gaze CSV text; every frame gets a row, missing ones empty."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(GAZE_HEADER)
    for point in trace:
        if point.present:
            writer.writerow([point.frame, repr(float(point.x)), repr(float(point.y))])
        else:
            writer.writerow([point.frame, '', ''])
    return out.getvalue()


def interpolate_missing(trace: GazeTrace) -> GazeTrace:
    """
    Fill missing gaze samples from their present neighbours.

    Interior gaps are filled by linear interpolation of x and y between the
    bounding present samples; leading and trailing gaps copy the nearest
    present sample. A trace with no present sample is returned unchanged
    (check `trace.all_missing`).
    """
    if len(trace) < 1:
        raise ValueError("cannot interpolate an empty trace")
    if trace.all_missing:
        logger.warning("gaze trace %r has no samples; left uninterpolated", trace.clip_id)
        return trace
    if trace.missing_count == 0:
        return trace

    present = trace.present_points
    known_frames = np.array([p.frame for p in present], dtype=np.float64)
    known_x = np.array([p.x for p in present], dtype=np.float64)
    known_y = np.array([p.y for p in present], dtype=np.float64)

    frames = np.arange(len(trace), dtype=np.float64)
    # np.interp holds the end values constant outside the known range
    xs = np.interp(frames, known_frames, known_x)
    ys = np.interp(frames, known_frames, known_y)

    points = []
    for point in trace:
        if point.present:
            points.append(point)
        else:
            points.append(GazePoint(
                frame=point.frame,
                x=float(xs[point.frame]),
                y=float(ys[point.frame]),
                present=True,
                interpolated=True,
            ))
    return trace.with_points(points)


def clamp_trace(trace: GazeTrace, height: int, width: int) -> GazeTrace:
    """Clamp present samples onto the frame: 0 <= x <= W-1, 0 <= y <= H-1."""
    points = []
    clamped = 0
    for point in trace:
        if not point.present:
            points.append(point)
            continue
        x = clamp(point.x, 0.0, float(width - 1))
        y = clamp(point.y, 0.0, float(height - 1))
        if x != point.x or y != point.y:
            clamped += 1
        points.append(GazePoint(point.frame, x, y, True, point.interpolated))
    if clamped:
        logger.debug("clamped %d off-frame gaze samples in %r", clamped, trace.clip_id)
    return trace.with_points(points)


class GazeCsvParser:
    """
    Parser for a clip's gaze.csv file.

    Usage:
        parser = GazeCsvParser("clip_0001/gaze.csv", expected_frames=24)
        parser.parse()
        trace = parser.trace
    """

    def __init__(self, filepath: str | Path, expected_frames: int, clip_id: Optional[str] = None):
        self.filepath = Path(filepath)
        self.expected_frames = expected_frames
        self.clip_id = clip_id if clip_id is not None else self.filepath.parent.name
        self.trace: Optional[GazeTrace] = None
        self._parsed = False

    def parse(self) -> None:
        """Parse the gaze file."""
        try:
            with open(self.filepath, 'r', encoding='utf-8', newline='') as f:
                self.trace = parse_gaze_csv(
                    f, self.expected_frames, clip_id=self.clip_id, source=str(self.filepath)
                )
        except OSError as e:
            raise GazeParseError(f"cannot read gaze file: {e}", source=str(self.filepath)) from e
        self._parsed = True

    def get_trace(self) -> GazeTrace:
        if not self._parsed:
            self.parse()
        return self.trace


def write_gaze_csv(filepath: str | Path, trace: GazeTrace) -> Path:
    """Write a trace to a gaze CSV file."""
    filepath = Path(filepath)
    with open(filepath, 'w', encoding='utf-8', newline='') as f:
        f.write(serialize_gaze_csv(trace))
    return filepath
