"""
Gaze data models.

A GazeTrace holds exactly one slot per video frame. Frames without a
usable gaze sample are kept as explicit "missing" points rather than
being dropped, so frame index and list position always agree.
"""

from dataclasses import dataclass, field, replace
from typing import Any, Dict, Iterator, List, Optional, Tuple


@dataclass(frozen=True)
class GazePoint:
    """A single gaze sample for one frame."""
    frame: int
    x: Optional[float] = None       # pixels, column
    y: Optional[float] = None       # pixels, row
    present: bool = False
    interpolated: bool = field(default=False, compare=False)   # filled in by interpolate_missing

    @classmethod
    def missing(cls, frame: int) -> 'GazePoint':
        return cls(frame=frame)

    @property
    def xy(self) -> Tuple[float, float]:
        if not self.present:
            raise ValueError(f"gaze point at frame {self.frame} is missing")
        return self.x, self.y

    def to_dict(self) -> Dict[str, Any]:
        return {
            'frame': self.frame,
            'x': self.x,
            'y': self.y,
            'present': self.present,
            'interpolated': self.interpolated,
        }


@dataclass
class GazeTrace:
    """Time-ordered gaze samples for a clip, one slot per frame."""
    clip_id: str
    points: List[GazePoint] = field(default_factory=list)

    def __post_init__(self):
        for idx, point in enumerate(self.points):
            if point.frame != idx:
                raise ValueError(
                    f"gaze trace {self.clip_id!r}: slot {idx} holds frame {point.frame}"
                )

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[GazePoint]:
        return iter(self.points)

    def __getitem__(self, index: int) -> GazePoint:
        return self.points[index]

    @property
    def present_points(self) -> List[GazePoint]:
        return [p for p in self.points if p.present]

    @property
    def missing_count(self) -> int:
        return sum(1 for p in self.points if not p.present)

    @property
    def missing_fraction(self) -> float:
        return self.missing_count / len(self.points) if self.points else 0.0

    @property
    def all_missing(self) -> bool:
        """True when no frame carries a gaze sample (nothing to interpolate from)."""
        return not any(p.present for p in self.points)

    def with_points(self, points: List[GazePoint]) -> 'GazeTrace':
        return replace(self, points=list(points))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'clip_id': self.clip_id,
            'frames': len(self.points),
            'missing': self.missing_count,
            'points': [p.to_dict() for p in self.points],
        }
